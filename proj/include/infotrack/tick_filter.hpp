// Copyright 2026 The infotrack Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "infotrack/rng.hpp"
#include "infotrack/tracker.hpp"

namespace infotrack {

/// A price series: strictly increasing epoch-second timestamps, positive
/// prices, one price per timestamp.
struct TickSeries {
  std::vector<std::int64_t> timestamps;
  std::vector<double> prices;

  std::size_t size() const noexcept { return prices.size(); }

  void validate() const {
    if (timestamps.size() != prices.size()) {
      throw std::invalid_argument("TickSeries: column lengths differ");
    }
    for (std::size_t i = 0; i < prices.size(); ++i) {
      if (!(prices[i] > 0.0)) {
        throw std::invalid_argument("TickSeries: non-positive price");
      }
      if (i > 0 && timestamps[i] <= timestamps[i - 1]) {
        throw std::invalid_argument("TickSeries: timestamps not increasing");
      }
    }
  }
};

/// Synthetic series generator: piecewise-constant levels with regime jumps,
/// multiplicative micro-noise, and isolated single-tick liquidation wicks.
struct WickConfig {
  int n_ticks = 600;
  double base_price = 1000.0;
  std::vector<std::pair<int, double>> drift_regimes = {{300, 1050.0}};
  double wick_probability = 0.02;
  double wick_magnitude = 0.10;  // fraction of price
  double micro_noise = 0.001;    // fraction of price
  std::uint64_t seed = 42;

  void validate() const {
    if (n_ticks < 1) {
      throw std::invalid_argument("WickConfig: n_ticks must be >= 1");
    }
    if (!(base_price > 0.0)) {
      throw std::invalid_argument("WickConfig: base_price must be > 0");
    }
    if (!(wick_probability >= 0.0 && wick_probability <= 1.0)) {
      throw std::invalid_argument("WickConfig: wick_probability not in [0,1]");
    }
    if (!(wick_magnitude >= 0.0 && wick_magnitude < 1.0)) {
      throw std::invalid_argument("WickConfig: wick_magnitude not in [0,1)");
    }
    if (!(micro_noise >= 0.0)) {
      throw std::invalid_argument("WickConfig: micro_noise must be >= 0");
    }
    for (const auto& [start, level] : drift_regimes) {
      if (start < 0 || start >= n_ticks || !(level > 0.0)) {
        throw std::invalid_argument("WickConfig: bad drift regime");
      }
    }
  }
};

/// Parses a two-column "timestamp,price" CSV (header required). Malformed
/// rows are reported with their 1-based line number.
inline TickSeries ingest_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("ingest_csv: cannot open '" + path + "'");
  }
  auto fail = [](std::size_t line, const std::string& why) -> void {
    throw std::runtime_error("ingest_csv: line " + std::to_string(line) +
                             ": " + why);
  };

  std::string line;
  std::size_t line_no = 0;
  TickSeries series;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != "timestamp,price") {
        fail(line_no, "expected header 'timestamp,price'");
      }
      header_seen = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      fail(line_no, "expected exactly two comma-separated columns");
    }
    std::size_t used = 0;
    std::int64_t ts = 0;
    double price = 0.0;
    try {
      ts = std::stoll(line.substr(0, comma), &used);
      if (used != comma) fail(line_no, "malformed timestamp");
      const std::string price_str = line.substr(comma + 1);
      price = std::stod(price_str, &used);
      if (used != price_str.size()) fail(line_no, "malformed price");
    } catch (const std::logic_error&) {
      fail(line_no, "malformed row");
    }
    if (!(price > 0.0)) fail(line_no, "non-positive price");
    if (!series.timestamps.empty() && ts <= series.timestamps.back()) {
      fail(line_no, "non-monotone timestamp");
    }
    series.timestamps.push_back(ts);
    series.prices.push_back(price);
  }
  if (!header_seen) {
    throw std::runtime_error("ingest_csv: empty file");
  }
  if (series.size() == 0) {
    throw std::runtime_error("ingest_csv: empty series");
  }
  return series;
}

/// Deterministic synthetic tick series from the seeded stream. One-minute
/// bars; regime jumps move the level, wicks spike a single tick.
inline TickSeries generate_wick_series(const WickConfig& config) {
  config.validate();
  RandomStream rng(derive_key(config.seed, 0x711C));

  TickSeries series;
  series.timestamps.reserve(static_cast<std::size_t>(config.n_ticks));
  series.prices.reserve(static_cast<std::size_t>(config.n_ticks));
  for (int t = 0; t < config.n_ticks; ++t) {
    double level = config.base_price;
    for (const auto& [start, new_level] : config.drift_regimes) {
      if (t >= start) level = new_level;
    }
    double price = level * (1.0 + config.micro_noise * rng.normal());
    if (rng.uniform01() < config.wick_probability) {
      const double sign = (rng.uniform01() < 0.5) ? -1.0 : 1.0;
      price *= 1.0 + sign * config.wick_magnitude;
    }
    series.timestamps.push_back(60 * static_cast<std::int64_t>(t + 1));
    series.prices.push_back(price);
  }
  series.validate();
  return series;
}

/// Local level + trend model: state [level, trend], H observes the level.
inline KinematicModel make_level_trend_model(double q_intensity) {
  KinematicModel m;
  m.dt = 1.0;
  m.f_matrix = Eigen::MatrixXd{{1.0, 1.0}, {0.0, 1.0}};
  m.q_matrix = q_intensity * Eigen::MatrixXd{{0.25, 0.5}, {0.5, 1.0}};
  m.h_matrix = Eigen::MatrixXd{{1.0, 0.0}};
  return m;
}

/// Tick defaults: alpha = 0.6 puts the accept gate at ~14 in squared
/// Mahalanobis terms — micro-noise passes, 10% wicks are far outside.
inline TrackerConfig default_tick_tracker_config(double r_min = 1.0) {
  TrackerConfig c;
  c.geometry = GeometryParams{.delta = 0.5, .nu = 0.5, .alpha = 0.6};
  c.r_min = r_min * Eigen::MatrixXd::Identity(1, 1);
  c.max_iterations = 50;
  c.convergence_tol = 1e-9;
  return c;
}

/// Output of a head-to-head filtering run, aligned to the input timestamps.
/// truncated[t] marks ticks the tracker rejected (droplet-empty frames).
struct TickFilterResult {
  std::vector<double> tracker;
  std::vector<double> baseline;
  std::vector<bool> truncated;
};

/// Runs the information tracker and the baseline Kalman filter over the
/// series, one tick per frame. Both see the same per-tick noise floor
/// (r_min); only the truncation differs. Strictly causal.
inline TickFilterResult filter_series(const TickSeries& series,
                                      const TrackerConfig& tracker_config,
                                      double q_intensity) {
  series.validate();
  tracker_config.validate();
  if (series.size() < 2) {
    throw std::invalid_argument("filter_series: need at least 2 ticks");
  }
  if (tracker_config.r_min.rows() != 1) {
    throw std::invalid_argument("filter_series: r_min must be 1x1");
  }
  const KinematicModel model = make_level_trend_model(q_intensity);
  const double r = tracker_config.r_min(0, 0);

  GaussianState tracker_state{Eigen::Vector2d(series.prices[0], 0.0),
                              Eigen::Vector2d(r, r).asDiagonal()};
  GaussianState baseline_state = tracker_state;

  TickFilterResult out;
  const std::size_t n = series.size();
  out.tracker.reserve(n);
  out.baseline.reserve(n);
  out.truncated.reserve(n);
  out.tracker.push_back(series.prices[0]);
  out.baseline.push_back(series.prices[0]);
  out.truncated.push_back(false);

  for (std::size_t t = 1; t < n; ++t) {
    PointCloud tick;
    tick.points.push_back(Eigen::VectorXd::Constant(1, series.prices[t]));

    auto [post, proj] = step(tracker_state, tick, model, tracker_config);
    tracker_state = std::move(post);
    out.tracker.push_back(tracker_state.mean[0]);
    out.truncated.push_back(proj.droplet_empty);

    baseline_state =
        baseline_map_step(baseline_state, tick, model, tracker_config.r_min);
    out.baseline.push_back(baseline_state.mean[0]);
  }
  return out;
}

/// Total variation of a filtered path; proxy for trading activity.
inline double turnover(const std::vector<double>& estimates) {
  if (estimates.size() < 2) {
    throw std::invalid_argument("turnover: need at least 2 estimates");
  }
  double acc = 0.0;
  for (std::size_t i = 1; i < estimates.size(); ++i) {
    acc += std::abs(estimates[i] - estimates[i - 1]);
  }
  return acc;
}

/// Five-column output CSV: timestamp, price, tracker, baseline, truncated.
inline std::string series_csv(const TickSeries& series,
                              const TickFilterResult& result) {
  if (series.size() != result.tracker.size()) {
    throw std::invalid_argument("series_csv: series/result size mismatch");
  }
  std::ostringstream out;
  out << "timestamp,price,tracker,baseline,truncated\n";
  char buf[96];
  for (std::size_t i = 0; i < series.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%lld,%.17g,%.17g,%.17g,%d",
                  static_cast<long long>(series.timestamps[i]),
                  series.prices[i], result.tracker[i], result.baseline[i],
                  result.truncated[i] ? 1 : 0);
    out << buf << '\n';
  }
  return out.str();
}

}  // namespace infotrack
