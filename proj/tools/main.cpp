// Copyright 2026 The infotrack Authors
// SPDX-License-Identifier: Apache-2.0
//
// infotrack CLI: geometry evaluation, LiDAR Monte Carlo benchmark, tick
// filtering, and single-qubit tomography, with machine-readable output.
//
// Exit codes: 0 success, 1 domain error, 2 usage error.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "infotrack/geometry.hpp"
#include "infotrack/lidar_bench.hpp"
#include "infotrack/tick_filter.hpp"
#include "infotrack/tomography.hpp"
#include "infotrack/version.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::string default_out_dir() {
  if (const char* env = std::getenv("INFOTRACK_OUT_DIR")) {
    return env;
  }
  return "out";
}

// write-then-rename so failures never leave partial files behind
void atomic_write(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
    if (!out) {
      throw std::runtime_error("cannot write '" + path.string() + "'");
    }
  }
  fs::rename(tmp, path);
}

void write_manifest(const fs::path& out_dir, const std::string& command,
                    const json& config_echo, std::uint64_t master_seed,
                    const std::vector<std::string>& outputs) {
  json manifest;
  manifest["command"] = command;
  manifest["config_echo"] = config_echo;
  manifest["master_seed"] = master_seed;
  manifest["artifact_version"] = infotrack::kArtifactVersion;
  manifest["outputs"] = outputs;
  atomic_write(out_dir / "manifest.json", manifest.dump(2) + "\n");
}

std::vector<double> parse_doubles(const std::string& csv) {
  std::vector<double> values;
  std::stringstream stream(csv);
  std::string token;
  while (std::getline(stream, token, ',')) {
    std::size_t used = 0;
    values.push_back(std::stod(token, &used));
    if (used != token.size()) {
      throw std::invalid_argument("malformed number '" + token + "'");
    }
  }
  return values;
}

infotrack::GaussianState parse_gaussian(const std::string& mean_csv,
                                        const std::string& cov_csv,
                                        const std::string& name) {
  const auto mean = parse_doubles(mean_csv);
  const auto cov = parse_doubles(cov_csv);
  const auto d = mean.size();
  if (cov.size() != d * d) {
    throw std::invalid_argument(name + ": covariance must have " +
                                std::to_string(d * d) +
                                " entries (row-major), got " +
                                std::to_string(cov.size()));
  }
  infotrack::GaussianState g;
  g.mean = Eigen::Map<const Eigen::VectorXd>(mean.data(),
                                             static_cast<long>(d));
  g.cov = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic,
                                         Eigen::Dynamic, Eigen::RowMajor>>(
      cov.data(), static_cast<long>(d), static_cast<long>(d));
  return g;
}

// open-interval and positivity checks as CLI validators -> usage errors
std::string check_open_unit(const std::string& value) {
  const double v = std::atof(value.c_str());
  if (!(v > 0.0 && v < 1.0)) return "must lie strictly inside (0, 1)";
  return {};
}

std::string check_nu(const std::string& value) {
  const double v = std::atof(value.c_str());
  if (!(v > 0.0 && v <= 1.0)) return "must lie in (0, 1]";
  return {};
}

std::string check_positive(const std::string& value) {
  const double v = std::atof(value.c_str());
  if (!(v > 0.0)) return "must be > 0";
  return {};
}

json summary_json(const infotrack::MonteCarloSummary& s) {
  json j;
  j["mean_rmse"] = s.mean_rmse;
  j["std_rmse"] = s.std_rmse;
  j["mean_max_error"] = s.mean_max_error;
  j["std_max_error"] = s.std_max_error;
  j["n_trials"] = s.n_trials;
  return j;
}

json complex_json(const std::complex<double>& c) {
  return json::array({c.real(), c.imag()});
}

json density_json(const infotrack::DensityMatrix& rho) {
  return json::array(
      {json::array({complex_json(rho.elements(0, 0)),
                    complex_json(rho.elements(0, 1))}),
       json::array({complex_json(rho.elements(1, 0)),
                    complex_json(rho.elements(1, 1))})});
}

// ---------------------------------------------------------------- separation

struct SeparationArgs {
  std::string mean, mean0, cov, cov0;
  double delta = 0.5, nu = 0.5, alpha = 1.0;
  std::string out_dir = default_out_dir();
};

int run_separation(const SeparationArgs& args) {
  const auto p = parse_gaussian(args.mean, args.cov, "p");
  const auto p0 = parse_gaussian(args.mean0, args.cov0, "p0");
  const infotrack::GeometryParams params{.delta = args.delta,
                                         .nu = args.nu,
                                         .alpha = args.alpha};
  const double a = infotrack::gaussian_overlap(p, p0, args.delta);
  const double i_delta = infotrack::delta_separation(p, p0, args.delta);
  json out;
  out["A"] = a;
  out["I"] = i_delta;
  out["inside"] = infotrack::within_boundary(i_delta, params);
  out["pi"] = infotrack::droplet_density(i_delta, params);
  std::cout << out.dump() << "\n";

  json echo;
  echo["mean"] = args.mean;
  echo["cov"] = args.cov;
  echo["mean0"] = args.mean0;
  echo["cov0"] = args.cov0;
  echo["delta"] = args.delta;
  echo["nu"] = args.nu;
  echo["alpha"] = args.alpha;
  write_manifest(args.out_dir, "separation", echo, 0, {});
  return 0;
}

// --------------------------------------------------------------- bench-lidar

struct BenchArgs {
  infotrack::LidarScenarioConfig scenario;
  double delta = 0.5, nu = 0.5, alpha = 0.55;
  double r_min = 0.25;
  int max_iterations = 50;
  double tol = 1e-6;
  int trials = 1000;
  int workers = 0;
  std::vector<double> ghost_offset = {0.0, 40.0, 0.0};
  std::string out_dir = default_out_dir();
};

int run_bench_lidar(BenchArgs& args) {
  if (args.ghost_offset.size() != 3) {
    throw std::invalid_argument("--ghost-offset needs exactly 3 numbers");
  }
  args.scenario.ghost_offset = Eigen::Vector3d(
      args.ghost_offset[0], args.ghost_offset[1], args.ghost_offset[2]);
  args.scenario.validate();

  infotrack::TrackerConfig tracker_config;
  tracker_config.geometry = infotrack::GeometryParams{.delta = args.delta,
                                                      .nu = args.nu,
                                                      .alpha = args.alpha};
  tracker_config.r_min = args.r_min * Eigen::MatrixXd::Identity(3, 3);
  tracker_config.max_iterations = args.max_iterations;
  tracker_config.convergence_tol = args.tol;
  tracker_config.validate();

  const auto model = infotrack::make_white_noise_accel_model(
      args.scenario.dt, args.scenario.process_noise_intensity);
  const int workers = args.workers > 0
                          ? args.workers
                          : static_cast<int>(std::thread::hardware_concurrency());

  const auto [tracker, baseline] = infotrack::monte_carlo(
      args.scenario, tracker_config, model, args.trials, workers);

  // per-frame trace of trial 0, same seeding path as the benchmark
  std::vector<infotrack::TraceRow> rows;
  infotrack::run_trial(
      infotrack::trial_scenario(args.scenario, 0), tracker_config, model,
      [&](const infotrack::TraceRow& row, const infotrack::ProjectionResult&) {
        rows.push_back(row);
      });

  json summary;
  summary["tracker"] = summary_json(tracker);
  summary["baseline"] = summary_json(baseline);

  json echo;
  echo["dt"] = args.scenario.dt;
  echo["n_frames"] = args.scenario.n_frames;
  echo["sigma_sensor"] = args.scenario.sigma_sensor;
  echo["sigma_ghost"] = args.scenario.sigma_ghost;
  echo["ghost_offset"] = args.ghost_offset;
  echo["n_valid"] = args.scenario.n_valid;
  echo["n_ghost"] = args.scenario.n_ghost;
  echo["process_noise_intensity"] = args.scenario.process_noise_intensity;
  echo["forward_speed"] = args.scenario.forward_speed;
  echo["lateral_peak"] = args.scenario.lateral_peak;
  echo["delta"] = args.delta;
  echo["nu"] = args.nu;
  echo["alpha"] = args.alpha;
  echo["r_min"] = args.r_min;
  echo["max_iterations"] = args.max_iterations;
  echo["convergence_tol"] = args.tol;
  echo["trials"] = args.trials;
  echo["workers_requested"] = args.workers;

  const fs::path out_dir(args.out_dir);
  atomic_write(out_dir / "summary.json", summary.dump(2) + "\n");
  atomic_write(out_dir / "trace.csv", infotrack::trace_csv(rows, 0));
  write_manifest(out_dir, "bench-lidar", echo, args.scenario.seed,
                 {(out_dir / "summary.json").string(),
                  (out_dir / "trace.csv").string()});

  std::printf("%-22s %-24s %s\n", "Estimator", "Mean RMSE (+/-1s)",
              "Mean max error (+/-1s)");
  std::printf("%-22s %.3f m +/- %.3f m       %.3f m +/- %.3f m\n",
              "information tracker", tracker.mean_rmse, tracker.std_rmse,
              tracker.mean_max_error, tracker.std_max_error);
  std::printf("%-22s %.3f m +/- %.3f m       %.3f m +/- %.3f m\n",
              "baseline MAP", baseline.mean_rmse, baseline.std_rmse,
              baseline.mean_max_error, baseline.std_max_error);
  return 0;
}

// ----------------------------------------------------------------- track-csv

struct TrackCsvArgs {
  std::string input;
  bool synthetic = false;
  bool no_regimes = false;
  infotrack::WickConfig wick;
  std::vector<std::string> regimes;
  double delta = 0.5, nu = 0.5, alpha = 0.6;
  double q = 0.05;
  double r_min = 1.0;
  std::string out_dir = default_out_dir();
};

int run_track_csv(TrackCsvArgs& args) {
  infotrack::TickSeries series;
  if (args.synthetic) {
    if (args.no_regimes) {
      args.wick.drift_regimes.clear();
    } else if (!args.regimes.empty()) {
      args.wick.drift_regimes.clear();
      for (const auto& spec : args.regimes) {
        const auto colon = spec.find(':');
        if (colon == std::string::npos) {
          throw std::invalid_argument("--regime expects start:level, got '" +
                                      spec + "'");
        }
        args.wick.drift_regimes.emplace_back(
            std::stoi(spec.substr(0, colon)),
            std::stod(spec.substr(colon + 1)));
      }
    }
    series = infotrack::generate_wick_series(args.wick);
  } else {
    series = infotrack::ingest_csv(args.input);
  }

  auto tracker_config = infotrack::default_tick_tracker_config(args.r_min);
  tracker_config.geometry = infotrack::GeometryParams{.delta = args.delta,
                                                      .nu = args.nu,
                                                      .alpha = args.alpha};
  tracker_config.validate();

  const auto result = infotrack::filter_series(series, tracker_config, args.q);
  int n_truncated = 0;
  for (bool b : result.truncated) n_truncated += b ? 1 : 0;

  json metrics;
  metrics["tracker_turnover"] = infotrack::turnover(result.tracker);
  metrics["baseline_turnover"] = infotrack::turnover(result.baseline);
  metrics["n_truncated"] = n_truncated;

  json echo;
  echo["input"] = args.synthetic ? "<synthetic>" : args.input;
  echo["synthetic"] = args.synthetic;
  if (args.synthetic) {
    echo["n_ticks"] = args.wick.n_ticks;
    echo["base_price"] = args.wick.base_price;
    json regimes = json::array();
    for (const auto& [start, level] : args.wick.drift_regimes) {
      regimes.push_back(json::array({start, level}));
    }
    echo["drift_regimes"] = regimes;
    echo["wick_probability"] = args.wick.wick_probability;
    echo["wick_magnitude"] = args.wick.wick_magnitude;
    echo["micro_noise"] = args.wick.micro_noise;
  }
  echo["delta"] = args.delta;
  echo["nu"] = args.nu;
  echo["alpha"] = args.alpha;
  echo["q"] = args.q;
  echo["r_min"] = args.r_min;

  const fs::path out_dir(args.out_dir);
  atomic_write(out_dir / "filtered.csv", infotrack::series_csv(series, result));
  atomic_write(out_dir / "metrics.json", metrics.dump(2) + "\n");
  write_manifest(out_dir, "track-csv", echo, args.wick.seed,
                 {(out_dir / "filtered.csv").string(),
                  (out_dir / "metrics.json").string()});

  std::cout << metrics.dump() << "\n";
  return 0;
}

// ---------------------------------------------------------------------- tomo

struct TomoArgs {
  std::optional<double> x, y, z;
  std::optional<double> sigma;
  std::uint64_t seed = 42;
  double delta = 0.5, nu = 1.0, alpha = 12.0;
  std::string out_dir = default_out_dir();
};

int run_tomo(const TomoArgs& args) {
  infotrack::PauliExpectations s;
  if (args.x && args.y && args.z) {
    s = infotrack::PauliExpectations{*args.x, *args.y, *args.z, 0.0};
  } else {
    // simulation mode: noisy readout of the pure ground state
    infotrack::RandomStream rng(infotrack::derive_key(args.seed, 0x70B0));
    s = infotrack::simulate_measurements(infotrack::from_bloch(0.0, 0.0, 1.0),
                                         *args.sigma, rng);
  }
  const infotrack::GeometryParams params{.delta = args.delta,
                                         .nu = args.nu,
                                         .alpha = args.alpha};
  const auto rho_mle = infotrack::linear_inversion(s);
  const auto rho_bounded = infotrack::bounded_reconstruction(s, params);
  const auto eig_mle = infotrack::eigenvalues(rho_mle);
  const auto eig_bounded = infotrack::eigenvalues(rho_bounded);

  json out;
  out["rho_mle"] = density_json(rho_mle);
  out["rho_bounded"] = density_json(rho_bounded);
  out["eigenvalues_mle"] = json::array({eig_mle.first, eig_mle.second});
  out["eigenvalues_bounded"] =
      json::array({eig_bounded.first, eig_bounded.second});
  std::cout << out.dump(2) << "\n";

  json echo;
  echo["x"] = s.x;
  echo["y"] = s.y;
  echo["z"] = s.z;
  echo["sigma"] = s.sigma;
  echo["delta"] = args.delta;
  echo["nu"] = args.nu;
  echo["alpha"] = args.alpha;
  write_manifest(args.out_dir, "tomo", echo, args.seed, {});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust sequential state estimation on bounded information "
               "geometry"};
  app.require_subcommand(1);

  // separation ---------------------------------------------------------
  SeparationArgs sep;
  auto* cmd_sep = app.add_subcommand(
      "separation", "Closed-form overlap, separation and droplet density of "
                    "two Gaussians");
  cmd_sep->add_option("--mean", sep.mean, "mean of p, comma-separated")
      ->required();
  cmd_sep->add_option("--cov", sep.cov, "covariance of p, row-major flat list")
      ->required();
  cmd_sep->add_option("--mean0", sep.mean0, "mean of the pre-prior p0")
      ->required();
  cmd_sep->add_option("--cov0", sep.cov0, "covariance of p0, row-major")
      ->required();
  cmd_sep->add_option("--delta", sep.delta, "separation order, in (0,1)")
      ->check(CLI::Validator(check_open_unit, "DELTA"));
  cmd_sep->add_option("--nu", sep.nu, "deformation, in (0,1]")
      ->check(CLI::Validator(check_nu, "NU"));
  cmd_sep->add_option("--alpha", sep.alpha, "constraint strength, > 0")
      ->check(CLI::Validator(check_positive, "ALPHA"));
  cmd_sep->add_option("--out-dir", sep.out_dir, "manifest directory");

  // bench-lidar --------------------------------------------------------
  BenchArgs bench;
  auto* cmd_bench = app.add_subcommand(
      "bench-lidar", "Monte Carlo benchmark: information tracker vs "
                     "unconstrained MAP baseline");
  cmd_bench->add_option("--trials", bench.trials, "number of trials")
      ->check(CLI::PositiveNumber);
  cmd_bench->add_option("--seed", bench.scenario.seed, "master seed");
  cmd_bench->add_option("--workers", bench.workers,
                        "worker threads (0 = hardware)");
  cmd_bench->add_option("--dt", bench.scenario.dt, "seconds per frame");
  cmd_bench->add_option("--frames", bench.scenario.n_frames, "frames per trial");
  cmd_bench->add_option("--sigma-sensor", bench.scenario.sigma_sensor,
                        "valid-return noise, m");
  cmd_bench->add_option("--sigma-ghost", bench.scenario.sigma_ghost,
                        "ghost-cluster noise, m");
  cmd_bench->add_option("--ghost-offset", bench.ghost_offset,
                        "ghost offset, 3 numbers")
      ->expected(3);
  cmd_bench->add_option("--n-valid", bench.scenario.n_valid,
                        "valid returns per frame");
  cmd_bench->add_option("--n-ghost", bench.scenario.n_ghost,
                        "ghost returns per frame");
  cmd_bench->add_option("--q", bench.scenario.process_noise_intensity,
                        "process noise intensity");
  cmd_bench->add_option("--forward-speed", bench.scenario.forward_speed,
                        "m/s along x");
  cmd_bench->add_option("--lateral-peak", bench.scenario.lateral_peak,
                        "maneuver apex, m");
  cmd_bench->add_option("--delta", bench.delta, "separation order")
      ->check(CLI::Validator(check_open_unit, "DELTA"));
  cmd_bench->add_option("--nu", bench.nu, "deformation")
      ->check(CLI::Validator(check_nu, "NU"));
  cmd_bench->add_option("--alpha", bench.alpha, "constraint strength")
      ->check(CLI::Validator(check_positive, "ALPHA"));
  cmd_bench->add_option("--r-min", bench.r_min, "covariance floor, m^2");
  cmd_bench->add_option("--max-iterations", bench.max_iterations,
                        "projection iteration cap");
  cmd_bench->add_option("--tol", bench.tol, "projection convergence tol, m");
  cmd_bench->add_option("--out-dir", bench.out_dir, "output directory");

  // track-csv ----------------------------------------------------------
  TrackCsvArgs track;
  auto* cmd_track = app.add_subcommand(
      "track-csv", "Filter a tick series: information tracker vs baseline "
                   "Kalman");
  auto* input_opt =
      cmd_track->add_option("--input", track.input, "CSV (timestamp,price)");
  auto* synth_opt = cmd_track->add_flag("--synthetic", track.synthetic,
                                        "generate a synthetic wick series");
  input_opt->excludes(synth_opt);
  cmd_track->add_option("--ticks", track.wick.n_ticks, "synthetic length");
  cmd_track->add_option("--base-price", track.wick.base_price,
                        "synthetic base price");
  auto* regime_opt = cmd_track->add_option(
      "--regime", track.regimes, "regime jump start:level (repeatable)");
  cmd_track->add_flag("--no-regimes", track.no_regimes,
                      "flat level, no regime jumps")
      ->excludes(regime_opt);
  cmd_track->add_option("--wick-prob", track.wick.wick_probability,
                        "per-tick wick probability");
  cmd_track->add_option("--wick-mag", track.wick.wick_magnitude,
                        "wick magnitude, fraction");
  cmd_track->add_option("--micro-noise", track.wick.micro_noise,
                        "micro noise, fraction");
  cmd_track->add_option("--seed", track.wick.seed, "synthetic seed");
  cmd_track->add_option("--delta", track.delta, "separation order")
      ->check(CLI::Validator(check_open_unit, "DELTA"));
  cmd_track->add_option("--nu", track.nu, "deformation")
      ->check(CLI::Validator(check_nu, "NU"));
  cmd_track->add_option("--alpha", track.alpha, "constraint strength")
      ->check(CLI::Validator(check_positive, "ALPHA"));
  cmd_track->add_option("--q", track.q, "process noise intensity");
  cmd_track->add_option("--r-min", track.r_min, "per-tick noise floor");
  cmd_track->add_option("--out-dir", track.out_dir, "output directory");

  // tomo ---------------------------------------------------------------
  TomoArgs tomo;
  auto* cmd_tomo = app.add_subcommand(
      "tomo", "Single-qubit reconstruction: linear inversion vs bounded");
  auto* x_opt = cmd_tomo->add_option("--x", tomo.x, "Pauli X readout");
  auto* y_opt = cmd_tomo->add_option("--y", tomo.y, "Pauli Y readout");
  auto* z_opt = cmd_tomo->add_option("--z", tomo.z, "Pauli Z readout");
  auto* sigma_opt = cmd_tomo->add_option(
      "--sigma", tomo.sigma, "simulate readouts of |0> with this noise");
  auto* seed_opt = cmd_tomo->add_option("--seed", tomo.seed, "simulation seed");
  sigma_opt->excludes(x_opt)->excludes(y_opt)->excludes(z_opt);
  seed_opt->needs(sigma_opt);
  x_opt->needs(y_opt)->needs(z_opt);
  y_opt->needs(x_opt)->needs(z_opt);
  z_opt->needs(x_opt)->needs(y_opt);
  cmd_tomo->add_option("--delta", tomo.delta, "separation order")
      ->check(CLI::Validator(check_open_unit, "DELTA"));
  cmd_tomo->add_option("--nu", tomo.nu, "deformation")
      ->check(CLI::Validator(check_nu, "NU"));
  cmd_tomo->add_option("--alpha", tomo.alpha, "constraint strength")
      ->check(CLI::Validator(check_positive, "ALPHA"));
  cmd_tomo->add_option("--out-dir", tomo.out_dir, "manifest directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cmd_sep->parsed()) return run_separation(sep);
    if (cmd_bench->parsed()) return run_bench_lidar(bench);
    if (cmd_track->parsed()) {
      if (!track.synthetic && track.input.empty()) {
        std::cerr << "track-csv: need --input or --synthetic\n";
        return 2;
      }
      return run_track_csv(track);
    }
    if (cmd_tomo->parsed()) {
      const bool explicit_xyz = tomo.x && tomo.y && tomo.z;
      if (!explicit_xyz && !tomo.sigma) {
        std::cerr << "tomo: need either --x/--y/--z or --sigma\n";
        return 2;
      }
      return run_tomo(tomo);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
