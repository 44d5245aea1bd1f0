// Copyright 2026 The infotrack Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "infotrack/gaussian.hpp"

namespace infotrack {

/// Parameters of the bounded information geometry.
///
/// delta selects the separation family, nu the deformation of the droplet
/// prior, alpha the constraint strength. The separation budget 1/(nu*alpha)
/// is the hard boundary beyond which probability mass vanishes.
struct GeometryParams {
  double delta = 0.5;  // open interval (0, 1)
  double nu = 0.5;     // half-open interval (0, 1]
  double alpha = 1.0;  // > 0

  double separation_budget() const noexcept { return 1.0 / (nu * alpha); }

  void validate() const {
    if (!(delta > 0.0 && delta < 1.0)) {
      throw std::invalid_argument("GeometryParams: delta must be in (0, 1)");
    }
    if (!(nu > 0.0 && nu <= 1.0)) {
      throw std::invalid_argument("GeometryParams: nu must be in (0, 1]");
    }
    if (!(alpha > 0.0)) {
      throw std::invalid_argument("GeometryParams: alpha must be > 0");
    }
    if (!std::isfinite(separation_budget())) {
      throw std::invalid_argument("GeometryParams: separation budget overflow");
    }
  }
};

/// A density discretized on a uniform 1D grid; trapezoidal mass must be 1.
struct GridDensity {
  std::vector<double> support;
  std::vector<double> values;

  double step() const {
    return (support.back() - support.front()) /
           static_cast<double>(support.size() - 1);
  }

  double trapezoid_mass() const {
    const double h = step();
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
      acc += 0.5 * h * (values[i] + values[i + 1]);
    }
    return acc;
  }

  void validate() const {
    if (support.size() < 2 || support.size() != values.size()) {
      throw std::invalid_argument("GridDensity: need matching grids, size >= 2");
    }
    const double h = step();
    if (!(h > 0.0)) {
      throw std::invalid_argument("GridDensity: support must be increasing");
    }
    for (std::size_t i = 0; i + 1 < support.size(); ++i) {
      if (std::abs((support[i + 1] - support[i]) - h) > 1e-9 * std::max(1.0, h)) {
        throw std::invalid_argument("GridDensity: support must be uniform");
      }
    }
    for (double v : values) {
      if (!(v >= 0.0)) {
        throw std::invalid_argument("GridDensity: values must be nonnegative");
      }
    }
    if (std::abs(trapezoid_mass() - 1.0) > 1e-6) {
      throw std::invalid_argument("GridDensity: density is not normalized");
    }
  }
};

/// Generalized overlap A(delta) = ∫ p^delta p0^(1-delta) dx between two
/// Gaussians, in closed form.
///
///   A = |Σ|^((1-δ)/2) |Σ0|^(δ/2) / |Σm|^(1/2)
///       · exp(-½ δ(1-δ) (μ-μ0)ᵀ Σm⁻¹ (μ-μ0)),   Σm = δΣ0 + (1-δ)Σ.
///
/// Everything runs through Cholesky factors; non-positive-definite inputs
/// throw instead of being regularized.
inline double gaussian_overlap(const GaussianState& p, const GaussianState& p0,
                               double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("gaussian_overlap: delta must be in (0, 1)");
  }
  validate_gaussian(p, "gaussian_overlap: p");
  validate_gaussian(p0, "gaussian_overlap: p0");
  if (p.dim() != p0.dim()) {
    throw std::invalid_argument("gaussian_overlap: dimension mismatch");
  }
  if (p.mean == p0.mean && p.cov == p0.cov) {
    return 1.0;  // identical distributions overlap exactly
  }

  const Eigen::MatrixXd mix = delta * p0.cov + (1.0 - delta) * p.cov;
  const auto llt_p = cholesky_or_throw(p.cov, "gaussian_overlap: cov");
  const auto llt_p0 = cholesky_or_throw(p0.cov, "gaussian_overlap: cov0");
  const auto llt_mix = cholesky_or_throw(mix, "gaussian_overlap: mixture cov");

  const double quad = mahalanobis_sq(llt_mix, p.mean - p0.mean);
  const double log_a = 0.5 * (1.0 - delta) * log_det(llt_p) +
                       0.5 * delta * log_det(llt_p0) -
                       0.5 * log_det(llt_mix) -
                       0.5 * delta * (1.0 - delta) * quad;
  return std::min(1.0, std::exp(log_a));
}

/// Delta information separation I_δ = (1 - A(δ)) / (δ(1-δ)); zero iff the
/// arguments coincide.
inline double delta_separation(const GaussianState& p, const GaussianState& p0,
                               double delta) {
  const double a = gaussian_overlap(p, p0, delta);
  return std::max(0.0, (1.0 - a) / (delta * (1.0 - delta)));
}

/// Delta information separation of two grid densities by trapezoidal
/// quadrature:
///
///   I_δ = 1/(δ(1-δ)) ∫ [δ f + (1-δ) f0 - f^δ f0^(1-δ)] dμ.
///
/// This is the independent numerical route against which the closed-form
/// Gaussian path is checked.
inline double separation_quadrature(const GridDensity& f, const GridDensity& f0,
                                    double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("separation_quadrature: delta must be in (0, 1)");
  }
  f.validate();
  f0.validate();
  if (f.support.size() != f0.support.size() ||
      f.support.front() != f0.support.front() ||
      f.support.back() != f0.support.back()) {
    throw std::invalid_argument("separation_quadrature: grids differ");
  }

  const double h = f.step();
  const std::size_t n = f.values.size();
  auto integrand = [&](std::size_t i) {
    const double fi = f.values[i];
    const double gi = f0.values[i];
    return delta * fi + (1.0 - delta) * gi -
           std::pow(fi, delta) * std::pow(gi, 1.0 - delta);
  };
  double acc = 0.5 * (integrand(0) + integrand(n - 1));
  for (std::size_t i = 1; i + 1 < n; ++i) {
    acc += integrand(i);
  }
  return acc * h / (delta * (1.0 - delta));
}

/// Unnormalized droplet prior density max(0, 1 - να I)^(1/ν). Strictly
/// positive inside the boundary, identically zero at and beyond it. The
/// partition constant is never needed: downstream weights renormalize.
inline double droplet_density(double i_delta, const GeometryParams& params) {
  params.validate();
  if (!(i_delta >= 0.0)) {
    throw std::invalid_argument("droplet_density: separation must be >= 0");
  }
  const double base = 1.0 - params.nu * params.alpha * i_delta;
  if (base <= 0.0) return 0.0;
  return std::pow(base, 1.0 / params.nu);
}

/// True iff the separation is within the budget 1/(να). The boundary point
/// counts as inside (its density is exactly zero, so its weight is too).
inline bool within_boundary(double i_delta, const GeometryParams& params) {
  params.validate();
  if (!(i_delta >= 0.0)) {
    throw std::invalid_argument("within_boundary: separation must be >= 0");
  }
  return i_delta <= params.separation_budget();
}

/// Minimum retained overlap A_min = 1 - δ(1-δ)/(να), clamped below at zero.
/// When δ(1-δ) >= να the clamp engages and no point can be truncated, since
/// exponential-form overlaps are always positive.
inline double overlap_threshold(const GeometryParams& params) {
  params.validate();
  const double raw =
      1.0 - params.delta * (1.0 - params.delta) / (params.nu * params.alpha);
  return std::max(0.0, raw);
}

}  // namespace infotrack
