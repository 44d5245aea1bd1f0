// Copyright 2026 The infotrack Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "infotrack/gaussian.hpp"
#include "infotrack/geometry.hpp"

namespace infotrack {

/// Linear kinematics: transition F, process noise Q, observation H (selects
/// the spatial components), time step.
struct KinematicModel {
  Eigen::MatrixXd f_matrix;
  Eigen::MatrixXd q_matrix;
  Eigen::MatrixXd h_matrix;
  double dt = 1.0;

  Eigen::Index state_dim() const noexcept { return f_matrix.rows(); }
  Eigen::Index obs_dim() const noexcept { return h_matrix.rows(); }

  void validate() const {
    const auto n = state_dim();
    if (f_matrix.cols() != n || q_matrix.rows() != n || q_matrix.cols() != n) {
      throw std::invalid_argument("KinematicModel: F/Q dimensions disagree");
    }
    if (!detail::is_symmetric(q_matrix)) {
      throw std::invalid_argument("KinematicModel: Q is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q_matrix);
    if (es.eigenvalues().minCoeff() < -1e-9) {
      throw std::invalid_argument("KinematicModel: Q is not PSD");
    }
    if (h_matrix.cols() != n || h_matrix.rows() > n) {
      throw std::invalid_argument("KinematicModel: H dimensions disagree");
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(h_matrix);
    if (lu.rank() != h_matrix.rows()) {
      throw std::invalid_argument("KinematicModel: H must have full row rank");
    }
  }
};

/// Tracker configuration: geometry parameters, covariance floor for the
/// projected scatter, and fixed-point iteration controls.
struct TrackerConfig {
  GeometryParams geometry;
  Eigen::MatrixXd r_min;
  int max_iterations = 50;
  double convergence_tol = 1e-6;  // meters, on the mean shift

  void validate() const {
    geometry.validate();
    if (r_min.rows() != r_min.cols() || !detail::is_symmetric(r_min)) {
      throw std::invalid_argument("TrackerConfig: r_min must be symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(r_min);
    if (es.eigenvalues().minCoeff() < -1e-9) {
      throw std::invalid_argument("TrackerConfig: r_min is not PSD");
    }
    if (max_iterations < 1) {
      throw std::invalid_argument("TrackerConfig: max_iterations must be >= 1");
    }
    if (!(convergence_tol > 0.0)) {
      throw std::invalid_argument("TrackerConfig: convergence_tol must be > 0");
    }
  }
};

/// One frame of spatial measurements. May be empty.
struct PointCloud {
  std::vector<Eigen::VectorXd> points;

  std::size_t size() const noexcept { return points.size(); }
  bool empty() const noexcept { return points.empty(); }
};

/// Outcome of the fixed-point manifold projection.
///
/// Truncated points carry weight exactly 0, not merely small: they do not
/// exist for the estimator. On droplet_empty the spatial prior is returned
/// unchanged and every weight is zero.
struct ProjectionResult {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  std::vector<double> weights;
  bool droplet_empty = false;
  int iterations_used = 0;
};

/// Phase 1: kinematic prediction N(Fμ, FΣFᵀ + Q).
inline GaussianState predict(const GaussianState& state,
                             const KinematicModel& model) {
  model.validate();
  if (state.dim() != model.state_dim()) {
    throw std::invalid_argument("predict: state/model dimension mismatch");
  }
  GaussianState out;
  out.mean = model.f_matrix * state.mean;
  out.cov = symmetrized(model.f_matrix * state.cov * model.f_matrix.transpose() +
                        model.q_matrix);
  return out;
}

/// Phase 2: fixed-point projection of the spatial prior onto the density
/// ridge of the cloud, with analytic truncation.
///
/// Per point: D_i = (y_i - μ_k)ᵀ Σ_k⁻¹ (y_i - μ_k), A_i = exp(-½ δ(1-δ) D_i);
/// points below the retained-overlap threshold get weight exactly 0. The
/// weighted mean and scatter (+ r_min) are iterated until the mean shift
/// drops under convergence_tol or max_iterations is hit. If all mass is
/// truncated the droplet is empty and the prior is kept as-is.
inline ProjectionResult project_manifold(const GaussianState& spatial_prior,
                                         const PointCloud& cloud,
                                         const TrackerConfig& config) {
  config.validate();
  validate_gaussian(spatial_prior, "project_manifold: spatial prior");
  const Eigen::Index m = spatial_prior.dim();
  if (config.r_min.rows() != m) {
    throw std::invalid_argument("project_manifold: r_min dimension mismatch");
  }
  for (const auto& y : cloud.points) {
    if (y.size() != m) {
      throw std::invalid_argument("project_manifold: point dimension mismatch");
    }
  }

  const double a_min = overlap_threshold(config.geometry);
  const double half_c =
      0.5 * config.geometry.delta * (1.0 - config.geometry.delta);
  constexpr double kEmptyWeightSum = 1e-12;

  const std::size_t n = cloud.size();
  ProjectionResult result;
  result.weights.assign(n, 0.0);

  auto empty_result = [&](int iterations) {
    ProjectionResult r;
    r.mean = spatial_prior.mean;
    r.cov = spatial_prior.cov;
    r.weights.assign(n, 0.0);
    r.droplet_empty = true;
    r.iterations_used = iterations;
    return r;
  };

  Eigen::VectorXd mu = spatial_prior.mean;
  Eigen::MatrixXd sigma = spatial_prior.cov;
  std::vector<double> w(n, 0.0);

  for (int iter = 1; iter <= config.max_iterations; ++iter) {
    const auto llt = cholesky_or_throw(sigma, "project_manifold: Sigma_k");

    double weight_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double dist = mahalanobis_sq(llt, cloud.points[i] - mu);
      const double overlap = std::exp(-half_c * dist);
      w[i] = (overlap < a_min) ? 0.0 : overlap;
      weight_sum += w[i];
    }
    if (weight_sum < kEmptyWeightSum) {
      return empty_result(iter);
    }

    Eigen::VectorXd mu_next = Eigen::VectorXd::Zero(m);
    for (std::size_t i = 0; i < n; ++i) {
      if (w[i] != 0.0) mu_next += w[i] * cloud.points[i];
    }
    mu_next /= weight_sum;

    Eigen::MatrixXd scatter = Eigen::MatrixXd::Zero(m, m);
    for (std::size_t i = 0; i < n; ++i) {
      if (w[i] != 0.0) {
        const Eigen::VectorXd d = cloud.points[i] - mu_next;
        scatter += w[i] * (d * d.transpose());
      }
    }
    Eigen::MatrixXd sigma_next =
        symmetrized(scatter / weight_sum) + config.r_min;

    const double shift = (mu_next - mu).norm();
    mu = std::move(mu_next);
    sigma = std::move(sigma_next);
    result.iterations_used = iter;
    for (std::size_t i = 0; i < n; ++i) {
      result.weights[i] = w[i] / weight_sum;
    }
    if (shift < config.convergence_tol) break;
  }

  result.mean = std::move(mu);
  result.cov = std::move(sigma);
  return result;
}

/// Phase 3: gain update of the full prior against the projection treated as
/// a pseudo-measurement with covariance Σ_k.
inline GaussianState precision_update(const GaussianState& prior,
                                      const ProjectionResult& projection,
                                      const KinematicModel& model) {
  if (projection.droplet_empty) {
    throw std::invalid_argument(
        "precision_update: projection is droplet-empty; keep the prior");
  }
  validate_gaussian(prior, "precision_update: prior");
  const Eigen::MatrixXd& h = model.h_matrix;
  if (h.cols() != prior.dim() || h.rows() != projection.mean.size()) {
    throw std::invalid_argument("precision_update: dimension mismatch");
  }

  const Eigen::MatrixXd innovation_cov =
      symmetrized(h * prior.cov * h.transpose() + projection.cov);
  Eigen::LLT<Eigen::MatrixXd> llt(innovation_cov);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("precision_update: singular innovation covariance");
  }
  // K = Σ0 Hᵀ S⁻¹, via solve on the right
  const Eigen::MatrixXd gain =
      llt.solve(h * prior.cov.transpose()).transpose();

  GaussianState out;
  out.mean = prior.mean + gain * (projection.mean - h * prior.mean);
  const Eigen::MatrixXd identity =
      Eigen::MatrixXd::Identity(prior.dim(), prior.dim());
  out.cov = symmetrized((identity - gain * h) * prior.cov);
  return out;
}

/// One full tracking step: predict, project the spatial marginal, correct.
/// On an empty droplet the predicted prior is the posterior; consecutive
/// empty frames keep inflating the covariance through Q, which is what lets
/// the droplet eventually swallow a persistent new ridge.
inline std::pair<GaussianState, ProjectionResult> step(
    const GaussianState& state, const PointCloud& cloud,
    const KinematicModel& model, const TrackerConfig& config) {
  const GaussianState pred = predict(state, model);

  GaussianState spatial;
  spatial.mean = model.h_matrix * pred.mean;
  spatial.cov =
      symmetrized(model.h_matrix * pred.cov * model.h_matrix.transpose());

  ProjectionResult proj = project_manifold(spatial, cloud, config);
  if (proj.droplet_empty) {
    return {pred, std::move(proj)};
  }
  GaussianState post = precision_update(pred, proj, model);
  return {std::move(post), std::move(proj)};
}

/// Unconstrained Gaussian MAP baseline: predict, then one Kalman update
/// against the unweighted centroid of the whole cloud with measurement
/// covariance r_meas/|Y|. Every point counts, no truncation of any kind.
inline GaussianState baseline_map_step(const GaussianState& state,
                                       const PointCloud& cloud,
                                       const KinematicModel& model,
                                       const Eigen::MatrixXd& r_meas) {
  const GaussianState pred = predict(state, model);
  if (cloud.empty()) {
    return pred;
  }
  const Eigen::MatrixXd& h = model.h_matrix;
  const Eigen::Index m = h.rows();
  if (r_meas.rows() != m || r_meas.cols() != m) {
    throw std::invalid_argument("baseline_map_step: r_meas dimension mismatch");
  }

  Eigen::VectorXd centroid = Eigen::VectorXd::Zero(m);
  for (const auto& y : cloud.points) {
    if (y.size() != m) {
      throw std::invalid_argument("baseline_map_step: point dimension mismatch");
    }
    centroid += y;
  }
  centroid /= static_cast<double>(cloud.size());

  const Eigen::MatrixXd innovation_cov = symmetrized(
      h * pred.cov * h.transpose() + r_meas / static_cast<double>(cloud.size()));
  Eigen::LLT<Eigen::MatrixXd> llt(innovation_cov);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("baseline_map_step: singular innovation covariance");
  }
  const Eigen::MatrixXd gain = llt.solve(h * pred.cov.transpose()).transpose();

  GaussianState out;
  out.mean = pred.mean + gain * (centroid - h * pred.mean);
  const Eigen::MatrixXd identity =
      Eigen::MatrixXd::Identity(pred.dim(), pred.dim());
  out.cov = symmetrized((identity - gain * h) * pred.cov);
  return out;
}

}  // namespace infotrack
