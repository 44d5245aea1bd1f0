// Copyright 2026 The infotrack Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace infotrack {

/// A Gaussian belief: mean vector and symmetric positive-definite covariance.
struct GaussianState {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;

  Eigen::Index dim() const noexcept { return mean.size(); }
};

namespace detail {

inline bool is_symmetric(const Eigen::MatrixXd& m, double rel_tol = 1e-9) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

}  // namespace detail

/// Cholesky factorization that fails loudly. Regularization is the caller's
/// responsibility.
inline Eigen::LLT<Eigen::MatrixXd> cholesky_or_throw(const Eigen::MatrixXd& m,
                                                     const std::string& what) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error(what + ": matrix is not positive definite");
  }
  return llt;
}

/// Validates the GaussianState invariants: square symmetric covariance
/// (1e-9 relative), positive definite, dimensions consistent.
inline void validate_gaussian(const GaussianState& g,
                              const std::string& name = "GaussianState") {
  if (g.cov.rows() != g.cov.cols()) {
    throw std::invalid_argument(name + ": covariance is not square");
  }
  if (g.mean.size() != g.cov.rows()) {
    throw std::invalid_argument(name +
                                ": mean length does not match covariance");
  }
  if (!detail::is_symmetric(g.cov)) {
    throw std::invalid_argument(name + ": covariance is not symmetric");
  }
  cholesky_or_throw(g.cov, name);
}

/// log|M| from an existing Cholesky factor.
inline double log_det(const Eigen::LLT<Eigen::MatrixXd>& llt) {
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

/// Squared Mahalanobis norm vᵀ M⁻¹ v from an existing Cholesky factor.
inline double mahalanobis_sq(const Eigen::LLT<Eigen::MatrixXd>& llt,
                             const Eigen::VectorXd& v) {
  return llt.matrixL().solve(v).squaredNorm();
}

inline Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m) {
  return 0.5 * (m + m.transpose());
}

}  // namespace infotrack
