// Copyright 2026 The infotrack Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>

#include "infotrack/geometry.hpp"
#include "infotrack/rng.hpp"

namespace infotrack {

/// Single-qubit density matrix: 2x2 complex, Hermitian, trace 1. Physical
/// states additionally have nonnegative eigenvalues; noisy linear inversion
/// is allowed to violate that, which is the whole point of the demo.
struct DensityMatrix {
  Eigen::Matrix2cd elements;

  /// Bloch vector (x, y, z) = (2 Re rho01, -2 Im rho01, rho00 - rho11).
  Eigen::Vector3d bloch() const {
    return {2.0 * elements(0, 1).real(), -2.0 * elements(0, 1).imag(),
            elements(0, 0).real() - elements(1, 1).real()};
  }

  void validate(bool require_physical = false) const {
    if (std::abs(elements(0, 1) - std::conj(elements(1, 0))) > 1e-12 ||
        std::abs(elements(0, 0).imag()) > 1e-12 ||
        std::abs(elements(1, 1).imag()) > 1e-12) {
      throw std::invalid_argument("DensityMatrix: not Hermitian");
    }
    if (std::abs(elements.trace() - std::complex<double>(1.0, 0.0)) > 1e-12) {
      throw std::invalid_argument("DensityMatrix: trace is not 1");
    }
    if (require_physical && bloch().norm() > 1.0 + 2e-12) {
      throw std::invalid_argument("DensityMatrix: state is not PSD");
    }
  }
};

/// Noisy Pauli readouts. Values may land outside [-1, 1]; sigma records the
/// readout noise they were drawn with.
struct PauliExpectations {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double sigma = 0.0;
};

inline DensityMatrix maximally_mixed() {
  DensityMatrix rho;
  rho.elements = 0.5 * Eigen::Matrix2cd::Identity();
  return rho;
}

/// rho = (I + x X + y Y + z Z) / 2; Hermitian and trace-1 by construction,
/// physical iff |(x,y,z)| <= 1.
inline DensityMatrix from_bloch(double x, double y, double z) {
  DensityMatrix rho;
  rho.elements(0, 0) = std::complex<double>(0.5 + 0.5 * z, 0.0);
  rho.elements(1, 1) = std::complex<double>(0.5 - 0.5 * z, 0.0);
  rho.elements(0, 1) = std::complex<double>(0.5 * x, -0.5 * y);
  rho.elements(1, 0) = std::complex<double>(0.5 * x, 0.5 * y);
  return rho;
}

/// Draws noisy Pauli expectations around the true values: each observable
/// independently N(Tr(rho S_i), sigma^2).
inline PauliExpectations simulate_measurements(const DensityMatrix& rho_true,
                                               double sigma,
                                               RandomStream& rng) {
  rho_true.validate(/*require_physical=*/true);
  if (!(sigma >= 0.0)) {
    throw std::invalid_argument("simulate_measurements: sigma must be >= 0");
  }
  const Eigen::Vector3d r = rho_true.bloch();
  PauliExpectations s;
  s.x = rng.normal(r[0], sigma);
  s.y = rng.normal(r[1], sigma);
  s.z = rng.normal(r[2], sigma);
  s.sigma = sigma;
  return s;
}

/// Exact affine reconstruction from Pauli expectations. Trace is always 1;
/// positivity is NOT enforced — noise can push an eigenvalue negative.
inline DensityMatrix linear_inversion(const PauliExpectations& s) {
  return from_bloch(s.x, s.y, s.z);
}

/// Eigenvalues of a Hermitian 2x2 matrix in ascending order, by the closed
/// form (a+d)/2 -+ sqrt(((a-d)/2)^2 + |b|^2).
inline std::pair<double, double> eigenvalues(const DensityMatrix& rho) {
  rho.validate();
  const double a = rho.elements(0, 0).real();
  const double d = rho.elements(1, 1).real();
  const double half_gap = 0.5 * (a - d);
  const double radius =
      std::sqrt(half_gap * half_gap + std::norm(rho.elements(0, 1)));
  const double center = 0.5 * (a + d);
  return {center - radius, center + radius};
}

namespace tomo_detail {

/// Overlap Tr(rho^delta rho0^(1-delta)) against rho0 = I/2 for a state with
/// Bloch radius m: eigenvalues (1 +- m)/2 give ((1+m)^d + (1-m)^d)/2,
/// decreasing in m, equal to 1 only at the maximally mixed state.
inline double bloch_overlap(double m, double delta) {
  return 0.5 * (std::pow(1.0 + m, delta) + std::pow(1.0 - m, delta));
}

inline double bloch_separation(double m, double delta) {
  return std::max(0.0, (1.0 - bloch_overlap(m, delta)) /
                           (delta * (1.0 - delta)));
}

// states within one eigenvalue-tolerance of the pure shell count as physical
inline constexpr double kPhysicalTol = 2e-12;
// unphysical inputs are pulled strictly inside so eigenvalues stay positive
inline constexpr double kPhysicalMargin = 1e-9;

}  // namespace tomo_detail

/// Bounded reconstruction anchored to the maximally mixed pre-prior.
///
/// The Bloch vector of the linear inversion is shrunk along its ray until
/// the state sits inside both the physical ball and the separation budget.
/// Inputs that are already physical and within budget pass through
/// unchanged; everything else comes back strictly inside, so the result is
/// always Hermitian, trace-1 and PSD.
inline DensityMatrix bounded_reconstruction(const PauliExpectations& s,
                                            const GeometryParams& params) {
  params.validate();
  const DensityMatrix raw = linear_inversion(s);
  const Eigen::Vector3d r = raw.bloch();
  const double m_raw = r.norm();

  if (m_raw <= 1.0 + tomo_detail::kPhysicalTol &&
      within_boundary(tomo_detail::bloch_separation(std::min(m_raw, 1.0),
                                                    params.delta),
                      params)) {
    return raw;
  }

  const double m_hi = std::min(m_raw, 1.0 - tomo_detail::kPhysicalMargin);
  double m_star = m_hi;
  if (!within_boundary(tomo_detail::bloch_separation(m_hi, params.delta),
                       params)) {
    double lo = 0.0, hi = m_hi;  // separation is monotone in the radius
    for (int iter = 0; iter < 100; ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (within_boundary(tomo_detail::bloch_separation(mid, params.delta),
                          params)) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    m_star = lo;
  }

  const double scale = m_star / m_raw;
  return from_bloch(r[0] * scale, r[1] * scale, r[2] * scale);
}

}  // namespace infotrack
