#pragma once

#include <stdexcept>

#include <Eigen/Dense>

#include "tcsim/moment_vector.hpp"

namespace tcsim {

/// Moments that cannot describe a physical state (broken conjugate pairing,
/// or a covariance element with a significant imaginary part).
class NonHermitianMoments : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Covariance whose partially transposed symplectic spectrum is not real.
class UnphysicalCovariance : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Symmetrized 4x4 quadrature covariance in the order
/// x1 = (a + a+)/sqrt2, x2 = (a - a+)/(sqrt2 i), x3, x4 likewise for b.
/// Vacuum is I/2.
struct CovarianceMatrix {
  Eigen::Matrix4d gamma = Eigen::Matrix4d::Identity() / 2.0;
  /// max |G_ij - G_ji| of the matrix before symmetrization
  double asymmetry_residual = 0.0;

  static CovarianceMatrix from_matrix(const Eigen::Matrix4d& m);

  Eigen::Matrix2d block_a() const { return gamma.topLeftCorner<2, 2>(); }
  Eigen::Matrix2d block_b() const { return gamma.bottomRightCorner<2, 2>(); }
  /// Upper-right (mode a rows, mode b columns) block.
  Eigen::Matrix2d block_c() const { return gamma.topRightCorner<2, 2>(); }
};

/// Builds Gamma from the sixteen moments. Requires the conjugate pairings to
/// hold to 1e-6 (relative) and every Gamma_ij to be real to 1e-9 relative to
/// the size of the moments involved.
CovarianceMatrix covariance_from_moments(const MomentVector& f);

/// det A + det B - 2 det C.
double seralian_delta(const CovarianceMatrix& c);

/// Smallest symplectic eigenvalue of the partially transposed covariance,
/// sqrt((Delta - sqrt(Delta^2 - 4 det Gamma)) / 2). The inner radicand is
/// clamped to 0 when it lies within 1e-12 below zero.
double nu_minus(const CovarianceMatrix& c);

/// max(0, -ln(2 nu_minus)), natural log.
double log_negativity(const CovarianceMatrix& c);

struct PhysicalityReport {
  double min_eigenvalue = 0.0;  ///< of Gamma + (i/2) Omega
  double symmetry_residual = 0.0;
  double determinant = 0.0;
  bool physical = true;
};

/// Uncertainty-relation audit; flags unphysical below -1e-9.
PhysicalityReport check_physicality(const CovarianceMatrix& c);

/// Two-mode symplectic form diag(J, J), J = [[0, 1], [-1, 0]].
Eigen::Matrix4d symplectic_form();

/// Exchanges the roles of the two modes.
CovarianceMatrix mode_swapped(const CovarianceMatrix& c);

/// Phase-space partial transpose on mode b (x4 -> -x4).
CovarianceMatrix partially_transposed(const CovarianceMatrix& c);

}  // namespace tcsim
