#include "tcsim/gaussian.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "tcsim/linalg.hpp"

namespace tcsim {

namespace {

constexpr double kPairingTol = 1e-6;
constexpr double kImagTol = 1e-9;
constexpr double kRadicandTol = 1e-12;
constexpr double kPhysicalTol = 1e-9;

}  // namespace

CovarianceMatrix CovarianceMatrix::from_matrix(const Eigen::Matrix4d& m) {
  CovarianceMatrix c;
  c.asymmetry_residual = (m - m.transpose()).cwiseAbs().maxCoeff();
  c.gamma = (m + m.transpose()) / 2.0;
  return c;
}

CovarianceMatrix covariance_from_moments(const MomentVector& f) {
  const double pairing = hermiticity_violation(f);
  if (!(pairing <= kPairingTol)) {
    throw NonHermitianMoments(
        fmt::format("moments violate Hermitian pairing by {:.3e} (tolerance {:.0e})", pairing,
                    kPairingTol));
  }

  const cplx a = f[Moment::a], ad = f[Moment::ad], b = f[Moment::b], bd = f[Moment::bd];
  const cplx aa = f[Moment::aa], adad = f[Moment::adad];
  const cplx bb = f[Moment::bb], bdbd = f[Moment::bdbd];
  const cplx ab = f[Moment::ab], adbd = f[Moment::adbd];
  const cplx adb = f[Moment::adb], abd = f[Moment::abd];
  const cplx ada = f[Moment::ada], aad = f[Moment::aad];
  const cplx bdb = f[Moment::bdb], bbd = f[Moment::bbd];

  const cplx inv2i = 1.0 / cplx(0.0, 2.0);
  Eigen::Matrix4cd g;

  g(0, 0) = 0.5 * (aa + aad + ada + adad) - 0.5 * (a * a + a * ad + ad * a + ad * ad);
  g(0, 1) = inv2i * (aa - adad) - inv2i * (a * a - a * ad + ad * a - ad * ad);
  g(0, 2) = 0.5 * (ab + abd + adb + adbd) - 0.5 * (a * b + a * bd + ad * b + ad * bd);
  g(0, 3) = inv2i * (ab + adb - abd - adbd) - inv2i * (a * b - a * bd + ad * b - ad * bd);

  g(1, 0) = inv2i * (aa - adad) - inv2i * (a * a + a * ad - ad * a - ad * ad);
  // x2 carries 1/(sqrt2 i), whose square is -1/2: both the second-moment and
  // the mean bracket of G22 and G24 pick up that sign (same form as G44, G42).
  g(1, 1) = -0.5 * (aa - aad - ada + adad) + 0.5 * (a * a - a * ad - ad * a + ad * ad);
  g(1, 2) = inv2i * (ab - adb + abd - adbd) - inv2i * (a * b + a * bd - ad * b - ad * bd);
  g(1, 3) = -0.5 * (ab - adb - abd + adbd) + 0.5 * (a * b - a * bd - ad * b + ad * bd);

  g(2, 0) = 0.5 * (ab + abd + adb + adbd) - 0.5 * (b * a + b * ad + bd * a + bd * ad);
  g(2, 1) = inv2i * (ab - adb + abd - adbd) - inv2i * (b * a - b * ad + bd * a - bd * ad);
  g(2, 2) = 0.5 * (bb + bbd + bdb + bdbd) - 0.5 * (b * b + b * bd + bd * b + bd * bd);
  g(2, 3) = inv2i * (bb - bdbd) - inv2i * (b * b - b * bd + bd * b - bd * bd);

  g(3, 0) = inv2i * (ab + adb - abd - adbd) - inv2i * (b * a + b * ad - bd * a - bd * ad);
  g(3, 1) = -0.5 * (ab - adb - abd + adbd) + 0.5 * (b * a - b * ad - bd * a + bd * ad);
  g(3, 2) = inv2i * (bb - bdbd) - inv2i * (b * b + b * bd - bd * b - bd * bd);
  g(3, 3) = -0.5 * (bb - bbd - bdb + bdbd) + 0.5 * (b * b - b * bd - bd * b + bd * bd);

  double first = 0.0;
  for (std::size_t i = 0; i < 4; ++i) first = std::max(first, std::abs(f[i]));
  const double scale = std::max({1.0, f.max_abs(), first * first});
  const double imag = g.imag().cwiseAbs().maxCoeff();
  if (!(imag <= kImagTol * scale)) {
    throw NonHermitianMoments(fmt::format(
        "covariance has imaginary residual {:.3e} (allowed {:.3e})", imag, kImagTol * scale));
  }
  return CovarianceMatrix::from_matrix(g.real());
}

double seralian_delta(const CovarianceMatrix& c) {
  return c.block_a().determinant() + c.block_b().determinant() -
         2.0 * c.block_c().determinant();
}

Eigen::Matrix4d symplectic_form() {
  Eigen::Matrix4d omega = Eigen::Matrix4d::Zero();
  omega(0, 1) = 1.0;
  omega(1, 0) = -1.0;
  omega(2, 3) = 1.0;
  omega(3, 2) = -1.0;
  return omega;
}

CovarianceMatrix partially_transposed(const CovarianceMatrix& c) {
  const Eigen::Vector4d flip(1.0, 1.0, 1.0, -1.0);
  CovarianceMatrix out = c;
  out.gamma = flip.asDiagonal() * c.gamma * flip.asDiagonal();
  return out;
}

CovarianceMatrix mode_swapped(const CovarianceMatrix& c) {
  Eigen::Matrix4d p = Eigen::Matrix4d::Zero();
  p(0, 2) = p(1, 3) = p(2, 0) = p(3, 1) = 1.0;
  CovarianceMatrix out = c;
  out.gamma = p * c.gamma * p.transpose();
  return out;
}

namespace {

// Delta^2 - 4 det Gamma equals tr(N^2), where N is the traceless part of
// -(Omega Gamma~)^2 for the partially transposed Gamma~. Near the isotropic
// point N is small entrywise, so this form keeps the radicand accurate where
// the direct difference of two ~1/4 quantities would leave 1e-17 noise (and
// ~1e-8 in its square root).
double symplectic_radicand(const CovarianceMatrix& c) {
  const Eigen::Matrix4d k = symplectic_form() * partially_transposed(c).gamma;
  Eigen::Matrix4d n = -(k * k);
  n.diagonal().array() -= n.trace() / 4.0;
  return (n * n).trace();
}

}  // namespace

double nu_minus(const CovarianceMatrix& c) {
  const double delta = seralian_delta(c);
  double radicand = symplectic_radicand(c);
  if (!std::isfinite(delta) || !std::isfinite(radicand)) {
    throw UnphysicalCovariance("covariance matrix is not finite");
  }
  if (radicand < 0.0) {
    if (radicand < -kRadicandTol) {
      throw UnphysicalCovariance(fmt::format(
          "Delta^2 - 4 det Gamma = {:.6e} < 0 (Delta = {:.17g}, det Gamma = {:.17g})", radicand,
          delta, c.gamma.determinant()));
    }
    radicand = 0.0;
  }
  const double outer = (delta - std::sqrt(radicand)) / 2.0;
  if (outer < 0.0) {
    throw UnphysicalCovariance(fmt::format(
        "negative outer radicand {:.6e} (Delta = {:.17g}, det Gamma = {:.17g})", outer, delta,
        c.gamma.determinant()));
  }
  return std::sqrt(outer);
}

double log_negativity(const CovarianceMatrix& c) {
  const double nu = nu_minus(c);
  return std::max(0.0, -std::log(2.0 * nu));
}

PhysicalityReport check_physicality(const CovarianceMatrix& c) {
  PhysicalityReport rep;
  rep.symmetry_residual = c.asymmetry_residual;
  rep.determinant = c.gamma.determinant();
  if (!c.gamma.allFinite()) {
    rep.min_eigenvalue = std::nan("");
    rep.physical = false;
    return rep;
  }
  const Eigen::Matrix4cd h =
      c.gamma.cast<cplx>() + cplx(0.0, 0.5) * symplectic_form().cast<cplx>();
  rep.min_eigenvalue = hermitian_eigenvalues(h).front();
  rep.physical = rep.min_eigenvalue >= -kPhysicalTol;
  return rep;
}

}  // namespace tcsim
