#include "tcsim/linalg.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace tcsim {

std::vector<double> hermitian_eigenvalues(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument(
        fmt::format("hermitian_eigenvalues: matrix is {}x{}, not square", m.rows(), m.cols()));
  }
  if (m.size() == 0) return {};
  if (!m.allFinite()) throw std::invalid_argument("hermitian_eigenvalues: matrix is not finite");

  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double skew = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (skew > 1e-8 * scale) {
    throw std::invalid_argument(
        fmt::format("hermitian_eigenvalues: matrix is not Hermitian (residual {:.3e})", skew));
  }
  const Eigen::MatrixXcd h = (m + m.adjoint()) / 2.0;
  // Householder tridiagonalization + implicit symmetric QR.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw EigenSolverError(fmt::format(
        "Hermitian eigensolver did not converge within {} sweeps per eigenvalue",
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>::m_maxIterations));
  }
  const Eigen::VectorXd& ev = solver.eigenvalues();
  std::vector<double> out(ev.data(), ev.data() + ev.size());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace tcsim
