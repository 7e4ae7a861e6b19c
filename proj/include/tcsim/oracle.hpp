#pragma once

#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "tcsim/model.hpp"
#include "tcsim/moment_vector.hpp"

namespace tcsim {

/// Fock-space truncation for the exact density-matrix reference.
struct FockConfig {
  int n_a = 12;  ///< cavity levels 0..n_a-1
  int n_b = 12;  ///< qubit-mode levels 0..n_b-1
  /// Largest population allowed in the top two levels of either mode.
  double truncation_tol = 1e-6;

  void validate() const;
  int dim() const { return n_a * n_b; }
  bool operator==(const FockConfig&) const = default;
};

/// Two-mode density operator; basis index = n_cavity * n_b + n_qubit.
struct DensityMatrix {
  int n_a = 0;
  int n_b = 0;
  Eigen::MatrixXcd rho;

  int dim() const { return n_a * n_b; }
  int index(int i, int j) const { return i * n_b + j; }

  static DensityMatrix vacuum(const FockConfig& cfg);
  static DensityMatrix fock(const FockConfig& cfg, int n_cavity, int n_qubit);
  /// |psi><psi| for a (not necessarily normalized) state vector; normalizes.
  static DensityMatrix pure(const FockConfig& cfg, const Eigen::VectorXcd& psi);
};

using SparseOp = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;
using RowMatrixXcd = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Truncated ladder operators a (x) 1 and 1 (x) b.
struct LadderOperators {
  SparseOp a;
  SparseOp b;
};

LadderOperators ladder_operators(const FockConfig& cfg);

/// H = wa a+a + wb b+b - (E_c/2) b+b+bb + g (a+b + ab+) + iE (a+ - a).
Eigen::MatrixXcd build_hamiltonian(const SystemParams& params, const FockConfig& cfg);

/// -i[H, rho] + gamma_s (a rho a+ - {a+a, rho}/2), dense reference version.
Eigen::MatrixXcd lindblad_rhs(const Eigen::MatrixXcd& h, double gamma_s, const DensityMatrix& rho);

/// Sparse Lindblad generator used by evolve. Works on row-major storage so
/// sparse-times-dense products stream contiguous rows. Assumes its argument
/// is Hermitian and returns an exactly Hermitian result.
class LindbladGenerator {
 public:
  LindbladGenerator(const SystemParams& params, const FockConfig& cfg);

  void apply(const RowMatrixXcd& rho, RowMatrixXcd& out);

 private:
  SparseOp h_;
  SparseOp a_;
  double gamma_;
  Eigen::VectorXd half_n_;  // gamma/2 * diag(a+a)
  RowMatrixXcd work_;
  RowMatrixXcd work2_;
};

struct DensityReport {
  double trace_error = 0.0;
  double hermiticity_residual = 0.0;
  double min_eigenvalue = 0.0;
  bool valid = true;
};

/// Hermitian to 1e-10, trace within 1e-8 of 1, min eigenvalue >= -1e-8.
DensityReport check_density(const DensityMatrix& rho);

struct TruncationReport {
  double pop_a_top = 0.0;  ///< population of the top two cavity levels
  double pop_b_top = 0.0;  ///< population of the top two qubit-mode levels
  bool pass = true;
};

/// Level 0 is never counted as "top", so n = 2 inspects only level 1.
TruncationReport truncation_check(const DensityMatrix& rho, const FockConfig& cfg);

class TruncationError : public std::runtime_error {
 public:
  TruncationError(double time, char mode, double population, double tol);
  double time() const { return time_; }
  char mode() const { return mode_; }

 private:
  double time_;
  char mode_;
};

class DensityInvariantError : public std::runtime_error {
 public:
  DensityInvariantError(double time, const DensityReport& report);
  double time() const { return time_; }

 private:
  double time_;
};

struct EvolveOptions {
  double t_max = 50.0;
  double dt = 1e-3;
  int sample_stride = 100;

  void validate() const;
};

using DensityVisitor = std::function<void(double t, const DensityMatrix& rho,
                                          const TruncationReport& trunc,
                                          const DensityReport& inv)>;

/// RK4 on the master equation from |0,0><0,0|. At every sample the density
/// invariants and truncation are checked before `visit` is called; a failing
/// check throws (TruncationError / DensityInvariantError) and the failing
/// sample is not visited.
void evolve(const SystemParams& params, const FockConfig& cfg, const EvolveOptions& options,
            const DensityVisitor& visit);

/// Convenience wrapper collecting every sample.
std::vector<std::pair<double, DensityMatrix>> evolve_sampled(const SystemParams& params,
                                                             const FockConfig& cfg,
                                                             const EvolveOptions& options);

/// All sixteen moments as traces with the truncated operators.
MomentVector extract_moments(const DensityMatrix& rho);

/// Quadrature covariance straight from Tr[x_i x_j rho], independent of the
/// moment-vector route.
Eigen::Matrix4d quadrature_covariance(const DensityMatrix& rho);

DensityMatrix partial_transpose_b(const DensityMatrix& rho);
DensityMatrix partial_transpose_a(const DensityMatrix& rho);

/// ln || rho^{T_b} ||_1.
double exact_log_negativity(const DensityMatrix& rho, const FockConfig& cfg);

/// One oracle sample with both entanglement routes.
struct OracleSample {
  double t = 0.0;
  MomentVector f;
  double en = 0.0;  ///< Gaussian route; NaN if undefined
  double en_exact = 0.0;
  TruncationReport trunc;
  DensityReport inv;
};

/// evolve + extract_moments + both log-negativities at every sample.
/// `visit` (optional) sees each sample as it is produced.
std::vector<OracleSample> oracle_trace(const SystemParams& params, const FockConfig& cfg,
                                       const EvolveOptions& options,
                                       const std::function<void(const OracleSample&)>& visit = {});

}  // namespace tcsim
