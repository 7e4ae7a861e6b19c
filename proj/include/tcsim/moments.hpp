#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tcsim/model.hpp"
#include "tcsim/moment_vector.hpp"

namespace tcsim {

/// Which coefficient matrix drives the moment equations.
///
/// PaperLiteral reproduces the reference element list verbatim, including
/// its omissions. Derived is obtained from the Lindblad equation with the
/// anharmonic term dropped; it differs from the printed list only on the
/// diagonal frequencies of <b>, <b+>, <bb> and <b+b+>.
enum class MatrixMode { PaperLiteral, Derived };

std::string to_string(MatrixMode mode);

using MomentMatrix = Eigen::Matrix<cplx, 16, 16>;

/// df/dt = a f + chi.
struct CoefficientMatrix {
  MomentMatrix a = MomentMatrix::Zero();
  MomentColumn chi = MomentColumn::Zero();
  MatrixMode mode = MatrixMode::Derived;
};

CoefficientMatrix build_matrix_paper(const SystemParams& params);
CoefficientMatrix build_matrix_derived(const SystemParams& params);
CoefficientMatrix build_matrix(const SystemParams& params, MatrixMode mode);

/// (E, E, 0, ..., 0).
MomentColumn drive_vector(const SystemParams& params);

/// Vacuum: <aa+> = <bb+> = 1, everything else 0.
MomentVector vacuum_moments();

/// One element where the two matrix modes disagree. Indices are 1-based to
/// match the reference element numbering.
struct MatrixDiscrepancy {
  int row;
  int col;
  cplx paper;
  cplx derived;
};

/// Element-by-element diff of build_matrix_paper vs build_matrix_derived.
std::vector<MatrixDiscrepancy> matrix_discrepancies(const SystemParams& params);

/// Classical RK4 step for df/dt = a f + chi.
MomentVector step_rk4(const CoefficientMatrix& m, const MomentVector& f, double dt);

class ExpmError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using AugmentedMatrix = Eigen::Matrix<cplx, 17, 17>;

/// exp(t [[a, chi], [0, 0]]). Cross-checked against the square of the
/// half-interval exponential; throws ExpmError if they disagree or the
/// result is not finite.
AugmentedMatrix augmented_propagator(const CoefficientMatrix& m, double t);

/// Exact f(t) for df/dt = a f + chi via the augmented exponential. Never
/// inverts a, so singular matrices are fine.
MomentVector propagate_expm(const CoefficientMatrix& m, const MomentVector& f0, double t);

enum class Propagator { Expm, Rk4 };

struct TrajectoryOptions {
  double t_max = 50.0;
  double dt = 1e-3;
  int sample_stride = 100;
  Propagator propagator = Propagator::Expm;
  double divergence_threshold = 1e12;
  MomentVector initial = vacuum_moments();

  void validate() const;
};

struct TrajectorySample {
  double t = 0.0;
  MomentVector f;
  /// Gaussian log-negativity; NaN when the covariance is unphysical enough
  /// for the symplectic eigenvalue to be undefined.
  double en = 0.0;
  bool en_defined = true;
  double herm_viol = 0.0;
  double comm_viol = 0.0;
  /// min eigenvalue of Gamma + (i/2) Omega
  double min_uncertainty_eig = 0.0;
  bool physical = true;
};

struct Trajectory {
  SystemParams params;
  MatrixMode mode = MatrixMode::Derived;
  std::vector<TrajectorySample> samples;

  double max_herm_viol() const;
  double max_comm_viol() const;
  bool all_physical() const;
  bool all_en_defined() const;
};

/// Thrown when any moment exceeds the divergence threshold. Carries the
/// samples recorded before blow-up.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(double time, Trajectory partial);
  double time() const { return time_; }
  const Trajectory& partial() const { return partial_; }

 private:
  double time_;
  Trajectory partial_;
};

/// Number of integration steps for t_max at step dt; rejects t_max that is
/// not an integer multiple of dt (to 1e-9 relative).
long long step_count(double t_max, double dt);

/// Samples f(t) from `options.initial` every sample_stride steps (and at
/// t_max), attaching E_N and invariant diagnostics to each sample.
Trajectory trajectory(const SystemParams& params, MatrixMode mode,
                      const TrajectoryOptions& options = {});

}  // namespace tcsim
