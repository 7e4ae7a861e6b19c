#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "tcsim/model.hpp"
#include "tcsim/moments.hpp"
#include "tcsim/oracle.hpp"

namespace tcsim {

enum class DynamicsMode { PaperLiteral, Derived, Oracle };

/// "paper", "derived", "oracle".
std::string to_string(DynamicsMode mode);
/// Inverse of to_string; throws std::invalid_argument listing the valid names.
DynamicsMode parse_dynamics_mode(const std::string& name);

/// SystemParams field that an axis sweeps.
enum class SweepParam { omega_a, omega_b, g, drive_e, gamma_s, e_c };

std::string to_string(SweepParam p);
void set_param(SystemParams& params, SweepParam p, double value);

struct Axis {
  SweepParam param = SweepParam::g;
  std::vector<double> values;
};

/// n points from lo to hi inclusive (n == 1 gives {lo}).
std::vector<double> linspace(double lo, double hi, int n);
/// n log-spaced points from lo to hi inclusive; both bounds > 0.
std::vector<double> logspace(double lo, double hi, int n);

struct Observable {
  enum class Kind { EnTrace, EnAtTime, MaxEnOverTime };
  Kind kind = Kind::EnTrace;
  double time = 0.0;  ///< only used by EnAtTime

  static Observable en_trace() { return {Kind::EnTrace, 0.0}; }
  static Observable en_at_time(double t) { return {Kind::EnAtTime, t}; }
  static Observable max_en_over_time() { return {Kind::MaxEnOverTime, 0.0}; }
};

std::string to_string(const Observable& o);

struct Scenario {
  std::string name;
  SystemParams fixed;
  std::vector<Axis> axes;  ///< at most two; the first axis varies slowest
  double t_max = 50.0;
  Observable observable;
  DynamicsMode mode = DynamicsMode::PaperLiteral;

  /// Throws std::invalid_argument on empty/non-finite axes, more than two
  /// axes, a repeated parameter, bad t_max or an observable time past t_max.
  void validate() const;
  std::size_t point_count() const;
  /// Axis values of grid point `index` (row-major over the axes).
  std::vector<double> point(std::size_t index) const;
  SystemParams params_at(std::size_t index) const;
};

/// The eight catalog scenarios with `grid` points per continuous axis.
std::vector<Scenario> scenario_catalog(int grid = 40);
/// Throws std::invalid_argument naming every catalog entry if `name` is unknown.
Scenario find_scenario(const std::string& name, int grid = 40);

struct SweepRow {
  std::vector<double> axis_values;
  /// Observable at this point; NaN when it could not be evaluated.
  double value = 0.0;
  /// Strict local maxima of the E_N trace.
  int fluctuations = 0;
  bool diverged = false;
  bool physical = true;
  /// Largest invariant violation seen (moment pairing/commutator, or density
  /// trace/Hermiticity/negativity for the oracle).
  double max_violation = 0.0;
  std::string error;
  /// E_N at every sample time (EnTrace only); NaN past a failure.
  std::vector<double> trace;

  bool operator==(const SweepRow&) const = default;
};

struct SweepResult {
  Scenario scenario;
  DynamicsMode mode = DynamicsMode::PaperLiteral;
  double dt = 1e-3;
  std::vector<double> sample_times;  ///< columns of SweepRow::trace
  std::vector<SweepRow> rows;        ///< one per grid point, grid order
};

struct SweepOptions {
  std::optional<DynamicsMode> mode;
  std::optional<std::vector<Axis>> axes;
  double dt = 1e-3;
  int sample_stride = 100;
  FockConfig fock;
  /// Order in which grid points are handed to workers; empty means 0..n-1.
  std::vector<std::size_t> evaluation_order;
  /// 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

/// Evaluates the scenario observable at every grid point. Per-point failures
/// are recorded in the row, never thrown.
SweepResult run_sweep(const Scenario& scenario, const SweepOptions& options = {});

/// Largest defined E_N over the samples; throws on an empty trajectory.
double max_en_over_trajectory(const Trajectory& traj);

/// Number of strict interior local maxima; NaN entries break the sequence.
int count_local_maxima(const std::vector<double>& values);

/// For a two-axis sweep with a g axis (either position): per value of the
/// other axis, the index of the largest observable along g, ties toward
/// smaller g. -1 for a column with no defined value.
std::vector<int> ridge_argmax(const SweepResult& result);

/// One reference landmark on a fig1 scenario.
struct Landmark {
  std::string scenario;
  double omega_a;
  double g;
  double lo;
  double hi;
  bool inclusive;  ///< closed band (approximate value) vs open interval
  std::string paper_value;
};

std::vector<Landmark> landmark_catalog();

struct LandmarkModeValue {
  DynamicsMode mode;
  double value;         ///< observable at the landmark g
  double sweep_max;     ///< over the whole g axis
  double sweep_argmax;  ///< g of sweep_max
  std::string verdict;  ///< reproduced / not reproduced / diverged
};

struct LandmarkComparison {
  Landmark landmark;
  std::vector<LandmarkModeValue> modes;
};

/// Side-by-side landmark table. Each landmark whose scenario is present needs
/// a PaperLiteral and a Derived result (Oracle optional) over the same axes,
/// with the landmark g on the axis. Throws std::invalid_argument on an empty
/// set, mismatched scenarios or a missing landmark point.
std::vector<LandmarkComparison> comparison_report(const std::vector<SweepResult>& results);

/// CSV rendering of comparison_report.
std::string render_report(const std::vector<LandmarkComparison>& report);

}  // namespace tcsim
