#include "tcsim/moments.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "tcsim/gaussian.hpp"

namespace tcsim {

namespace {

constexpr cplx I{0.0, 1.0};

constexpr std::array<std::string_view, kMomentCount> kNames = {
    "a", "ad", "b", "bd", "aa", "adad", "bb", "bdbd",
    "ab", "adbd", "adb", "abd", "ada", "aad", "bdb", "bbd"};

constexpr std::array<std::size_t, kMomentCount> kPartner = {
    1, 0, 3, 2, 5, 4, 7, 6, 9, 8, 11, 10, 12, 13, 14, 15};

constexpr std::size_t idx(Moment m) { return static_cast<std::size_t>(m); }

}  // namespace

// ---------------------------------------------------------------------------
// MomentVector

MomentColumn MomentVector::column() const {
  MomentColumn c;
  for (std::size_t i = 0; i < kMomentCount; ++i) c(static_cast<Eigen::Index>(i)) = entries[i];
  return c;
}

MomentVector MomentVector::from_column(const MomentColumn& c) {
  MomentVector f;
  for (std::size_t i = 0; i < kMomentCount; ++i) f.entries[i] = c(static_cast<Eigen::Index>(i));
  return f;
}

bool MomentVector::all_finite() const {
  return std::all_of(entries.begin(), entries.end(), [](cplx z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

double MomentVector::max_abs() const {
  double m = 0.0;
  for (const auto& z : entries) m = std::max(m, std::abs(z));
  return m;
}

std::string_view moment_name(std::size_t index) { return kNames.at(index); }

std::size_t conjugate_partner(std::size_t index) { return kPartner.at(index); }

double hermiticity_violation(const MomentVector& f) {
  double worst = 0.0;
  for (std::size_t i = 0; i < 12; i += 2) {
    const double scale = std::max({1.0, std::abs(f[i]), std::abs(f[i + 1])});
    worst = std::max(worst, std::abs(f[i + 1] - std::conj(f[i])) / scale);
  }
  for (std::size_t i = 12; i < kMomentCount; ++i) {
    const double scale = std::max(1.0, std::abs(f[i]));
    worst = std::max(worst, std::abs(f[i].imag()) / scale);
  }
  return worst;
}

double commutator_violation(const MomentVector& f) {
  const cplx da = f[Moment::aad] - f[Moment::ada] - 1.0;
  const cplx db = f[Moment::bbd] - f[Moment::bdb] - 1.0;
  return std::max(std::abs(da), std::abs(db));
}

// ---------------------------------------------------------------------------
// Coefficient matrices

std::string to_string(MatrixMode mode) {
  return mode == MatrixMode::PaperLiteral ? "paper" : "derived";
}

MomentColumn drive_vector(const SystemParams& params) {
  MomentColumn chi = MomentColumn::Zero();
  chi(0) = params.drive_e;
  chi(1) = params.drive_e;
  return chi;
}

MomentVector vacuum_moments() {
  MomentVector f;
  f[Moment::aad] = 1.0;
  f[Moment::bbd] = 1.0;
  return f;
}

CoefficientMatrix build_matrix_paper(const SystemParams& params) {
  params.validate();
  const double wa = params.omega_a;
  const double wb = params.omega_b;
  const double g = params.g;
  const double e = params.drive_e;
  const double gs = params.gamma_s;

  CoefficientMatrix m;
  m.mode = MatrixMode::PaperLiteral;
  m.chi = drive_vector(params);
  // Reference element list, 1-based.
  auto set = [&m](int r, int c, cplx v) { m.a(r - 1, c - 1) = v; };

  for (auto [r, c] : {std::pair{2, 4}, {4, 2}, {10, 6}, {10, 8}, {11, 15}, {12, 13},
                      {13, 12}, {14, 12}, {15, 11}, {16, 11}})
    set(r, c, I * g);
  for (auto [r, c] : {std::pair{1, 3}, {3, 1}, {9, 5}, {9, 7}, {11, 13}, {12, 15},
                      {13, 11}, {14, 11}, {15, 12}, {16, 12}})
    set(r, c, -I * g);
  set(6, 10, 2.0 * I * g);
  set(8, 10, 2.0 * I * g);
  set(5, 9, -2.0 * I * g);
  set(7, 9, -2.0 * I * g);
  for (auto [r, c] : {std::pair{9, 3}, {10, 4}, {11, 3}, {12, 4}, {13, 1}, {13, 2},
                      {14, 1}, {14, 2}})
    set(r, c, e);
  set(5, 1, 2.0 * e);
  set(6, 2, 2.0 * e);
  set(1, 1, -I * wa - gs / 2.0);
  set(2, 2, I * wa - gs / 2.0);
  set(5, 5, -2.0 * I * wa - gs);
  set(6, 6, 2.0 * I * wa - gs);
  set(9, 9, -I * (wa + wb) - gs / 2.0);
  set(10, 10, I * (wa + wb) - gs / 2.0);
  set(11, 11, I * (wa - wb) - gs / 2.0);
  set(12, 12, -I * (wa - wb) - gs / 2.0);
  set(13, 13, -gs);
  set(14, 13, -gs);
  return m;
}

CoefficientMatrix build_matrix_derived(const SystemParams& params) {
  params.validate();
  const double wa = params.omega_a;
  const double wb = params.omega_b;
  const double g = params.g;
  const double e = params.drive_e;
  const double gs = params.gamma_s;

  CoefficientMatrix m;
  m.mode = MatrixMode::Derived;
  m.chi = drive_vector(params);
  auto at = [&m](Moment r, Moment c) -> cplx& {
    return m.a(static_cast<Eigen::Index>(idx(r)), static_cast<Eigen::Index>(idx(c)));
  };

  // H = wa a+a + wb b+b + g (a+b + ab+) + iE (a+ - a), loss gs D[a], E_c = 0.
  // Heisenberg: da = (-i wa - gs/2) a - i g b + E,  db = -i wb b - i g a.
  // Loss acts on each factor of a as -gs/2; on a+a and aa+ as -gs a+a.
  at(Moment::a, Moment::a) = -I * wa - gs / 2.0;
  at(Moment::a, Moment::b) = -I * g;

  at(Moment::ad, Moment::ad) = I * wa - gs / 2.0;
  at(Moment::ad, Moment::bd) = I * g;

  at(Moment::b, Moment::b) = -I * wb;
  at(Moment::b, Moment::a) = -I * g;

  at(Moment::bd, Moment::bd) = I * wb;
  at(Moment::bd, Moment::ad) = I * g;

  // d<aa> = 2<a da>
  at(Moment::aa, Moment::aa) = -2.0 * I * wa - gs;
  at(Moment::aa, Moment::ab) = -2.0 * I * g;
  at(Moment::aa, Moment::a) = 2.0 * e;

  at(Moment::adad, Moment::adad) = 2.0 * I * wa - gs;
  at(Moment::adad, Moment::adbd) = 2.0 * I * g;
  at(Moment::adad, Moment::ad) = 2.0 * e;

  at(Moment::bb, Moment::bb) = -2.0 * I * wb;
  at(Moment::bb, Moment::ab) = -2.0 * I * g;

  at(Moment::bdbd, Moment::bdbd) = 2.0 * I * wb;
  at(Moment::bdbd, Moment::adbd) = 2.0 * I * g;

  // d<ab> = <da b> + <a db>
  at(Moment::ab, Moment::ab) = -I * (wa + wb) - gs / 2.0;
  at(Moment::ab, Moment::bb) = -I * g;
  at(Moment::ab, Moment::aa) = -I * g;
  at(Moment::ab, Moment::b) = e;

  at(Moment::adbd, Moment::adbd) = I * (wa + wb) - gs / 2.0;
  at(Moment::adbd, Moment::bdbd) = I * g;
  at(Moment::adbd, Moment::adad) = I * g;
  at(Moment::adbd, Moment::bd) = e;

  // d<a+b> = <da+ b> + <a+ db>
  at(Moment::adb, Moment::adb) = I * (wa - wb) - gs / 2.0;
  at(Moment::adb, Moment::bdb) = I * g;
  at(Moment::adb, Moment::ada) = -I * g;
  at(Moment::adb, Moment::b) = e;

  at(Moment::abd, Moment::abd) = -I * (wa - wb) - gs / 2.0;
  at(Moment::abd, Moment::bdb) = -I * g;
  at(Moment::abd, Moment::ada) = I * g;
  at(Moment::abd, Moment::bd) = e;

  // d<a+a> = i g <ab+> - i g <a+b> + E(<a> + <a+>) - gs <a+a>; aa+ = a+a + 1.
  for (Moment r : {Moment::ada, Moment::aad}) {
    at(r, Moment::abd) = I * g;
    at(r, Moment::adb) = -I * g;
    at(r, Moment::a) = e;
    at(r, Moment::ad) = e;
    at(r, Moment::ada) = -gs;
  }

  // d<b+b> = i g <a+b> - i g <ab+>; bb+ = b+b + 1.
  for (Moment r : {Moment::bdb, Moment::bbd}) {
    at(r, Moment::adb) = I * g;
    at(r, Moment::abd) = -I * g;
  }
  return m;
}

CoefficientMatrix build_matrix(const SystemParams& params, MatrixMode mode) {
  return mode == MatrixMode::PaperLiteral ? build_matrix_paper(params)
                                          : build_matrix_derived(params);
}

std::vector<MatrixDiscrepancy> matrix_discrepancies(const SystemParams& params) {
  const auto paper = build_matrix_paper(params);
  const auto derived = build_matrix_derived(params);
  std::vector<MatrixDiscrepancy> out;
  for (int r = 0; r < 16; ++r) {
    for (int c = 0; c < 16; ++c) {
      if (paper.a(r, c) != derived.a(r, c)) {
        out.push_back({r + 1, c + 1, paper.a(r, c), derived.a(r, c)});
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Propagation

MomentVector step_rk4(const CoefficientMatrix& m, const MomentVector& f, double dt) {
  if (!f.all_finite()) throw std::invalid_argument("step_rk4: moment vector is not finite");
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument(fmt::format("step_rk4: dt must be > 0, got {}", dt));
  }
  const MomentColumn y = f.column();
  const MomentColumn k1 = m.a * y + m.chi;
  const MomentColumn k2 = m.a * (y + (dt / 2.0) * k1) + m.chi;
  const MomentColumn k3 = m.a * (y + (dt / 2.0) * k2) + m.chi;
  const MomentColumn k4 = m.a * (y + dt * k3) + m.chi;
  return MomentVector::from_column(y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

AugmentedMatrix augmented_propagator(const CoefficientMatrix& m, double t) {
  if (!std::isfinite(t)) throw std::invalid_argument("augmented_propagator: t must be finite");
  AugmentedMatrix gen = AugmentedMatrix::Zero();
  gen.topLeftCorner<16, 16>() = m.a;
  gen.topRightCorner<16, 1>() = m.chi;

  const AugmentedMatrix full = (gen * t).exp();
  const AugmentedMatrix half = (gen * (t / 2.0)).exp();
  const AugmentedMatrix squared = half * half;
  if (!full.allFinite() || !squared.allFinite()) {
    throw ExpmError(fmt::format("matrix exponential is not finite at t = {}", t));
  }
  const double scale = std::max(1.0, full.cwiseAbs().maxCoeff());
  const double residual = (full - squared).cwiseAbs().maxCoeff() / scale;
  if (residual > 1e-10) {
    throw ExpmError(fmt::format(
        "matrix exponential failed the squaring check at t = {} (residual {:.3e})", t,
        residual));
  }
  return full;
}

MomentVector propagate_expm(const CoefficientMatrix& m, const MomentVector& f0, double t) {
  if (!std::isfinite(t) || t < 0.0) {
    throw std::invalid_argument(fmt::format("propagate_expm: t must be finite and >= 0, got {}", t));
  }
  if (t == 0.0) return f0;
  const AugmentedMatrix p = augmented_propagator(m, t);
  Eigen::Matrix<cplx, 17, 1> x;
  x.head<16>() = f0.column();
  x(16) = 1.0;
  const Eigen::Matrix<cplx, 17, 1> y = p * x;
  return MomentVector::from_column(y.head<16>());
}

// ---------------------------------------------------------------------------
// Trajectories

void TrajectoryOptions::validate() const {
  if (!std::isfinite(t_max) || t_max <= 0.0) {
    throw std::invalid_argument(fmt::format("t_max must be > 0, got {}", t_max));
  }
  if (!std::isfinite(dt) || dt <= 0.0) {
    throw std::invalid_argument(fmt::format("dt must be > 0, got {}", dt));
  }
  if (sample_stride < 1) {
    throw std::invalid_argument(fmt::format("sample_stride must be >= 1, got {}", sample_stride));
  }
  if (!initial.all_finite()) throw std::invalid_argument("initial moments are not finite");
}

long long step_count(double t_max, double dt) {
  const double ratio = t_max / dt;
  const long long n = std::llround(ratio);
  if (n < 1 || std::abs(ratio - static_cast<double>(n)) > 1e-9 * std::max(1.0, ratio)) {
    throw std::invalid_argument(
        fmt::format("t_max = {} is not an integer multiple of dt = {}", t_max, dt));
  }
  return n;
}

double Trajectory::max_herm_viol() const {
  double m = 0.0;
  for (const auto& s : samples) m = std::max(m, s.herm_viol);
  return m;
}

double Trajectory::max_comm_viol() const {
  double m = 0.0;
  for (const auto& s : samples) m = std::max(m, s.comm_viol);
  return m;
}

bool Trajectory::all_physical() const {
  return std::all_of(samples.begin(), samples.end(), [](const auto& s) { return s.physical; });
}

bool Trajectory::all_en_defined() const {
  return std::all_of(samples.begin(), samples.end(), [](const auto& s) { return s.en_defined; });
}

DivergenceError::DivergenceError(double time, Trajectory partial)
    : std::runtime_error(fmt::format("moment dynamics diverged (|f| > threshold) at t = {}", time)),
      time_(time),
      partial_(std::move(partial)) {}

namespace {

TrajectorySample make_sample(double t, const MomentVector& f) {
  TrajectorySample s;
  s.t = t;
  s.f = f;
  s.herm_viol = hermiticity_violation(f);
  s.comm_viol = commutator_violation(f);
  try {
    const CovarianceMatrix cov = covariance_from_moments(f);
    const PhysicalityReport rep = check_physicality(cov);
    s.min_uncertainty_eig = rep.min_eigenvalue;
    s.physical = rep.physical;
    try {
      s.en = log_negativity(cov);
    } catch (const UnphysicalCovariance&) {
      s.en = std::nan("");
      s.en_defined = false;
    }
  } catch (const std::domain_error&) {
    // Moments too corrupted to form a real covariance matrix.
    s.en = std::nan("");
    s.en_defined = false;
    s.physical = false;
    s.min_uncertainty_eig = std::nan("");
  }
  return s;
}

bool exceeds(const MomentColumn& y, double threshold) {
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double mag = std::abs(y(i));
    if (!(mag <= threshold)) return true;  // also catches NaN
  }
  return false;
}

}  // namespace

Trajectory trajectory(const SystemParams& params, MatrixMode mode,
                      const TrajectoryOptions& options) {
  params.validate();
  options.validate();
  const long long n_steps = step_count(options.t_max, options.dt);
  const long long stride = options.sample_stride;
  const CoefficientMatrix m = build_matrix(params, mode);

  Trajectory traj;
  traj.params = params;
  traj.mode = mode;
  traj.samples.reserve(static_cast<std::size_t>(n_steps / stride + 2));
  traj.samples.push_back(make_sample(0.0, options.initial));

  MomentColumn y = options.initial.column();
  const double dt = options.dt;

  if (options.propagator == Propagator::Rk4) {
    MomentVector f = options.initial;
    for (long long k = 1; k <= n_steps; ++k) {
      f = step_rk4(m, f, dt);
      if (exceeds(f.column(), options.divergence_threshold)) {
        throw DivergenceError(static_cast<double>(k) * dt, std::move(traj));
      }
      if (k % stride == 0 || k == n_steps) {
        traj.samples.push_back(make_sample(static_cast<double>(k) * dt, f));
      }
    }
    return traj;
  }

  // Exact propagation one sampling interval at a time; on blow-up, replay the
  // interval step by step to locate the first offending step.
  const AugmentedMatrix p_sample = augmented_propagator(m, static_cast<double>(stride) * dt);
  const AugmentedMatrix p_step = augmented_propagator(m, dt);
  auto apply = [](const AugmentedMatrix& p, const MomentColumn& v) {
    return MomentColumn(p.topLeftCorner<16, 16>() * v + p.topRightCorner<16, 1>());
  };

  long long k = 0;
  while (k < n_steps) {
    const long long chunk = std::min(stride, n_steps - k);
    MomentColumn next = chunk == stride
                            ? apply(p_sample, y)
                            : apply(augmented_propagator(m, static_cast<double>(chunk) * dt), y);
    if (exceeds(next, options.divergence_threshold)) {
      MomentColumn z = y;
      for (long long j = 1; j <= chunk; ++j) {
        z = apply(p_step, z);
        if (exceeds(z, options.divergence_threshold)) {
          throw DivergenceError(static_cast<double>(k + j) * dt, std::move(traj));
        }
      }
      throw DivergenceError(static_cast<double>(k + chunk) * dt, std::move(traj));
    }
    y = next;
    k += chunk;
    traj.samples.push_back(make_sample(static_cast<double>(k) * dt, MomentVector::from_column(y)));
  }
  return traj;
}

}  // namespace tcsim
