#include "tcsim/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

namespace tcsim {

namespace {

const double kNaN = std::numeric_limits<double>::quiet_NaN();

// Row values within this distance of a landmark g count as that landmark.
constexpr double kLandmarkGTol = 1e-9;

double nan_max(const std::vector<double>& v) {
  double best = kNaN;
  for (double x : v) {
    if (std::isnan(x)) continue;
    if (std::isnan(best) || x > best) best = x;
  }
  return best;
}

std::vector<double> sample_times(double t_max, double dt, int stride) {
  const long long n = step_count(t_max, dt);
  std::vector<double> t{0.0};
  for (long long k = stride; k <= n; k += stride) t.push_back(static_cast<double>(k) * dt);
  if (n % stride != 0) t.push_back(static_cast<double>(n) * dt);
  return t;
}

// Observable value from a full-length E_N trace.
double observe(const Observable& obs, const std::vector<double>& times,
               const std::vector<double>& en, std::string& error) {
  switch (obs.kind) {
    case Observable::Kind::EnTrace:
    case Observable::Kind::MaxEnOverTime:
      return nan_max(en);
    case Observable::Kind::EnAtTime:
      for (std::size_t i = 0; i < times.size(); ++i) {
        if (std::abs(times[i] - obs.time) <= 1e-9 * std::max(1.0, obs.time)) {
          if (std::isnan(en[i])) error = fmt::format("E_N undefined at t = {}", obs.time);
          return en[i];
        }
      }
      error = fmt::format("no sample at t = {}", obs.time);
      return kNaN;
  }
  return kNaN;
}

SweepRow moment_row(const Scenario& s, std::size_t index, MatrixMode mode,
                    const SweepOptions& opt, const std::vector<double>& times) {
  SweepRow row;
  row.axis_values = s.point(index);
  std::vector<double> en(times.size(), kNaN);
  TrajectoryOptions topt;
  topt.t_max = s.t_max;
  topt.dt = opt.dt;
  topt.sample_stride = opt.sample_stride;

  auto absorb = [&](const Trajectory& traj) {
    for (std::size_t i = 0; i < traj.samples.size() && i < en.size(); ++i) {
      const TrajectorySample& smp = traj.samples[i];
      en[i] = smp.en;
      row.physical = row.physical && smp.physical && smp.en_defined;
      row.max_violation = std::max({row.max_violation, smp.herm_viol, smp.comm_viol});
    }
  };

  try {
    absorb(trajectory(s.params_at(index), mode, topt));
    row.value = observe(s.observable, times, en, row.error);
  } catch (const DivergenceError& e) {
    absorb(e.partial());
    row.diverged = true;
    row.value = kNaN;
    row.error = e.what();
  } catch (const std::exception& e) {
    row.value = kNaN;
    row.error = e.what();
  }
  row.fluctuations = count_local_maxima(en);
  if (s.observable.kind == Observable::Kind::EnTrace) row.trace = std::move(en);
  return row;
}

SweepRow oracle_row(const Scenario& s, std::size_t index, const SweepOptions& opt,
                    const std::vector<double>& times) {
  SweepRow row;
  row.axis_values = s.point(index);
  std::vector<double> en(times.size(), kNaN);
  std::size_t next = 0;
  EvolveOptions eopt{s.t_max, opt.dt, opt.sample_stride};
  try {
    oracle_trace(s.params_at(index), opt.fock, eopt, [&](const OracleSample& smp) {
      if (next < en.size()) en[next++] = smp.en_exact;
      row.max_violation = std::max({row.max_violation, smp.inv.trace_error,
                                    smp.inv.hermiticity_residual,
                                    std::max(0.0, -smp.inv.min_eigenvalue)});
    });
    row.value = observe(s.observable, times, en, row.error);
  } catch (const std::exception& e) {
    row.value = kNaN;
    row.physical = false;
    row.error = e.what();
  }
  row.fluctuations = count_local_maxima(en);
  if (s.observable.kind == Observable::Kind::EnTrace) row.trace = std::move(en);
  return row;
}

}  // namespace

std::string to_string(DynamicsMode mode) {
  switch (mode) {
    case DynamicsMode::PaperLiteral: return "paper";
    case DynamicsMode::Derived: return "derived";
    case DynamicsMode::Oracle: return "oracle";
  }
  return "?";
}

DynamicsMode parse_dynamics_mode(const std::string& name) {
  if (name == "paper") return DynamicsMode::PaperLiteral;
  if (name == "derived") return DynamicsMode::Derived;
  if (name == "oracle") return DynamicsMode::Oracle;
  throw std::invalid_argument(
      fmt::format("invalid mode '{}' (expected paper, derived or oracle)", name));
}

std::string to_string(SweepParam p) {
  switch (p) {
    case SweepParam::omega_a: return "omega_a";
    case SweepParam::omega_b: return "omega_b";
    case SweepParam::g: return "g";
    case SweepParam::drive_e: return "drive_e";
    case SweepParam::gamma_s: return "gamma_s";
    case SweepParam::e_c: return "e_c";
  }
  return "?";
}

void set_param(SystemParams& params, SweepParam p, double value) {
  switch (p) {
    case SweepParam::omega_a: params.omega_a = value; break;
    case SweepParam::omega_b: params.omega_b = value; break;
    case SweepParam::g: params.g = value; break;
    case SweepParam::drive_e: params.drive_e = value; break;
    case SweepParam::gamma_s: params.gamma_s = value; break;
    case SweepParam::e_c: params.e_c = value; break;
  }
}

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 1) throw std::invalid_argument(fmt::format("linspace needs n >= 1, got {}", n));
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  if (n > 1) v.back() = hi;
  return v;
}

std::vector<double> logspace(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi > 0.0)) {
    throw std::invalid_argument(fmt::format("logspace bounds must be > 0, got {}, {}", lo, hi));
  }
  std::vector<double> v = linspace(std::log(lo), std::log(hi), n);
  for (double& x : v) x = std::exp(x);
  v.front() = lo;
  if (n > 1) v.back() = hi;
  return v;
}

std::string to_string(const Observable& o) {
  switch (o.kind) {
    case Observable::Kind::EnTrace: return "max_en_trace";
    case Observable::Kind::EnAtTime: return fmt::format("en_at_t{}", o.time);
    case Observable::Kind::MaxEnOverTime: return "max_en";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Scenario

void Scenario::validate() const {
  fixed.validate();
  if (axes.size() > 2) {
    throw std::invalid_argument(fmt::format("scenario {} has {} axes (at most 2)", name, axes.size()));
  }
  for (std::size_t i = 0; i < axes.size(); ++i) {
    if (axes[i].values.empty()) {
      throw std::invalid_argument(fmt::format("scenario {}: axis {} is empty", name,
                                              to_string(axes[i].param)));
    }
    for (double v : axes[i].values) {
      if (!std::isfinite(v)) {
        throw std::invalid_argument(fmt::format("scenario {}: axis {} has non-finite value",
                                                name, to_string(axes[i].param)));
      }
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (axes[j].param == axes[i].param) {
        throw std::invalid_argument(fmt::format("scenario {}: axis {} repeated", name,
                                                to_string(axes[i].param)));
      }
    }
  }
  if (!std::isfinite(t_max) || t_max <= 0.0) {
    throw std::invalid_argument(fmt::format("scenario {}: t_max must be > 0", name));
  }
  if (observable.kind == Observable::Kind::EnAtTime &&
      !(observable.time >= 0.0 && observable.time <= t_max)) {
    throw std::invalid_argument(
        fmt::format("scenario {}: observable time {} outside [0, {}]", name, observable.time, t_max));
  }
}

std::size_t Scenario::point_count() const {
  std::size_t n = 1;
  for (const Axis& a : axes) n *= a.values.size();
  return n;
}

std::vector<double> Scenario::point(std::size_t index) const {
  std::vector<double> v(axes.size());
  for (std::size_t k = axes.size(); k-- > 0;) {
    const std::size_t len = axes[k].values.size();
    v[k] = axes[k].values[index % len];
    index /= len;
  }
  return v;
}

SystemParams Scenario::params_at(std::size_t index) const {
  SystemParams p = fixed;
  const std::vector<double> v = point(index);
  for (std::size_t k = 0; k < axes.size(); ++k) set_param(p, axes[k].param, v[k]);
  return p;
}

std::vector<Scenario> scenario_catalog(int grid) {
  if (grid < 1) throw std::invalid_argument(fmt::format("grid must be >= 1, got {}", grid));
  const std::vector<double> unit = linspace(0.1, 2.0, grid);
  std::vector<Scenario> out;

  SystemParams fig1{1.0, 1.0, 1.0, 0.1, 5e-3, 0.0};
  const char* fig1_names[] = {"fig1a", "fig1b", "fig1c"};
  const double fig1_wa[] = {0.5, 1.0, 1.5};
  for (int i = 0; i < 3; ++i) {
    Scenario s{fig1_names[i], fig1, {{SweepParam::g, unit}}, 50.0, Observable::en_trace()};
    s.fixed.omega_a = fig1_wa[i];
    out.push_back(s);
  }

  out.push_back({"fig2", fig1, {{SweepParam::omega_a, unit}, {SweepParam::g, unit}}, 50.0,
                 Observable::en_at_time(50.0)});

  const char* fig3_names[] = {"fig3a", "fig3b"};
  const double fig3_g[] = {0.5, 1.0};
  for (int i = 0; i < 2; ++i) {
    Scenario s{fig3_names[i], fig1, {{SweepParam::omega_a, unit}, {SweepParam::omega_b, unit}},
               50.0, Observable::max_en_over_time()};
    s.fixed.g = fig3_g[i];
    out.push_back(s);
  }

  out.push_back({"fig4", SystemParams{1.0, 1.0, 1.0, 0.1, 0.005, 0.0},
                 {{SweepParam::drive_e, {0.1, 0.5, 1.0, 2.0}}}, 50.0, Observable::en_trace()});

  out.push_back({"fig5", SystemParams{1.0, 1.0, 0.5, 0.1, 0.005, 0.0},
                 {{SweepParam::drive_e, linspace(0.05, 2.0, grid)},
                  {SweepParam::gamma_s, logspace(1e-4, 5e-2, grid)}},
                 50.0, Observable::max_en_over_time()});
  return out;
}

Scenario find_scenario(const std::string& name, int grid) {
  std::vector<Scenario> all = scenario_catalog(grid);
  std::string names;
  for (const Scenario& s : all) {
    if (s.name == name) return s;
    names += names.empty() ? s.name : ", " + s.name;
  }
  throw std::invalid_argument(fmt::format("unknown scenario '{}' (valid: {})", name, names));
}

// ---------------------------------------------------------------------------
// Running

SweepResult run_sweep(const Scenario& scenario, const SweepOptions& options) {
  SweepResult result;
  result.scenario = scenario;
  if (options.axes) result.scenario.axes = *options.axes;
  if (options.mode) result.scenario.mode = *options.mode;
  const Scenario& s = result.scenario;
  s.validate();
  if (s.mode == DynamicsMode::Oracle) options.fock.validate();
  if (options.sample_stride < 1) {
    throw std::invalid_argument(
        fmt::format("sample_stride must be >= 1, got {}", options.sample_stride));
  }
  result.mode = s.mode;
  result.dt = options.dt;
  result.sample_times = sample_times(s.t_max, options.dt, options.sample_stride);

  const std::size_t n = s.point_count();
  std::vector<std::size_t> order = options.evaluation_order;
  if (order.empty()) {
    order.resize(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
  } else {
    std::vector<std::size_t> check = order;
    std::sort(check.begin(), check.end());
    bool ok = check.size() == n;
    for (std::size_t i = 0; ok && i < n; ++i) ok = check[i] == i;
    if (!ok) throw std::invalid_argument("evaluation_order is not a permutation of the grid points");
  }

  result.rows.resize(n);
  std::atomic<std::size_t> cursor{0};
  auto worker = [&] {
    for (std::size_t k; (k = cursor.fetch_add(1)) < n;) {
      const std::size_t idx = order[k];
      switch (s.mode) {
        case DynamicsMode::PaperLiteral:
          result.rows[idx] = moment_row(s, idx, MatrixMode::PaperLiteral, options, result.sample_times);
          break;
        case DynamicsMode::Derived:
          result.rows[idx] = moment_row(s, idx, MatrixMode::Derived, options, result.sample_times);
          break;
        case DynamicsMode::Oracle:
          result.rows[idx] = oracle_row(s, idx, options, result.sample_times);
          break;
      }
    }
  };

  unsigned threads = options.threads ? options.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  return result;
}

double max_en_over_trajectory(const Trajectory& traj) {
  if (traj.samples.empty()) throw std::invalid_argument("max_en_over_trajectory: empty trajectory");
  std::vector<double> en;
  for (const TrajectorySample& s : traj.samples) en.push_back(s.en);
  return nan_max(en);
}

int count_local_maxima(const std::vector<double>& v) {
  int count = 0;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    if (v[i] > v[i - 1] && v[i] > v[i + 1]) ++count;  // false whenever a NaN is involved
  }
  return count;
}

std::vector<int> ridge_argmax(const SweepResult& r) {
  const auto& axes = r.scenario.axes;
  if (axes.size() != 2) throw std::invalid_argument("ridge_argmax needs a two-axis sweep");
  const bool g_first = axes[0].param == SweepParam::g;
  const std::size_t n0 = axes[0].values.size(), n1 = axes[1].values.size();
  const std::size_t n_g = g_first ? n0 : n1, n_other = g_first ? n1 : n0;
  std::vector<int> out(n_other, -1);
  for (std::size_t o = 0; o < n_other; ++o) {
    double best = kNaN;
    for (std::size_t gi = 0; gi < n_g; ++gi) {
      const std::size_t idx = g_first ? gi * n1 + o : o * n1 + gi;
      const double v = r.rows[idx].value;
      if (std::isnan(v)) continue;
      if (std::isnan(best) || v > best) {
        best = v;
        out[o] = static_cast<int>(gi);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Comparison report

std::vector<Landmark> landmark_catalog() {
  return {
      {"fig1a", 0.5, 0.7, 0.05, 0.1, false, "(0.05, 0.1)"},
      {"fig1b", 1.0, 1.0, 0.1, 0.2, false, "(0.1, 0.2)"},
      {"fig1c", 1.5, 1.3, 0.099, 0.121, true, "0.11"},
  };
}

std::vector<LandmarkComparison> comparison_report(const std::vector<SweepResult>& results) {
  if (results.empty()) throw std::invalid_argument("comparison_report: no results");

  std::vector<LandmarkComparison> out;
  for (const Landmark& lm : landmark_catalog()) {
    std::vector<const SweepResult*> matching;
    for (const SweepResult& r : results) {
      if (r.scenario.name == lm.scenario) matching.push_back(&r);
    }
    if (matching.empty()) continue;

    const SweepResult& ref = *matching.front();
    for (const SweepResult* r : matching) {
      const auto& a = r->scenario.axes;
      if (a.size() != 1 || a[0].param != SweepParam::g || a[0].values != ref.scenario.axes[0].values ||
          r->scenario.fixed != ref.scenario.fixed) {
        throw std::invalid_argument(
            fmt::format("comparison_report: mismatched {} results (need one g axis shared by all modes)",
                        lm.scenario));
      }
    }
    if (ref.scenario.fixed.omega_a != lm.omega_a) {
      throw std::invalid_argument(fmt::format("comparison_report: {} has omega_a = {}, landmark needs {}",
                                              lm.scenario, ref.scenario.fixed.omega_a, lm.omega_a));
    }
    const std::vector<double>& gs = ref.scenario.axes[0].values;
    std::size_t at = gs.size();
    for (std::size_t i = 0; i < gs.size(); ++i) {
      if (std::abs(gs[i] - lm.g) <= kLandmarkGTol) at = i;
    }
    if (at == gs.size()) {
      throw std::invalid_argument(
          fmt::format("comparison_report: {} g axis lacks the landmark g = {}", lm.scenario, lm.g));
    }

    LandmarkComparison cmp{lm, {}};
    for (DynamicsMode mode : {DynamicsMode::PaperLiteral, DynamicsMode::Derived, DynamicsMode::Oracle}) {
      const SweepResult* r = nullptr;
      for (const SweepResult* m : matching) {
        if (m->mode == mode) r = m;
      }
      if (!r) {
        if (mode == DynamicsMode::Oracle) continue;
        throw std::invalid_argument(
            fmt::format("comparison_report: {} has no {} result", lm.scenario, to_string(mode)));
      }
      const SweepRow& row = r->rows[at];
      LandmarkModeValue mv{mode, row.value, kNaN, kNaN, ""};
      for (std::size_t i = 0; i < r->rows.size(); ++i) {
        const double v = r->rows[i].value;
        if (!std::isnan(v) && (std::isnan(mv.sweep_max) || v > mv.sweep_max)) {
          mv.sweep_max = v;
          mv.sweep_argmax = gs[i];
        }
      }
      if (row.diverged || std::isnan(row.value)) {
        mv.verdict = "diverged";
      } else {
        const bool in = lm.inclusive ? (row.value >= lm.lo && row.value <= lm.hi)
                                     : (row.value > lm.lo && row.value < lm.hi);
        mv.verdict = in ? "reproduced" : "not reproduced";
      }
      cmp.modes.push_back(mv);
    }
    out.push_back(std::move(cmp));
  }
  if (out.empty()) throw std::invalid_argument("comparison_report: no landmark scenario in results");
  return out;
}

std::string render_report(const std::vector<LandmarkComparison>& report) {
  std::string s = "landmark,omega_a,g,paper_value,mode,en_at_g,sweep_max,sweep_argmax_g,verdict\n";
  for (const LandmarkComparison& c : report) {
    for (const LandmarkModeValue& m : c.modes) {
      s += fmt::format("{},{:.17g},{:.17g},\"{}\",{},{:.17g},{:.17g},{:.17g},{}\n", c.landmark.scenario,
                       c.landmark.omega_a, c.landmark.g, c.landmark.paper_value, to_string(m.mode),
                       m.value, m.sweep_max, m.sweep_argmax, m.verdict);
    }
  }
  return s;
}

}  // namespace tcsim
