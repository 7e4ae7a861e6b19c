#include "tcsim/commands.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "tcsim/gaussian.hpp"
#include "tcsim/moments.hpp"
#include "tcsim/oracle.hpp"

namespace tcsim {

namespace {

std::string moment_header() {
  std::string s;
  for (std::size_t i = 0; i < kMomentCount; ++i) {
    s += fmt::format(",re_{0},im_{0}", moment_name(i));
  }
  return s;
}

std::string moment_cells(const MomentVector& f) {
  std::string s;
  for (std::size_t i = 0; i < kMomentCount; ++i) {
    s += ',' + csv_real(f[i].real()) + ',' + csv_real(f[i].imag());
  }
  return s;
}

std::string quoted(const std::string& s) {
  if (s.empty()) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c == '\n' ? ' ' : c;
  }
  return q + '"';
}

void write_sample(std::ostream& out, const TrajectorySample& s) {
  out << csv_real(s.t) << moment_cells(s.f) << ',' << csv_real(s.en) << ','
      << csv_real(s.herm_viol) << ',' << csv_real(s.comm_viol) << ',' << (s.physical ? 1 : 0)
      << '\n';
}

}  // namespace

std::string csv_real(double v) { return fmt::format("{:.17g}", v); }

void write_error(std::ostream& out, const std::string& message) {
  std::string m = message;
  std::replace(m.begin(), m.end(), '\n', ' ');
  out << "# error: " << m << '\n';
  out.flush();
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  if (cfg.mode == DynamicsMode::Oracle) return cmd_oracle(cfg, out);
  out << 't' << moment_header() << ",en,herm_viol,comm_viol,physical\n";
  const MatrixMode mode =
      cfg.mode == DynamicsMode::PaperLiteral ? MatrixMode::PaperLiteral : MatrixMode::Derived;
  TrajectoryOptions opt;
  opt.t_max = cfg.t_max;
  opt.dt = cfg.dt;
  opt.sample_stride = cfg.sample_stride;
  try {
    const Trajectory traj = trajectory(cfg.params, mode, opt);
    for (const TrajectorySample& s : traj.samples) write_sample(out, s);
  } catch (const DivergenceError& e) {
    for (const TrajectorySample& s : e.partial().samples) write_sample(out, s);
    write_error(out, e.what());
    return 1;
  } catch (const std::exception& e) {
    write_error(out, e.what());
    return 1;
  }
  return 0;
}

int cmd_oracle(const RunConfig& cfg, std::ostream& out) {
  out << 't' << moment_header()
      << ",en,en_exact,pop_a_top,pop_b_top,trace_error,herm_residual,min_eigenvalue\n";
  try {
    oracle_trace(cfg.params, cfg.fock, EvolveOptions{cfg.t_max, cfg.dt, cfg.sample_stride},
                 [&](const OracleSample& s) {
                   out << csv_real(s.t) << moment_cells(s.f) << ',' << csv_real(s.en) << ','
                       << csv_real(s.en_exact) << ',' << csv_real(s.trunc.pop_a_top) << ','
                       << csv_real(s.trunc.pop_b_top) << ',' << csv_real(s.inv.trace_error) << ','
                       << csv_real(s.inv.hermiticity_residual) << ','
                       << csv_real(s.inv.min_eigenvalue) << '\n';
                 });
  } catch (const std::exception& e) {
    write_error(out, e.what());
    return 1;
  }
  return 0;
}

void write_sweep_csv(const SweepResult& r, std::ostream& out) {
  const bool with_trace = r.scenario.observable.kind == Observable::Kind::EnTrace;
  for (const Axis& a : r.scenario.axes) out << to_string(a.param) << ',';
  out << to_string(r.scenario.observable) << ",fluctuations,diverged,physical,max_violation";
  if (with_trace) {
    for (double t : r.sample_times) out << ",en_t" << fmt::format("{}", t);
  }
  out << ",error\n";
  for (const SweepRow& row : r.rows) {
    for (double v : row.axis_values) out << csv_real(v) << ',';
    out << csv_real(row.value) << ',' << row.fluctuations << ',' << (row.diverged ? 1 : 0) << ','
        << (row.physical ? 1 : 0) << ',' << csv_real(row.max_violation);
    if (with_trace) {
      for (std::size_t i = 0; i < r.sample_times.size(); ++i) {
        out << ',' << csv_real(i < row.trace.size() ? row.trace[i] : std::nan(""));
      }
    }
    out << ',' << quoted(row.error) << '\n';
  }
}

int cmd_sweep(const std::string& scenario, const std::string& mode, std::ostream& out, int grid,
              double dt, int threads) {
  try {
    SweepOptions opt;
    opt.mode = parse_dynamics_mode(mode);
    opt.dt = dt;
    opt.threads = static_cast<unsigned>(std::max(0, threads));
    const SweepResult r = run_sweep(find_scenario(scenario, grid), opt);
    write_sweep_csv(r, out);
  } catch (const std::exception& e) {
    write_error(out, e.what());
    return 1;
  }
  return 0;
}

int cmd_compare(std::ostream& out, int grid, double dt, int threads) {
  try {
    std::vector<SweepResult> results;
    for (const Landmark& lm : landmark_catalog()) {
      Scenario s = find_scenario(lm.scenario, grid);
      std::vector<double>& gs = s.axes.front().values;
      gs.push_back(lm.g);
      std::sort(gs.begin(), gs.end());
      gs.erase(std::unique(gs.begin(), gs.end(), [](double x, double y) { return std::abs(x - y) <= 1e-9; }),
               gs.end());
      for (DynamicsMode m : {DynamicsMode::PaperLiteral, DynamicsMode::Derived}) {
        SweepOptions opt;
        opt.mode = m;
        opt.dt = dt;
        opt.threads = static_cast<unsigned>(std::max(0, threads));
        results.push_back(run_sweep(s, opt));
      }
    }
    out << render_report(comparison_report(results));
  } catch (const std::exception& e) {
    write_error(out, e.what());
    return 1;
  }
  return 0;
}

}  // namespace tcsim
