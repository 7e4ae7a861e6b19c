// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fail.

#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "tcsim/commands.hpp"
#include "tcsim/gaussian.hpp"
#include "tcsim/moments.hpp"
#include "tcsim/oracle.hpp"
#include "tcsim/sweep.hpp"

using namespace tcsim;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void run(int id, const std::string& title, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  fmt::print("[{}] criterion {}: {} | {} | {:.1f} s\n", o.pass ? "PASS" : "FAIL", id, title, o.detail, secs);
  std::fflush(stdout);
}

CovarianceMatrix two_mode_squeezed(double r) {
  const double c = std::cosh(2.0 * r) / 2.0, s = std::sinh(2.0 * r) / 2.0;
  Eigen::Matrix4d g;
  g << c, 0, s, 0, 0, c, 0, -s, s, 0, c, 0, 0, -s, 0, c;
  return CovarianceMatrix::from_matrix(g);
}

Outcome gaussian_exactness() {
  const double vac = log_negativity(CovarianceMatrix{});
  const CovarianceMatrix tms = two_mode_squeezed(0.5);
  const double nu_err = std::abs(nu_minus(tms) - std::exp(-1.0) / 2.0);
  const double en_err = std::abs(log_negativity(tms) - 1.0);
  return {vac == 0.0 && nu_err <= 1e-10 && en_err <= 1e-10,
          fmt::format("E_N(vacuum) = {}, |nu - e^-1/2| = {:.2e}, |E_N - 1| = {:.2e}", vac, nu_err, en_err)};
}

Outcome derived_passivity() {
  double worst_gamma = 0.0, worst_en = 0.0;
  int runs = 0;
  for (double wa : {0.5, 1.0, 1.5}) {
    for (double g : linspace(0.1, 2.0, 10)) {
      const SystemParams p{wa, 1.0, g, 0.1, 5e-3, 0.0};
      TrajectoryOptions opt;
      opt.sample_stride = 10;
      for (const TrajectorySample& s : trajectory(p, MatrixMode::Derived, opt).samples) {
        const CovarianceMatrix c = covariance_from_moments(s.f);
        worst_gamma = std::max(worst_gamma, (c.gamma - Eigen::Matrix4d::Identity() / 2.0).cwiseAbs().maxCoeff());
        worst_en = std::max(worst_en, std::isnan(s.en) ? INFINITY : s.en);
      }
      ++runs;
    }
  }
  return {worst_gamma <= 1e-9 && worst_en <= 1e-9,
          fmt::format("{} trajectories, max |Gamma - I/2| = {:.2e}, max E_N = {:.2e}", runs, worst_gamma, worst_en)};
}

// Criteria 3 and 4 share one oracle run.
struct OracleRun {
  double moment_dev = 0.0;
  double trace_err = 0.0, herm = 0.0, min_eig = INFINITY, pop = 0.0;
  std::size_t samples = 0;
  bool aligned = true;
};

OracleRun oracle_run() {
  const SystemParams p{1.0, 1.0, 0.5, 0.1, 5e-3, 0.0};
  const FockConfig cfg{12, 12, 1e-6};
  TrajectoryOptions topt;
  topt.t_max = 20.0;
  const Trajectory ref = trajectory(p, MatrixMode::Derived, topt);
  OracleRun r;
  oracle_trace(p, cfg, EvolveOptions{20.0, 1e-3, 100}, [&](const OracleSample& s) {
    if (r.samples >= ref.samples.size() || ref.samples[r.samples].t != s.t) r.aligned = false;
    if (r.aligned) {
      const MomentVector& f = ref.samples[r.samples].f;
      for (std::size_t i = 0; i < kMomentCount; ++i) r.moment_dev = std::max(r.moment_dev, std::abs(s.f[i] - f[i]));
    }
    r.trace_err = std::max(r.trace_err, s.inv.trace_error);
    r.herm = std::max(r.herm, s.inv.hermiticity_residual);
    r.min_eig = std::min(r.min_eig, s.inv.min_eigenvalue);
    r.pop = std::max({r.pop, s.trunc.pop_a_top, s.trunc.pop_b_top});
    ++r.samples;
  });
  r.aligned = r.aligned && r.samples == ref.samples.size();
  return r;
}

Outcome dual_propagator() {
  // Literal per-entry relative difference; the scale-relative figure
  // (difference over the largest entry) is reported alongside.
  double worst[2] = {0.0, 0.0}, scaled = 0.0;
  std::string worst_at;
  int checked[2] = {0, 0}, skipped = 0;
  for (int m = 0; m < 2; ++m) {
    const MatrixMode mode = m == 0 ? MatrixMode::PaperLiteral : MatrixMode::Derived;
    for (double wa : {0.5, 1.0, 1.5}) {
      for (double g : linspace(0.1, 2.0, 10)) {
        const SystemParams p{wa, 1.0, g, 0.1, 5e-3, 0.0};
        TrajectoryOptions opt;
        opt.sample_stride = 50000;
        MomentVector fe, fr;
        try {
          fe = trajectory(p, mode, opt).samples.back().f;
          opt.propagator = Propagator::Rk4;
          fr = trajectory(p, mode, opt).samples.back().f;
        } catch (const DivergenceError&) {
          ++skipped;
          continue;
        }
        for (std::size_t i = 0; i < kMomentCount; ++i) {
          const double rel = std::abs(fr[i] - fe[i]) / std::max(std::abs(fe[i]), 1e-300);
          if (rel > worst[m] && rel > std::max(worst[0], worst[1])) {
            worst_at = fmt::format("{} omega_a={} g={} <{}> = {:.2e}, |diff| = {:.2e}", to_string(mode), wa, g,
                                   moment_name(i), std::abs(fe[i]), std::abs(fr[i] - fe[i]));
          }
          worst[m] = std::max(worst[m], rel);
          scaled = std::max(scaled, std::abs(fr[i] - fe[i]) / fe.max_abs());
        }
        ++checked[m];
      }
    }
  }
  return {worst[0] <= 1e-8 && worst[1] <= 1e-8,
          fmt::format("max per-entry relative difference at t = 50: paper {:.2e} ({} points), derived {:.2e} "
                      "({} points), {} divergent points skipped; worst at {}; scale-relative max {:.2e}",
                      worst[0], checked[0], worst[1], checked[1], skipped, worst_at, scaled)};
}

// Paper-literal landmark values recorded on the first run (grid 10 plus landmark g).
const double kLandmarkBaseline[3] = {0.10901427190174517, 0.051215615835521727, 0.030406177561504173};

Outcome reproduction_report() {
  std::ostringstream a, b;
  const int sa = cmd_compare(a), sb = cmd_compare(b);
  std::vector<std::string> lines;
  std::istringstream in(a.str());
  for (std::string l; std::getline(in, l);) lines.push_back(l);

  bool ok = sa == 0 && sb == 0 && a.str() == b.str() && lines.size() == 7;
  std::string detail = fmt::format("exit {}/{}, deterministic {}", sa, sb, a.str() == b.str());
  int landmark = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    // landmark,omega_a,g,"paper",mode,en_at_g,sweep_max,sweep_argmax_g,verdict
    const std::string& l = lines[i];
    const auto q = l.rfind('"');
    std::vector<std::string> cells;
    std::istringstream rest(l.substr(q + 2));
    for (std::string c; std::getline(rest, c, ',');) cells.push_back(c);
    if (cells.size() != 5) {
      ok = false;
      continue;
    }
    const double v = std::stod(cells[1]);
    if (cells[0] == "paper") {
      const double base = kLandmarkBaseline[landmark++ % 3];
      ok = ok && std::abs(v - base) <= 1e-9 * base;
      detail += fmt::format("; {} paper {:.6g} ({})", l.substr(0, 5), v, cells[4]);
    } else {
      ok = ok && cells[0] == "derived" && v <= 1e-9;
      detail += fmt::format(", derived {:.1e} ({})", v, cells[4]);
    }
  }
  ok = ok && landmark == 3;
  return {ok, detail};
}

// Attained exact log-negativity, computed once with the oracle at dt = 1e-3.
constexpr double kNonlinearBaseline = 0.9027778646034968;

Outcome nonlinear_entanglement() {
  const SystemParams p{1.0, 1.0, 1.0, 0.1, 0.005, 0.2};
  double best = 0.0, at = 0.0;
  oracle_trace(p, FockConfig{}, EvolveOptions{50.0, 1e-3, 100}, [&](const OracleSample& s) {
    if (s.en_exact > best) {
      best = s.en_exact;
      at = s.t;
    }
  });
  return {best > 1e-3 && std::abs(best - kNonlinearBaseline) <= 1e-6,
          fmt::format("max exact E_N = {:.10f} at t = {} (baseline {:.10f})", best, at, kNonlinearBaseline)};
}

Outcome property_suite(int argc, char** argv) {
  doctest::Context ctx(argc, argv);
  ctx.setOption("test-suite", "properties");
  ctx.setOption("minimal", true);
  const int rc = ctx.run();
  return {rc == 0, rc == 0 ? "all property tests green" : "property tests failed (see doctest output)"};
}

}  // namespace

int main(int argc, char** argv) {
  run(1, "Gaussian machinery exactness", gaussian_exactness);
  run(2, "derived-mode passivity", derived_passivity);

  OracleRun oracle;
  bool oracle_ok = true;
  std::string oracle_error;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    oracle = oracle_run();
  } catch (const std::exception& e) {
    oracle_ok = false;
    oracle_error = e.what();
  }
  const double oracle_secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  run(3, "oracle vs moment dynamics", [&]() -> Outcome {
    if (!oracle_ok) return {false, oracle_error};
    return {oracle.aligned && oracle.moment_dev <= 1e-6 && oracle_secs < 120.0,
            fmt::format("{} samples, max |moment difference| = {:.2e}, oracle run {:.1f} s", oracle.samples,
                        oracle.moment_dev, oracle_secs)};
  });
  run(4, "oracle conservation", [&]() -> Outcome {
    if (!oracle_ok) return {false, oracle_error};
    return {oracle.trace_err <= 1e-8 && oracle.herm <= 1e-10 && oracle.min_eig >= -1e-8 && oracle.pop <= 1e-6,
            fmt::format("trace err {:.1e}, Hermiticity {:.1e}, min eigenvalue {:.1e}, top population {:.1e}",
                        oracle.trace_err, oracle.herm, oracle.min_eig, oracle.pop)};
  });
  run(5, "RK4 vs matrix exponential", dual_propagator);
  run(6, "paper reproduction report", reproduction_report);
  run(7, "nonlinearity entangles", nonlinear_entanglement);
  run(8, "property suite", [&] { return property_suite(argc, argv); });

  fmt::print("{} of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
