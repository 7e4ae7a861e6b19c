#include "tcsim/oracle.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "tcsim/gaussian.hpp"
#include "tcsim/linalg.hpp"
#include "tcsim/moments.hpp"

namespace tcsim {

namespace {

constexpr cplx I{0.0, 1.0};

using Triplets = std::vector<Eigen::Triplet<cplx>>;

SparseOp from_triplets(int dim, const Triplets& t) {
  SparseOp m(dim, dim);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

// Tr[O rho] for sparse O.
cplx trace_product(const SparseOp& op, const Eigen::MatrixXcd& rho) {
  cplx sum = 0.0;
  for (int r = 0; r < op.outerSize(); ++r) {
    for (SparseOp::InnerIterator it(op, r); it; ++it) {
      sum += it.value() * rho(it.col(), it.row());
    }
  }
  return sum;
}

void require_shape(const DensityMatrix& rho) {
  if (rho.n_a < 1 || rho.n_b < 1 || rho.rho.rows() != rho.dim() || rho.rho.cols() != rho.dim()) {
    throw std::invalid_argument(fmt::format("density matrix shape {}x{} does not match {}x{} levels",
                                            rho.rho.rows(), rho.rho.cols(), rho.n_a, rho.n_b));
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Configuration and states

void FockConfig::validate() const {
  if (n_a < 2 || n_b < 2) {
    throw std::invalid_argument(fmt::format("Fock truncation needs n_a, n_b >= 2 (got {}, {})", n_a, n_b));
  }
  if (!std::isfinite(truncation_tol) || truncation_tol <= 0.0) {
    throw std::invalid_argument(fmt::format("truncation_tol must be > 0, got {}", truncation_tol));
  }
}

DensityMatrix DensityMatrix::vacuum(const FockConfig& cfg) { return fock(cfg, 0, 0); }

DensityMatrix DensityMatrix::fock(const FockConfig& cfg, int n_cavity, int n_qubit) {
  cfg.validate();
  if (n_cavity < 0 || n_cavity >= cfg.n_a || n_qubit < 0 || n_qubit >= cfg.n_b) {
    throw std::out_of_range(fmt::format("Fock state |{},{}> outside truncation", n_cavity, n_qubit));
  }
  DensityMatrix d{cfg.n_a, cfg.n_b, Eigen::MatrixXcd::Zero(cfg.dim(), cfg.dim())};
  const int k = d.index(n_cavity, n_qubit);
  d.rho(k, k) = 1.0;
  return d;
}

DensityMatrix DensityMatrix::pure(const FockConfig& cfg, const Eigen::VectorXcd& psi) {
  cfg.validate();
  if (psi.size() != cfg.dim()) {
    throw std::invalid_argument(fmt::format("state vector has {} entries, expected {}", psi.size(), cfg.dim()));
  }
  const double norm = psi.norm();
  if (!(norm > 0.0)) throw std::invalid_argument("state vector has zero norm");
  const Eigen::VectorXcd v = psi / norm;
  return {cfg.n_a, cfg.n_b, v * v.adjoint()};
}

LadderOperators ladder_operators(const FockConfig& cfg) {
  cfg.validate();
  Triplets ta, tb;
  for (int i = 0; i < cfg.n_a; ++i) {
    for (int j = 0; j < cfg.n_b; ++j) {
      const int r = i * cfg.n_b + j;
      if (i + 1 < cfg.n_a) ta.emplace_back(r, (i + 1) * cfg.n_b + j, std::sqrt(double(i + 1)));
      if (j + 1 < cfg.n_b) tb.emplace_back(r, i * cfg.n_b + j + 1, std::sqrt(double(j + 1)));
    }
  }
  return {from_triplets(cfg.dim(), ta), from_triplets(cfg.dim(), tb)};
}

namespace {

SparseOp sparse_hamiltonian(const SystemParams& params, const FockConfig& cfg) {
  params.validate();
  const auto [a, b] = ladder_operators(cfg);
  const SparseOp ad = a.adjoint();
  const SparseOp bd = b.adjoint();
  SparseOp h = params.omega_a * SparseOp(ad * a) + params.omega_b * SparseOp(bd * b) -
               (params.e_c / 2.0) * SparseOp(bd * bd * b * b) +
               params.g * SparseOp(ad * b + a * bd) + (I * params.drive_e) * SparseOp(ad - a);
  h.prune(cplx(0.0));
  return h;
}

}  // namespace

Eigen::MatrixXcd build_hamiltonian(const SystemParams& params, const FockConfig& cfg) {
  return Eigen::MatrixXcd(sparse_hamiltonian(params, cfg));
}

Eigen::MatrixXcd lindblad_rhs(const Eigen::MatrixXcd& h, double gamma_s, const DensityMatrix& rho) {
  require_shape(rho);
  if (h.rows() != rho.dim() || h.cols() != rho.dim()) {
    throw std::invalid_argument("lindblad_rhs: Hamiltonian and density matrix shapes differ");
  }
  const FockConfig cfg{rho.n_a, rho.n_b, 1.0};
  const Eigen::MatrixXcd a = Eigen::MatrixXcd(ladder_operators(cfg).a);
  const Eigen::MatrixXcd n = a.adjoint() * a;
  const Eigen::MatrixXcd& r = rho.rho;
  return -I * (h * r - r * h) + gamma_s * (a * r * a.adjoint() - 0.5 * (n * r + r * n));
}

LindbladGenerator::LindbladGenerator(const SystemParams& params, const FockConfig& cfg)
    : h_(sparse_hamiltonian(params, cfg)),
      a_(ladder_operators(cfg).a),
      gamma_(params.gamma_s),
      half_n_(cfg.dim()),
      work_(cfg.dim(), cfg.dim()),
      work2_(cfg.dim(), cfg.dim()) {
  for (int i = 0; i < cfg.n_a; ++i) {
    for (int j = 0; j < cfg.n_b; ++j) half_n_(i * cfg.n_b + j) = 0.5 * gamma_ * i;
  }
}

void LindbladGenerator::apply(const RowMatrixXcd& rho, RowMatrixXcd& out) {
  const Eigen::Index dim = rho.rows();
  // rho H = (H rho)^H for Hermitian rho.
  work_.noalias() = h_ * rho;
  out = -I * (work_ - work_.adjoint());
  if (gamma_ == 0.0) return;
  // a rho a+ = a (a rho)^H for Hermitian rho; symmetrize to stay exactly Hermitian.
  work_.noalias() = a_ * rho;
  work2_ = work_.adjoint();
  work_.noalias() = a_ * work2_;
  out += (gamma_ / 2.0) * (work_ + work_.adjoint());
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) out(r, c) -= (half_n_(r) + half_n_(c)) * rho(r, c);
  }
}

// ---------------------------------------------------------------------------
// Diagnostics

DensityReport check_density(const DensityMatrix& rho) {
  require_shape(rho);
  DensityReport rep;
  rep.hermiticity_residual = (rho.rho - rho.rho.adjoint()).cwiseAbs().maxCoeff();
  rep.trace_error = std::abs(rho.rho.trace() - 1.0);
  if (!rho.rho.allFinite()) {
    rep.valid = false;
    rep.min_eigenvalue = std::nan("");
    return rep;
  }
  if (rep.hermiticity_residual > 1e-10) {
    rep.valid = false;
    rep.min_eigenvalue = std::nan("");
    return rep;
  }
  rep.min_eigenvalue = hermitian_eigenvalues(rho.rho).front();
  rep.valid = rep.trace_error <= 1e-8 && rep.min_eigenvalue >= -1e-8;
  return rep;
}

TruncationReport truncation_check(const DensityMatrix& rho, const FockConfig& cfg) {
  require_shape(rho);
  TruncationReport rep;
  const int top_a = std::max(1, rho.n_a - 2);
  const int top_b = std::max(1, rho.n_b - 2);
  for (int i = 0; i < rho.n_a; ++i) {
    for (int j = 0; j < rho.n_b; ++j) {
      const double p = rho.rho(rho.index(i, j), rho.index(i, j)).real();
      if (i >= top_a) rep.pop_a_top += p;
      if (j >= top_b) rep.pop_b_top += p;
    }
  }
  rep.pass = rep.pop_a_top <= cfg.truncation_tol && rep.pop_b_top <= cfg.truncation_tol;
  return rep;
}

TruncationError::TruncationError(double time, char mode, double population, double tol)
    : std::runtime_error(fmt::format(
          "Fock truncation violated at t = {} in mode {}: top-level population {:.3e} > {:.1e}",
          time, mode, population, tol)),
      time_(time),
      mode_(mode) {}

DensityInvariantError::DensityInvariantError(double time, const DensityReport& r)
    : std::runtime_error(fmt::format(
          "density matrix invariants violated at t = {} (trace error {:.3e}, Hermiticity "
          "residual {:.3e}, min eigenvalue {:.3e})",
          time, r.trace_error, r.hermiticity_residual, r.min_eigenvalue)),
      time_(time) {}

// ---------------------------------------------------------------------------
// Evolution

void EvolveOptions::validate() const {
  if (!std::isfinite(t_max) || t_max <= 0.0) {
    throw std::invalid_argument(fmt::format("t_max must be > 0, got {}", t_max));
  }
  if (!std::isfinite(dt) || dt <= 0.0) {
    throw std::invalid_argument(fmt::format("dt must be > 0, got {}", dt));
  }
  if (sample_stride < 1) {
    throw std::invalid_argument(fmt::format("sample_stride must be >= 1, got {}", sample_stride));
  }
}

void evolve(const SystemParams& params, const FockConfig& cfg, const EvolveOptions& options,
            const DensityVisitor& visit) {
  params.validate();
  cfg.validate();
  options.validate();
  const long long n_steps = step_count(options.t_max, options.dt);
  const double dt = options.dt;

  LindbladGenerator gen(params, cfg);
  DensityMatrix state = DensityMatrix::vacuum(cfg);
  const Eigen::Index dim = cfg.dim();
  RowMatrixXcd rho = state.rho;
  RowMatrixXcd k(dim, dim), acc(dim, dim), probe(dim, dim);

  auto sample = [&](double t) {
    state.rho = rho;
    const DensityReport inv = check_density(state);
    if (!inv.valid) throw DensityInvariantError(t, inv);
    const TruncationReport trunc = truncation_check(state, cfg);
    if (trunc.pop_a_top > cfg.truncation_tol) {
      throw TruncationError(t, 'a', trunc.pop_a_top, cfg.truncation_tol);
    }
    if (trunc.pop_b_top > cfg.truncation_tol) {
      throw TruncationError(t, 'b', trunc.pop_b_top, cfg.truncation_tol);
    }
    if (visit) visit(t, state, trunc, inv);
  };

  sample(0.0);
  for (long long step = 1; step <= n_steps; ++step) {
    gen.apply(rho, k);  // k1
    acc = k;
    probe = rho + (dt / 2.0) * k;
    gen.apply(probe, k);  // k2
    acc += 2.0 * k;
    probe = rho + (dt / 2.0) * k;
    gen.apply(probe, k);  // k3
    acc += 2.0 * k;
    probe = rho + dt * k;
    gen.apply(probe, k);  // k4
    acc += k;
    rho += (dt / 6.0) * acc;
    if (step % options.sample_stride == 0 || step == n_steps) {
      sample(static_cast<double>(step) * dt);
    }
  }
}

std::vector<std::pair<double, DensityMatrix>> evolve_sampled(const SystemParams& params,
                                                             const FockConfig& cfg,
                                                             const EvolveOptions& options) {
  std::vector<std::pair<double, DensityMatrix>> out;
  evolve(params, cfg, options,
         [&out](double t, const DensityMatrix& rho, const TruncationReport&, const DensityReport&) {
           out.emplace_back(t, rho);
         });
  return out;
}

// ---------------------------------------------------------------------------
// Observables

MomentVector extract_moments(const DensityMatrix& rho) {
  require_shape(rho);
  const FockConfig cfg{rho.n_a, rho.n_b, 1.0};
  const auto [a, b] = ladder_operators(cfg);
  const SparseOp ad = a.adjoint();
  const SparseOp bd = b.adjoint();
  const Eigen::MatrixXcd& r = rho.rho;

  MomentVector f;
  f[Moment::a] = trace_product(a, r);
  f[Moment::ad] = trace_product(ad, r);
  f[Moment::b] = trace_product(b, r);
  f[Moment::bd] = trace_product(bd, r);
  f[Moment::aa] = trace_product(SparseOp(a * a), r);
  f[Moment::adad] = trace_product(SparseOp(ad * ad), r);
  f[Moment::bb] = trace_product(SparseOp(b * b), r);
  f[Moment::bdbd] = trace_product(SparseOp(bd * bd), r);
  f[Moment::ab] = trace_product(SparseOp(a * b), r);
  f[Moment::adbd] = trace_product(SparseOp(ad * bd), r);
  f[Moment::adb] = trace_product(SparseOp(ad * b), r);
  f[Moment::abd] = trace_product(SparseOp(a * bd), r);
  f[Moment::ada] = trace_product(SparseOp(ad * a), r);
  f[Moment::aad] = trace_product(SparseOp(a * ad), r);
  f[Moment::bdb] = trace_product(SparseOp(bd * b), r);
  f[Moment::bbd] = trace_product(SparseOp(b * bd), r);
  return f;
}

Eigen::Matrix4d quadrature_covariance(const DensityMatrix& rho) {
  require_shape(rho);
  const FockConfig cfg{rho.n_a, rho.n_b, 1.0};
  const auto [a, b] = ladder_operators(cfg);
  const double s = 1.0 / std::sqrt(2.0);
  const std::array<SparseOp, 4> x = {
      SparseOp(s * (a + SparseOp(a.adjoint()))),
      SparseOp((s / I) * (a - SparseOp(a.adjoint()))),
      SparseOp(s * (b + SparseOp(b.adjoint()))),
      SparseOp((s / I) * (b - SparseOp(b.adjoint()))),
  };
  std::array<double, 4> mean{};
  for (int i = 0; i < 4; ++i) mean[i] = trace_product(x[i], rho.rho).real();
  Eigen::Matrix4d g;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const SparseOp sym = 0.5 * (SparseOp(x[i] * x[j]) + SparseOp(x[j] * x[i]));
      g(i, j) = trace_product(sym, rho.rho).real() - mean[i] * mean[j];
    }
  }
  return g;
}

DensityMatrix partial_transpose_b(const DensityMatrix& rho) {
  require_shape(rho);
  DensityMatrix out{rho.n_a, rho.n_b, Eigen::MatrixXcd(rho.dim(), rho.dim())};
  for (int i = 0; i < rho.n_a; ++i)
    for (int j = 0; j < rho.n_b; ++j)
      for (int k = 0; k < rho.n_a; ++k)
        for (int l = 0; l < rho.n_b; ++l)
          out.rho(rho.index(i, j), rho.index(k, l)) = rho.rho(rho.index(i, l), rho.index(k, j));
  return out;
}

DensityMatrix partial_transpose_a(const DensityMatrix& rho) {
  require_shape(rho);
  DensityMatrix out{rho.n_a, rho.n_b, Eigen::MatrixXcd(rho.dim(), rho.dim())};
  for (int i = 0; i < rho.n_a; ++i)
    for (int j = 0; j < rho.n_b; ++j)
      for (int k = 0; k < rho.n_a; ++k)
        for (int l = 0; l < rho.n_b; ++l)
          out.rho(rho.index(i, j), rho.index(k, l)) = rho.rho(rho.index(k, j), rho.index(i, l));
  return out;
}

double exact_log_negativity(const DensityMatrix& rho, const FockConfig& cfg) {
  require_shape(rho);
  if (rho.n_a != cfg.n_a || rho.n_b != cfg.n_b) {
    throw std::invalid_argument("exact_log_negativity: density matrix does not match FockConfig");
  }
  const std::vector<double> ev = hermitian_eigenvalues(partial_transpose_b(rho).rho);
  double norm = 0.0;
  for (double v : ev) norm += std::abs(v);
  return std::log(norm);
}

std::vector<OracleSample> oracle_trace(const SystemParams& params, const FockConfig& cfg,
                                       const EvolveOptions& options,
                                       const std::function<void(const OracleSample&)>& visit) {
  std::vector<OracleSample> out;
  evolve(params, cfg, options,
         [&](double t, const DensityMatrix& rho, const TruncationReport& trunc,
             const DensityReport& inv) {
           OracleSample s;
           s.t = t;
           s.f = extract_moments(rho);
           s.trunc = trunc;
           s.inv = inv;
           s.en_exact = exact_log_negativity(rho, cfg);
           try {
             s.en = log_negativity(covariance_from_moments(s.f));
           } catch (const std::domain_error&) {
             s.en = std::nan("");
           }
           if (visit) visit(s);
           out.push_back(std::move(s));
         });
  return out;
}

}  // namespace tcsim
