#include "normalkit/krylov/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <vector>

#include <json.hpp>

#include "normalkit/simd/kernels.hpp"

namespace normalkit::krylov {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Vector initial_guess(const KrylovConfig& cfg, std::size_t n) {
  if (cfg.x0.empty()) return Vector(n, 0.0);
  require_size(cfg.x0.size(), n, "KrylovConfig::x0");
  return cfg.x0;
}

bool all_zero(ConstSpan v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

double residual_norm(const LinearOperator& a, ConstSpan x, ConstSpan b) {
  Vector r = a.apply(x);
  simd::xpay(b, -1.0, r);
  return simd::nrm2(r);
}

void finish(SolveReport& rep, Termination t, Index iterations, Clock::time_point t0) {
  rep.termination = t;
  rep.converged = t == Termination::ResidualTol;
  rep.iterations = iterations;
  rep.wall_time = seconds_since(t0);
}

}  // namespace

const char* to_string(Termination t) {
  switch (t) {
    case Termination::ResidualTol:
      return "residual-tol";
    case Termination::MaxIter:
      return "max-iter";
    case Termination::Breakdown:
      return "breakdown";
    case Termination::Diverged:
      return "diverged";
  }
  return "?";
}

const char* to_string(Monitor m) {
  return m == Monitor::TrueResidual ? "true-residual" : "preconditioned-residual";
}

const char* to_string(Side s) { return s == Side::Right ? "right" : "left"; }

void KrylovConfig::validate() const {
  if (!(tol_abs > 0.0)) throw ConfigError("KrylovConfig: tol_abs must be positive");
  if (max_iter < 1) throw ConfigError("KrylovConfig: max_iter must be at least 1");
  if (divergence_factor < 0.0) throw ConfigError("KrylovConfig: divergence_factor must be >= 0");
  if (basis_cap < 0) throw ConfigError("KrylovConfig: basis_cap must be >= 0");
}

SolveReport pcg(const LinearOperator& b, const PreconditionerHandle& ginv, ConstSpan rhs,
                const KrylovConfig& cfg, const ResidualFn& true_residual,
                const IterateObserver& observer) {
  cfg.validate();
  const auto t0 = Clock::now();
  const std::size_t n = rhs.size();
  require_size(static_cast<std::size_t>(b.rows()), n, "pcg operator");
  require_size(static_cast<std::size_t>(ginv.size()), n, "pcg preconditioner");
  const auto& k = simd::active();

  SolveReport rep;
  Vector x = initial_guess(cfg, n);
  Vector r(rhs.begin(), rhs.end());
  Vector q(n);
  if (!all_zero(x)) {
    b.apply(x, q);
    k.axpy(-1.0, q.data(), r.data(), n);
  }
  Vector z = ginv.apply_inverse(r);
  auto measure = [&]() { return true_residual ? true_residual(x) : simd::nrm2(r); };
  auto monitored = [&](double res) {
    return cfg.monitor == Monitor::PreconditionedResidual ? simd::nrm2(z) : res;
  };
  const double res0 = measure();
  const double mon0 = monitored(res0);
  rep.residual_history.push_back(res0);
  rep.monitor_history.push_back(mon0);

  auto done = [&](Termination t, Index it) {
    rep.solution = std::move(x);
    rep.final_residual = rep.residual_history.back();
    finish(rep, t, it, t0);
    return rep;
  };
  if (mon0 < cfg.tol_abs) return done(Termination::ResidualTol, 0);

  Vector p = z;
  double rz = k.dot(r.data(), z.data(), n);
  if (!(rz > 0.0)) {
    rep.message = "preconditioner is not positive definite (rᵀG⁻¹r <= 0)";
    return done(Termination::Breakdown, 0);
  }
  for (Index it = 1; it <= cfg.max_iter; ++it) {
    b.apply(p, q);
    const double pq = k.dot(p.data(), q.data(), n);
    if (!(pq > 0.0) || !std::isfinite(pq)) {
      rep.message = "operator is not positive definite (pᵀBp <= 0)";
      return done(Termination::Breakdown, it - 1);
    }
    const double alpha = rz / pq;
    k.axpy(alpha, p.data(), x.data(), n);
    k.axpy(-alpha, q.data(), r.data(), n);
    ginv.apply_inverse(r, z);
    const double res = measure();
    const double mon = monitored(res);
    rep.residual_history.push_back(res);
    rep.monitor_history.push_back(mon);
    if (observer) observer(it, x);
    if (!std::isfinite(mon)) {
      rep.message = "non-finite residual";
      return done(Termination::Breakdown, it);
    }
    if (mon < cfg.tol_abs) return done(Termination::ResidualTol, it);
    if (cfg.divergence_factor > 0.0 && mon > cfg.divergence_factor * mon0) {
      return done(Termination::Diverged, it);
    }
    const double rz_new = k.dot(r.data(), z.data(), n);
    if (!(rz_new > 0.0)) {
      rep.message = "preconditioner is not positive definite (rᵀG⁻¹r <= 0)";
      return done(Termination::Breakdown, it);
    }
    k.xpay(z.data(), rz_new / rz, p.data(), n);
    rz = rz_new;
  }
  return done(Termination::MaxIter, cfg.max_iter);
}

SolveReport cgne(const LinearOperator& a, const PreconditionerHandle& ginv, ConstSpan b,
                 const KrylovConfig& cfg, const IterateObserver& observer) {
  require_size(b.size(), static_cast<std::size_t>(a.rows()), "cgne rhs");
  const Vector rhs = a.apply_transpose(b);
  auto ata = [a](ConstSpan x, MutSpan y) { a.apply_transpose(a.apply(x), y); };
  const LinearOperator normal(a.cols(), a.cols(), ata, ata);
  ResidualFn true_res = [&a, b](ConstSpan x) { return residual_norm(a, x, b); };
  SolveReport rep = pcg(normal, ginv, rhs, cfg, true_res, observer);
  rep.final_residual = residual_norm(a, rep.solution, b);
  return rep;
}

SolveReport cgne(const LinearOperator& a, const LinearOperator& t, const PreconditionerHandle& ginv,
                 ConstSpan b, const KrylovConfig& cfg, const IterateObserver& observer) {
  require_size(b.size(), static_cast<std::size_t>(a.rows()), "cgne rhs");
  require_size(static_cast<std::size_t>(t.rows()), b.size(), "cgne weight");
  const Vector rhs = a.apply_transpose(t.apply(b));
  const LinearOperator normal(
      a.cols(), a.cols(),
      [a, t](ConstSpan x, MutSpan y) { a.apply_transpose(t.apply(a.apply(x)), y); },
      [a, t](ConstSpan x, MutSpan y) { a.apply_transpose(t.apply(a.apply(x)), y); });
  Vector t_norms;
  ResidualFn true_res = [&a, &t, b, &t_norms](ConstSpan x) {
    Vector r = a.apply(x);
    simd::xpay(b, -1.0, r);
    const Vector tr = t.apply(r);
    t_norms.push_back(std::sqrt(std::max(0.0, simd::dot(r, tr))));
    return simd::nrm2(r);
  };
  SolveReport rep = pcg(normal, ginv, rhs, cfg, true_res, observer);
  rep.t_norm_history = std::move(t_norms);
  rep.final_residual = residual_norm(a, rep.solution, b);
  return rep;
}

SolveReport lsqr(const LinearOperator& a, const LinearOperator& pinv, ConstSpan b,
                 const KrylovConfig& cfg) {
  cfg.validate();
  const auto t0 = Clock::now();
  const std::size_t m = b.size();
  const std::size_t n = static_cast<std::size_t>(a.cols());
  require_size(static_cast<std::size_t>(a.rows()), m, "lsqr rhs");
  const auto& k = simd::active();

  SolveReport rep;
  Vector x = initial_guess(cfg, n);
  Vector u(b.begin(), b.end());
  if (!all_zero(x)) {
    const Vector ax = a.apply(x);
    k.axpy(-1.0, ax.data(), u.data(), m);
  }
  double beta = simd::nrm2(u);
  rep.residual_history.push_back(beta);
  rep.monitor_history.push_back(beta);
  auto done = [&](Termination t, Index it) {
    rep.solution = std::move(x);
    rep.final_residual = residual_norm(a, rep.solution, b);
    finish(rep, t, it, t0);
    return rep;
  };
  if (beta < cfg.tol_abs) return done(Termination::ResidualTol, 0);
  k.scal(1.0 / beta, u.data(), m);
  Vector v = pinv.apply_transpose(a.apply_transpose(u));
  double alpha = simd::nrm2(v);
  if (!(alpha > 0.0)) {
    rep.message = "Aᵀr = 0 at the initial guess";
    return done(Termination::Breakdown, 0);
  }
  k.scal(1.0 / alpha, v.data(), n);
  Vector pv = pinv.apply(v);
  Vector pw = pv;
  double phibar = beta;
  double rhobar = alpha;
  const double mon0 = beta;
  for (Index it = 1; it <= cfg.max_iter; ++it) {
    // u ← A P⁻¹ v − αu,  v ← P⁻ᵀ Aᵀ u − βv
    Vector au = a.apply(pv);
    k.xpay(au.data(), -alpha, u.data(), m);
    beta = simd::nrm2(u);
    if (beta > 0.0) k.scal(1.0 / beta, u.data(), m);
    Vector atu = pinv.apply_transpose(a.apply_transpose(u));
    k.xpay(atu.data(), -beta, v.data(), n);
    alpha = simd::nrm2(v);
    if (alpha > 0.0) k.scal(1.0 / alpha, v.data(), n);

    const double rho = std::hypot(rhobar, beta);
    const double c = rhobar / rho;
    const double s = beta / rho;
    const double theta = s * alpha;
    rhobar = -c * alpha;
    const double phi = c * phibar;
    phibar = s * phibar;

    k.axpy(phi / rho, pw.data(), x.data(), n);
    pv = pinv.apply(v);
    k.xpay(pv.data(), -theta / rho, pw.data(), n);

    const double res = residual_norm(a, x, b);
    const double mon = cfg.monitor == Monitor::PreconditionedResidual ? std::abs(phibar) : res;
    rep.residual_history.push_back(res);
    rep.monitor_history.push_back(mon);
    if (!std::isfinite(mon)) {
      rep.message = "non-finite residual";
      return done(Termination::Breakdown, it);
    }
    if (mon < cfg.tol_abs) return done(Termination::ResidualTol, it);
    if (cfg.divergence_factor > 0.0 && mon > cfg.divergence_factor * mon0) {
      return done(Termination::Diverged, it);
    }
    if (!(alpha > 0.0) || !(beta > 0.0)) {
      rep.message = "Golub-Kahan bidiagonalization terminated (zero vector)";
      return done(Termination::Breakdown, it);
    }
  }
  return done(Termination::MaxIter, cfg.max_iter);
}

SolveReport gmres(const LinearOperator& a, const LinearOperator& pinv, ConstSpan b,
                  const KrylovConfig& cfg) {
  cfg.validate();
  const auto t0 = Clock::now();
  const std::size_t n = b.size();
  require_size(static_cast<std::size_t>(a.rows()), n, "gmres rhs");
  require_size(static_cast<std::size_t>(pinv.rows()), n, "gmres preconditioner");
  const auto& k = simd::active();
  const bool left = cfg.side == Side::Left;
  const Index cap = cfg.basis_cap > 0 ? std::min(cfg.basis_cap, cfg.max_iter) : cfg.max_iter;

  SolveReport rep;
  Vector x = initial_guess(cfg, n);
  Vector r0(b.begin(), b.end());
  if (!all_zero(x)) {
    const Vector ax = a.apply(x);
    k.axpy(-1.0, ax.data(), r0.data(), n);
  }
  if (left) r0 = pinv.apply(r0);
  const double beta0 = simd::nrm2(r0);
  rep.residual_history.push_back(beta0);
  rep.monitor_history.push_back(beta0);

  std::vector<Vector> basis;
  std::vector<Vector> hcols;  // column j holds H(0..j+1, j), rotated in place
  Vector cs, sn, g{beta0};

  auto assemble = [&](Index m) {
    // Back-substitution on the rotated Hessenberg matrix, then x += M V y.
    Vector y(static_cast<std::size_t>(m));
    for (Index i = m - 1; i >= 0; --i) {
      double s = g[static_cast<std::size_t>(i)];
      for (Index j = i + 1; j < m; ++j) {
        s -= hcols[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(j)];
      }
      y[static_cast<std::size_t>(i)] = s / hcols[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
    }
    Vector update(n, 0.0);
    for (Index j = 0; j < m; ++j) {
      k.axpy(y[static_cast<std::size_t>(j)], basis[static_cast<std::size_t>(j)].data(), update.data(), n);
    }
    if (!left) update = pinv.apply(update);
    k.axpy(1.0, update.data(), x.data(), n);
  };
  auto done = [&](Termination t, Index it) {
    if (it > 0) assemble(it);
    rep.solution = std::move(x);
    rep.final_residual = residual_norm(a, rep.solution, b);
    finish(rep, t, it, t0);
    return rep;
  };
  if (beta0 < cfg.tol_abs) return done(Termination::ResidualTol, 0);

  basis.push_back(r0);
  k.scal(1.0 / beta0, basis[0].data(), n);
  const double happy_tol = 1e-14 * beta0;
  for (Index j = 0; j < cfg.max_iter; ++j) {
    if (j >= cap) {
      rep.message = "GMRES basis cap reached";
      return done(Termination::MaxIter, j);
    }
    const Vector& vj = basis[static_cast<std::size_t>(j)];
    Vector w = left ? pinv.apply(a.apply(vj)) : a.apply(pinv.apply(vj));
    Vector h(static_cast<std::size_t>(j) + 2, 0.0);
    for (Index i = 0; i <= j; ++i) {
      const double hij = k.dot(basis[static_cast<std::size_t>(i)].data(), w.data(), n);
      h[static_cast<std::size_t>(i)] = hij;
      k.axpy(-hij, basis[static_cast<std::size_t>(i)].data(), w.data(), n);
    }
    double hnext = simd::nrm2(w);
    if (hnext > 0.0 && std::abs(k.dot(basis[0].data(), w.data(), n)) > 1e-8 * hnext) {
      Vector corr(static_cast<std::size_t>(j) + 1);
      for (Index i = 0; i <= j; ++i) corr[static_cast<std::size_t>(i)] = k.dot(basis[static_cast<std::size_t>(i)].data(), w.data(), n);
      for (Index i = 0; i <= j; ++i) {
        k.axpy(-corr[static_cast<std::size_t>(i)], basis[static_cast<std::size_t>(i)].data(), w.data(), n);
        h[static_cast<std::size_t>(i)] += corr[static_cast<std::size_t>(i)];
      }
      hnext = simd::nrm2(w);
    }
    h[static_cast<std::size_t>(j) + 1] = hnext;
    for (Index i = 0; i < j; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      const double t = cs[ui] * h[ui] + sn[ui] * h[ui + 1];
      h[ui + 1] = -sn[ui] * h[ui] + cs[ui] * h[ui + 1];
      h[ui] = t;
    }
    const auto uj = static_cast<std::size_t>(j);
    const double rr = std::hypot(h[uj], h[uj + 1]);
    cs.push_back(rr > 0.0 ? h[uj] / rr : 1.0);
    sn.push_back(rr > 0.0 ? h[uj + 1] / rr : 0.0);
    h[uj] = rr;
    h[uj + 1] = 0.0;
    g.push_back(-sn[uj] * g[uj]);
    g[uj] = cs[uj] * g[uj];
    hcols.push_back(std::move(h));

    const double res = std::abs(g[uj + 1]);
    rep.residual_history.push_back(res);
    rep.monitor_history.push_back(res);
    if (!std::isfinite(res) || !(rr > 0.0)) {
      rep.message = "Arnoldi breakdown";
      return done(Termination::Breakdown, j);
    }
    if (res < cfg.tol_abs) return done(Termination::ResidualTol, j + 1);
    if (hnext < happy_tol) {
      rep.message = "happy breakdown";
      return done(Termination::ResidualTol, j + 1);
    }
    k.scal(1.0 / hnext, w.data(), n);
    basis.push_back(std::move(w));
  }
  return done(Termination::MaxIter, cfg.max_iter);
}

SolveReport iterative_refinement(const InnerSolve& solve, const LinearOperator& a, ConstSpan b,
                                 Index steps) {
  if (steps < 1) throw ConfigError("iterative_refinement: steps must be at least 1");
  const auto t0 = Clock::now();
  const std::size_t n = b.size();
  SolveReport rep;
  Vector x(static_cast<std::size_t>(a.cols()), 0.0);
  Vector r(b.begin(), b.end());
  rep.residual_history.push_back(simd::nrm2(r));
  rep.monitor_history.push_back(rep.residual_history.back());
  Index total = 0;
  Termination last = Termination::MaxIter;
  for (Index s = 0; s < steps; ++s) {
    SolveReport inner = solve(r);
    simd::axpy(1.0, inner.solution, x);
    r = a.apply(x);
    simd::xpay(b, -1.0, r);
    rep.residual_history.insert(rep.residual_history.end(), inner.residual_history.begin() + 1,
                                inner.residual_history.end());
    rep.monitor_history.insert(rep.monitor_history.end(), inner.monitor_history.begin() + 1,
                               inner.monitor_history.end());
    total += inner.iterations;
    last = inner.termination;
    if (last == Termination::Breakdown) break;
  }
  require_size(r.size(), n, "iterative_refinement");
  rep.solution = std::move(x);
  rep.final_residual = simd::nrm2(r);
  finish(rep, last, total, t0);
  return rep;
}

void write_history_csv(std::ostream& out, const SolveReport& report) {
  out << "step,res\n";
  char buf[64];
  for (std::size_t i = 0; i < report.residual_history.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.16e\n", i, report.residual_history[i]);
    out << buf;
  }
}

void write_history_csv(const std::string& path, const SolveReport& report) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  write_history_csv(out, report);
}

void write_jsonl_log(std::ostream& out, const SolveReport& report, const std::string& solver,
                     const KrylovConfig& cfg, const std::string& extra_json) {
  nlohmann::json head;
  head["record"] = "run";
  head["solver"] = solver;
  head["config"] = {{"tol_abs", cfg.tol_abs},
                    {"max_iter", cfg.max_iter},
                    {"monitor", to_string(cfg.monitor)},
                    {"divergence_factor", cfg.divergence_factor},
                    {"side", to_string(cfg.side)},
                    {"basis_cap", cfg.basis_cap},
                    {"x0", cfg.x0.empty() ? "zero" : "given"}};
  head["extra"] = nlohmann::json::parse(extra_json);
  head["iterations"] = report.iterations;
  head["converged"] = report.converged;
  head["termination"] = to_string(report.termination);
  head["final_residual"] = report.final_residual;
  head["wall_time"] = report.wall_time;
  if (!report.message.empty()) head["message"] = report.message;
  out << head.dump() << '\n';
  for (std::size_t i = 0; i < report.residual_history.size(); ++i) {
    nlohmann::json step{{"record", "step"}, {"step", i}, {"res", report.residual_history[i]}};
    if (i < report.monitor_history.size()) step["monitor"] = report.monitor_history[i];
    out << step.dump() << '\n';
  }
}

}  // namespace normalkit::krylov
