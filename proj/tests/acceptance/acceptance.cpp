#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "normalkit/fd1d/problem.hpp"
#include "normalkit/fem2d/assembly.hpp"
#include "normalkit/fem2d/mesh.hpp"
#include "normalkit/fem2d/riesz.hpp"
#include "normalkit/krylov/solvers.hpp"
#include "normalkit/krylov/spectrum.hpp"
#include "normalkit/matkit/eigen.hpp"
#include "normalkit/matkit/qr.hpp"
#include "normalkit/precond/direct.hpp"
#include "normalkit/precond/factor.hpp"
#include "normalkit/xprmt/experiments.hpp"
#include "normalkit/xprmt/table.hpp"
#include "support.hpp"

using namespace normalkit;
using krylov::KrylovConfig;
using krylov::LinearOperator;
using matkit::DenseMatrix;
using precond::PreconditionerHandle;
using namespace testing_support;

namespace {

struct Outcome {
  bool passed = true;
  std::ostringstream notes;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      notes << "  failed: " << what << '\n';
    }
  }
};

std::string golden_dir;

void golden_check(Outcome& o, const std::string& experiment, const std::string& golden_name) {
  const auto result = xprmt::run_experiment(xprmt::lookup(experiment));
  const auto golden = xprmt::load_table(golden_dir + "/" + golden_name + ".json");
  const auto rep = xprmt::compare(result, golden);
  xprmt::print_table(o.notes, result);
  for (const auto& v : rep.cells) {
    if (!v.passed) {
      o.check(false, golden.row_label + "=" + golden.rows[v.row] + " " + golden.columns[v.column] + ": " + v.detail);
    }
  }
  o.check(!result.has_errors(), experiment + " reported solver errors");
}

PreconditionerHandle dense_inverse(const DenseMatrix& g) {
  auto inv = std::make_shared<DenseMatrix>(matkit::symmetric_part(naive_inverse(g)));
  return PreconditionerHandle(
      g.rows(), [inv](ConstSpan r, MutSpan z) { inv->apply(r, z); },
      precond::SymmetryCertificate::ExactlySymmetric, "dense inverse");
}

DenseMatrix random_spd(Index n, unsigned seed) {
  const DenseMatrix m = random_dense(n, n, seed);
  DenseMatrix s = naive_product(naive_transpose(m), m);
  for (Index i = 0; i < n; ++i) s(i, i) += 1.0;
  return s;
}

DenseMatrix perturbed(const DenseMatrix& a, unsigned seed, double scale) {
  DenseMatrix p = a;
  const DenseMatrix noise = random_dense(a.rows(), a.cols(), seed);
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) p(i, j) += scale * noise(i, j);
  return p;
}

DenseMatrix diag_dominant(Index n, unsigned seed) {
  DenseMatrix a = random_dense(n, n, seed);
  for (Index i = 0; i < n; ++i) a(i, i) += 4.0;
  return a;
}

// Eigenvalues of G⁻¹B for SPD G, B via the congruence L⁻¹BL⁻ᵀ with G = LLᵀ.
Vector generalized_eigenvalues(const DenseMatrix& b, const DenseMatrix& g) {
  const DenseMatrix linv = naive_inverse(dense_cholesky(g));
  DenseMatrix s = naive_product(linv, naive_product(b, naive_transpose(linv)));
  s = matkit::symmetric_part(s);
  Vector lam = jacobi_eigen(s).first;
  std::sort(lam.begin(), lam.end());
  return lam;
}

double max_rel_gap(const Vector& x, const Vector& y) {
  double scale = 0.0, gap = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    scale = std::max(scale, std::abs(y[i]));
    gap = std::max(gap, std::abs(x[i] - y[i]));
  }
  return gap / scale;
}

// ---- criteria ----

void criterion1(Outcome& o) { golden_check(o, "table1", "table1"); }
void criterion2(Outcome& o) { golden_check(o, "table2", "table2"); }
void criterion3(Outcome& o) { golden_check(o, "table3", "table3"); }

void criterion4(Outcome& o) {
  const auto smoke = xprmt::run_experiment(xprmt::lookup("table4-smoke"));
  xprmt::print_table(o.notes, smoke);
  for (std::size_t r = 0; r < smoke.rows.size(); ++r) {
    const auto& c = smoke.at(r, 0);
    o.check(!c.dash() && *c.iterations > 500, "64x64 nu=" + smoke.rows[r] + " needs more than 500 iterations");
  }
  golden_check(o, "table4", "table4");
}

void criterion5(Outcome& o) {
  golden_check(o, "table5", "table5");
  const auto t = xprmt::run_experiment(xprmt::lookup("table5"));
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    Index lo = 1 << 30, hi = 0;
    bool dash = false;
    for (const auto& c : t.cells[r]) {
      if (c.dash()) {
        dash = true;
        continue;
      }
      lo = std::min(lo, *c.iterations);
      hi = std::max(hi, *c.iterations);
    }
    o.check(!dash && hi - lo <= 2, "mesh independence at nu=" + t.rows[r]);
  }
}

void criterion6(Outcome& o) { golden_check(o, "table8", "table8"); }

void criterion7(Outcome& o) {
  for (unsigned seed = 1; seed <= 20; ++seed) {
    const Index n = 20 + static_cast<Index>(seed * 7 % 41);
    const DenseMatrix a = diag_dominant(n, seed);
    const DenseMatrix p = perturbed(a, seed + 1000, 0.3);
    const DenseMatrix t = random_spd(n, seed + 2000);
    const Vector b = random_vector(n, seed + 3000);

    const auto spec = krylov::t_singular_values(a, p, t);
    const DenseMatrix g = naive_product(naive_transpose(p), naive_product(t, p));
    const DenseMatrix bt = naive_product(naive_transpose(a), naive_product(t, a));

    Vector sig2(spec.sigma.size());
    for (std::size_t i = 0; i < sig2.size(); ++i) sig2[i] = spec.sigma[i] * spec.sigma[i];
    std::sort(sig2.begin(), sig2.end());
    const Vector lam = generalized_eigenvalues(bt, g);
    o.check(max_rel_gap(sig2, lam) < 1e-9, "sigma_T^2 vs generalized eigenvalues, seed " + std::to_string(seed));

    const Vector xstar = gauss_solve(a, b);
    const double e0 = krylov::energy_norm(bt, xstar);
    KrylovConfig cfg;
    cfg.tol_abs = 1e-9;
    Index step = 0;
    bool bound_ok = true;
    const auto rep = krylov::cgne(LinearOperator::from(a), LinearOperator::from(t), dense_inverse(g), b, cfg,
                                  [&](Index, ConstSpan x) {
                                    ++step;
                                    Vector e(x.begin(), x.end());
                                    for (std::size_t i = 0; i < e.size(); ++i) e[i] -= xstar[i];
                                    const double ratio = krylov::energy_norm(bt, e) / e0;
                                    if (ratio > krylov::cg_bound(spec, step) * (1.0 + 1e-8)) bound_ok = false;
                                  });
    o.check(rep.converged, "weighted CGNE converged, seed " + std::to_string(seed));
    o.check(bound_ok, "energy error below bound at every step, seed " + std::to_string(seed));
  }
}

void criterion8(Outcome& o) {
  // CGNE and LSQR histories: singular values spread evenly over [1, 1e3], then
  // shifted Gaussian matrices. Runs stop at 1e-10 relative so the rounding floor
  // is not compared.
  for (unsigned seed = 0; seed <= 4; ++seed) {
    const Index n = 100;
    DenseMatrix a;
    if (seed == 0) {
      const DenseMatrix u = matkit::qr(random_dense(n, n, 71)).q;
      const DenseMatrix v = matkit::qr(random_dense(n, n, 72)).q;
      DenseMatrix s(n, n);
      for (Index i = 0; i < n; ++i) s(i, i) = 1.0 + 999.0 * static_cast<double>(i) / static_cast<double>(n - 1);
      a = naive_product(u, naive_product(s, naive_transpose(v)));
    } else {
      a = random_dense(n, n, 80 + seed);
      for (Index i = 0; i < n; ++i) a(i, i) += 3.0;
    }
    const Vector ev = matkit::sym_eig(naive_product(naive_transpose(a), a));
    const double kappa = std::sqrt(ev.back() / ev.front());
    o.check(kappa < 1e4, "probe matrix condition number below 1e4, seed " + std::to_string(seed));
    const Vector b = random_vector(n, 73 + seed);
    KrylovConfig cfg;
    cfg.tol_abs = 1e-10 * norm2(b);
    cfg.max_iter = 50;
    const auto op = LinearOperator::from(a);
    const auto c = krylov::cgne(op, PreconditionerHandle::identity(n), b, cfg);
    const auto l = krylov::lsqr(op, LinearOperator::identity(n), b, cfg);
    const std::size_t steps = std::min(c.residual_history.size(), l.residual_history.size());
    bool ok = c.iterations == l.iterations;
    for (std::size_t k = 0; ok && k < steps; ++k) {
      ok = std::abs(c.residual_history[k] - l.residual_history[k]) <= 1e-6 * c.residual_history[k];
    }
    o.check(ok, "CGNE and LSQR residual histories agree over 50 steps, seed " + std::to_string(seed));
  }
  // Spectral equivalence on dense 20×20 probes.
  for (unsigned seed = 1; seed <= 10; ++seed) {
    const DenseMatrix a = diag_dominant(20, 100 + seed);
    const DenseMatrix p = perturbed(a, 200 + seed, 0.5);
    const DenseMatrix api = naive_product(a, naive_inverse(p));
    Vector right = matkit::sym_eig(matkit::symmetric_part(naive_product(naive_transpose(api), api)));
    const Vector left = generalized_eigenvalues(naive_product(naive_transpose(a), a),
                                                naive_product(naive_transpose(p), p));
    std::sort(right.begin(), right.end());
    o.check(max_rel_gap(right, left) < 1e-9, "G^-1 B vs (AP^-1)^T(AP^-1) spectra, seed " + std::to_string(seed));
  }
  // Weighted CGNE against plain CGNE on the explicitly weighted system C·A, T = CᵀC.
  for (auto variant : {fem2d::RieszVariant::L2, fem2d::RieszVariant::H1}) {
    const fem2d::StructuredMesh mesh(8);
    const double nu = 1e-2;
    fem2d::FemProblem2D prob;
    prob.nu = nu;
    const auto sys = fem2d::assemble_advdiff(mesh, prob);
    const auto rm = fem2d::riesz(mesh, variant, nu);
    const DenseMatrix tm = matkit::symmetric_part(naive_inverse(rm.inverse_matrix().to_dense()));
    const DenseMatrix c = naive_transpose(dense_cholesky(tm));
    const DenseMatrix ca = naive_product(c, sys.matrix.to_dense());
    const Vector cb = naive_matvec(c, sys.rhs);
    const auto g = precond::from_spd_matrix(fem2d::assemble_reaction_diffusion(mesh, nu, prob.beta));
    KrylovConfig cfg;
    cfg.tol_abs = 1e-300;
    cfg.max_iter = 12;
    std::vector<Vector> x1, x2;
    krylov::cgne(LinearOperator::from(sys.matrix), rm.as_operator(), g, sys.rhs, cfg,
                 [&](Index, ConstSpan x) { x1.emplace_back(x.begin(), x.end()); });
    krylov::cgne(LinearOperator::from(ca), g, cb, cfg, [&](Index, ConstSpan x) { x2.emplace_back(x.begin(), x.end()); });
    bool ok = x1.size() == x2.size() && !x1.empty();
    for (std::size_t k = 0; ok && k < x1.size(); ++k) ok = rel_diff(x1[k], x2[k]) < 1e-8;
    o.check(ok, std::string("weighted CGNE iterates match the CA system (") + fem2d::to_string(variant) + ")");
  }
  // PᵀP = RᵀR for the advection factor and random tridiagonals.
  for (unsigned seed = 0; seed <= 10; ++seed) {
    matkit::Tridiagonal p;
    if (seed == 0) {
      fd1d::Problem1D prob;
      prob.n = 200;
      p = fd1d::advection_prec(prob);
    } else {
      const Vector r = random_vector(3 * 150, seed);
      Vector sub(r.begin(), r.begin() + 149), diag(r.begin() + 150, r.begin() + 300), sup(r.begin() + 300, r.begin() + 449);
      for (double& d : diag) d += 3.0;
      p = matkit::Tridiagonal(sub, diag, sup);
    }
    const DenseMatrix pd = p.to_dense();
    const DenseMatrix rd = matkit::TridiagonalQr(p).r().to_dense();
    const DenseMatrix ptp = naive_product(naive_transpose(pd), pd);
    const DenseMatrix rtr = naive_product(naive_transpose(rd), rd);
    o.check(frob(naive_diff(ptp, rtr)) <= 1e-10 * frob(ptp), "P^T P = R^T R, seed " + std::to_string(seed));
  }
}

DenseMatrix gram_minus_identity(const DenseMatrix& q) {
  DenseMatrix d = naive_product(naive_transpose(q), q);
  for (Index i = 0; i < d.rows(); ++i) d(i, i) -= 1.0;
  return d;
}

bool upper_with_nonneg_diag(const DenseMatrix& r) {
  for (Index i = 0; i < r.rows(); ++i) {
    if (r(i, i) < 0.0) return false;
    for (Index j = 0; j < i; ++j)
      if (r(i, j) != 0.0) return false;
  }
  return true;
}

void criterion9(Outcome& o) {
  int qr_bad = 0, rq_bad = 0, polar_bad = 0;
  for (unsigned i = 0; i < 100; ++i) {
    const Index n = 2 + static_cast<Index>((i * 37) % 199);
    const DenseMatrix a = random_dense(n, n, 5000 + i);
    const double na = frob(a);

    const auto f = matkit::qr(a);
    if (!(frob(naive_diff(a, naive_product(f.q, f.r))) <= 1e-12 * na && frob(gram_minus_identity(f.q)) <= 1e-12 &&
          upper_with_nonneg_diag(f.r))) {
      ++qr_bad;
    }
    const auto g = matkit::rq(a);
    if (!(frob(naive_diff(a, naive_product(g.r, g.q))) <= 1e-12 * na && frob(gram_minus_identity(g.q)) <= 1e-12 &&
          upper_with_nonneg_diag(g.r))) {
      ++rq_bad;
    }
    const auto h = matkit::polar(a);
    const DenseMatrix l = dense_cholesky(matkit::symmetric_part(h.h));
    bool spd = true;
    for (Index k = 0; k < n; ++k) spd = spd && std::isfinite(l(k, k)) && l(k, k) > 0.0;
    if (!(frob(naive_diff(a, naive_product(h.q, h.h))) <= 1e-11 * na &&
          frob(naive_diff(h.h, naive_transpose(h.h))) <= 1e-12 * frob(h.h) && spd)) {
      ++polar_bad;
    }
  }
  o.check(qr_bad == 0, std::to_string(qr_bad) + " QR instances out of bounds");
  o.check(rq_bad == 0, std::to_string(rq_bad) + " RQ instances out of bounds");
  o.check(polar_bad == 0, std::to_string(polar_bad) + " polar instances out of bounds");
}

const std::vector<std::pair<std::string, std::function<void(Outcome&)>>>& criteria() {
  static const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> c = {
      {"cross-factor preconditioners, 1D centered", criterion1},
      {"advection-factor preconditioners, n=1e4 sweep (table2)", criterion2},
      {"advection-factor preconditioners, n=1e4 sweep (table3)", criterion3},
      {"L2 Riesz map with anisotropic preconditioner", criterion4},
      {"H1 Riesz map with reaction-diffusion preconditioner", criterion5},
      {"H1 Riesz map with GMG(SOR) preconditioner", criterion6},
      {"T-singular value bound on weighted CG", criterion7},
      {"equivalence and identity suite", criterion8},
      {"factorization property suite", criterion9},
  };
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance runner"};
  int only = 0;
  bool verbose = false;
  golden_dir = NORMALKIT_GOLDEN_DIR;
  app.add_option("--criterion", only, "Run a single criterion (1-9)")->check(CLI::Range(1, 9));
  app.add_option("--golden-dir", golden_dir, "Directory holding the golden tables");
  app.add_flag("--verbose,-v", verbose, "Print tables and failure details");
  CLI11_PARSE(app, argc, argv);

  bool all = true;
  for (std::size_t i = 0; i < criteria().size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (only != 0 && only != id) continue;
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria()[i].second(o);
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << "criterion " << id << ": " << (o.passed ? "PASS" : "FAIL") << "  " << criteria()[i].first << " ("
              << std::fixed << std::setprecision(1) << secs << " s)" << std::endl;
    if (verbose || !o.passed) std::cerr << o.notes.str();
    all = all && o.passed;
  }
  return all ? 0 : 1;
}
