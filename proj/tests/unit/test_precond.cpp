#include <gtest/gtest.h>

#include <cmath>

#include "normalkit/krylov/solvers.hpp"
#include "normalkit/matkit/qr.hpp"
#include "normalkit/precond/config.hpp"
#include "normalkit/precond/direct.hpp"
#include "normalkit/precond/factor.hpp"
#include "normalkit/precond/gmg.hpp"
#include "support.hpp"

using namespace normalkit;
using namespace normalkit::precond;
using normalkit::krylov::KrylovConfig;
using normalkit::krylov::LinearOperator;
using normalkit::matkit::CsrMatrix;
using normalkit::matkit::DenseMatrix;
using normalkit::matkit::Tridiagonal;
using namespace testing_support;

namespace {

// Five-point Laplacian on the interior nodes of an m×m cell grid, x-fastest.
// On the split triangulation this is exactly the P1 stiffness matrix.
CsrMatrix five_point(Index m) {
  const Index k = m - 1;
  std::vector<matkit::Triplet> t;
  for (Index j = 0; j < k; ++j)
    for (Index i = 0; i < k; ++i) {
      const Index r = j * k + i;
      t.push_back({r, r, 4.0});
      if (i > 0) t.push_back({r, r - 1, -1.0});
      if (i + 1 < k) t.push_back({r, r + 1, -1.0});
      if (j > 0) t.push_back({r, r - k, -1.0});
      if (j + 1 < k) t.push_back({r, r + k, -1.0});
    }
  return CsrMatrix::from_triplets(k * k, k * k, t);
}

Tridiagonal centered(Index n) {
  const double h = 1.0 / static_cast<double>(n + 1);
  return Tridiagonal::constant(n, -1.0 / (h * h) - 1.0 / (2 * h), 2.0 / (h * h), -1.0 / (h * h) + 1.0 / (2 * h));
}

double energy(const CsrMatrix& a, const Vector& e) {
  const Vector ae = a.apply(e);
  double s = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) s += e[i] * ae[i];
  return std::sqrt(s);
}

}  // namespace

TEST(SpdProbe, DetectsAsymmetryAndIndefiniteness) {
  EXPECT_TRUE(spd_probe(PreconditionerHandle::identity(10)).passed());
  const auto a = std::make_shared<DenseMatrix>(random_dense(8, 8, 1));
  const PreconditionerHandle bad(8, [a](ConstSpan r, MutSpan z) { a->apply(r, z); },
                                 SymmetryCertificate::ExactlySymmetric, "random");
  EXPECT_FALSE(spd_probe(bad).passed());
  const PreconditionerHandle neg(
      3, [](ConstSpan r, MutSpan z) { for (std::size_t i = 0; i < 3; ++i) z[i] = -r[i]; },
      SymmetryCertificate::ExactlySymmetric, "minus identity");
  const auto res = spd_probe(neg);
  EXPECT_LT(res.symmetry_defect, 1e-15);
  EXPECT_LT(res.min_rayleigh, 0.0);
  EXPECT_FALSE(res.passed());
}

TEST(FromFactor, IdentityFactor) {
  const auto h = from_factor(factor_solves(Tridiagonal::constant(6, 0.0, 1.0, 0.0)));
  const Vector r = random_vector(6, 2);
  EXPECT_LT(rel_diff(h.apply_inverse(r), r), 1e-16);
  EXPECT_EQ(h.certificate(), SymmetryCertificate::ExactlySymmetric);
}

TEST(FromFactor, QrFactorGivesOneCgneIteration) {
  const auto a = centered(10);
  const auto f = matkit::qr(a.to_dense());
  Vector b(10, 0.0);
  b.back() = -a.super().back();
  KrylovConfig cfg;
  cfg.tol_abs = 1e-10;
  const auto rep = krylov::cgne(LinearOperator::from(a), from_factor(upper_triangular_solves(f.r)), b, cfg);
  EXPECT_TRUE(rep.converged);
  EXPECT_EQ(rep.iterations, 1);
}

TEST(FromFactor, AdvectionFactorRoundTrip) {
  const Index n = 100;
  const double h = 1.0 / static_cast<double>(n + 1);
  const auto p = Tridiagonal::constant(n, -1.0 / h, 1.0 / h, 0.0);
  const auto g = from_factor(factor_solves(p));
  const Vector r = random_vector(n, 3);
  // G·(G⁻¹r) with G = PᵀP.
  const Vector back = p.apply_transpose(p.apply(g.apply_inverse(r)));
  EXPECT_LT(rel_diff(back, r), 1e-10);
  EXPECT_TRUE(spd_probe(g).passed());
}

TEST(FromFactor, WeightedRoundTrip) {
  const Index n = 20;
  DenseMatrix p = random_dense(n, n, 4);
  for (Index i = 0; i < n; ++i) p(i, i) += 4.0;
  const DenseMatrix m = random_dense(n, n, 5);
  DenseMatrix t = naive_product(naive_transpose(m), m);
  for (Index i = 0; i < n; ++i) t(i, i) += 1.0;
  const auto tinv = std::make_shared<DenseMatrix>(naive_inverse(t));
  const auto g = from_factor(factor_solves(p), [tinv](ConstSpan r, MutSpan z) { tinv->apply(r, z); });
  const DenseMatrix gm = naive_product(naive_transpose(p), naive_product(t, p));
  const Vector r = random_vector(n, 6);
  EXPECT_LT(rel_diff(naive_matvec(gm, g.apply_inverse(r)), r), 1e-10);
  EXPECT_LT(spd_probe(g).symmetry_defect, 1e-9);
}

TEST(FromFactor, InverseOperatorIsAdjointConsistent) {
  const auto op = inverse_operator(factor_solves(centered(30)));
  EXPECT_LT(krylov::adjoint_defect(op), 1e-12);
  const auto r2 = matkit::TridiagonalQr(centered(30)).r();
  EXPECT_LT(krylov::adjoint_defect(inverse_operator(factor_solves(r2))), 1e-12);
}

TEST(FromSpdMatrix, SimpleCases) {
  const Vector r = random_vector(5, 7);
  EXPECT_LT(rel_diff(from_spd_matrix(CsrMatrix::identity(5)).apply_inverse(r), r), 1e-16);
  const auto h = from_spd_matrix(CsrMatrix::diagonal(Vector(5, 2.0)));
  const Vector z = h.apply_inverse(r);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_DOUBLE_EQ(z[i], r[i] / 2.0);
}

TEST(FromSpdMatrix, ResidualCheckBothMethods) {
  const CsrMatrix g = matkit::add(five_point(16), 1.0, CsrMatrix::identity(225), 0.3);
  const Vector r = random_vector(225, 8);
  for (auto m : {DirectMethod::Cholesky, DirectMethod::BandedLU}) {
    const auto h = from_spd_matrix(g, m);
    const Vector res = g.apply(h.apply_inverse(r));
    EXPECT_LT(rel_diff(res, r), 1e-9);
    EXPECT_TRUE(spd_probe(h).passed());
  }
}

TEST(FromSpdMatrix, IndefiniteMatrixRejected) {
  const CsrMatrix g = CsrMatrix::diagonal(Vector{1.0, -2.0, 3.0});
  try {
    from_spd_matrix(g);
    FAIL() << "expected FactorizationError";
  } catch (const FactorizationError& e) {
    EXPECT_EQ(e.index(), 1);
  }
}

TEST(FromSpdOperator, DiagonalAndIdentity) {
  const auto h = from_spd_operator(LinearOperator::identity(7));
  const Vector r = random_vector(7, 9);
  EXPECT_LT(rel_diff(h.apply_inverse(r), r), 1e-14);
  Vector d(10);
  for (std::size_t i = 0; i < 10; ++i) d[i] = static_cast<double>(i + 1);
  const auto hd = from_spd_operator(LinearOperator::diagonal(d));
  const Vector r10 = random_vector(10, 10);
  const Vector z = hd.apply_inverse(r10);
  for (std::size_t i = 0; i < 10; ++i) EXPECT_NEAR(z[i], r10[i] / d[i], 1e-9);
  EXPECT_EQ(hd.certificate(), SymmetryCertificate::SymmetricByConstruction);
}

TEST(FromSpdOperator, RoundTripOnPoisson) {
  const CsrMatrix k = five_point(16);
  const auto h = from_spd_operator(LinearOperator::from(k), 1e-10);
  const Vector r = random_vector(k.rows(), 11);
  EXPECT_LT(rel_diff(k.apply(h.apply_inverse(r)), r), 1e-9);
  EXPECT_TRUE(spd_probe(h, 8).passed());
}

TEST(FromSpdOperator, InnerNonConvergenceReported) {
  const auto h = from_spd_operator(LinearOperator::from(five_point(32)), 1e-12, 3);
  try {
    h.apply_inverse(random_vector(31 * 31, 12));
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_GT(e.achieved(), 1e-12);
  }
}

TEST(Gmg, OneLevelIsCholesky) {
  const CsrMatrix k = five_point(8);
  const auto v = gmg_vcycle_prec(gmg_build(k, {8, 8}, 1));
  const Vector r = random_vector(k.rows(), 13);
  EXPECT_LT(rel_diff(k.apply(v.apply_inverse(r)), r), 1e-12);
}

TEST(Gmg, GalerkinCoarseOperators) {
  const CsrMatrix k = five_point(32);
  const auto h = gmg_build(k, {32, 32}, 4);
  ASSERT_EQ(h.levels.size(), 4u);
  for (std::size_t l = 0; l + 1 < h.levels.size(); ++l) {
    const auto& p = h.levels[l].prolongation;
    EXPECT_EQ(p.rows(), h.levels[l].op.rows());
    EXPECT_EQ(p.cols(), h.levels[l + 1].op.rows());
    const DenseMatrix pd = p.to_dense();
    const DenseMatrix oracle = naive_product(naive_transpose(pd), naive_product(h.levels[l].op.to_dense(), pd));
    EXPECT_LT(frob(naive_diff(oracle, h.levels[l + 1].op.to_dense())), 1e-12 * frob(oracle));
  }
  // The nested P1 Galerkin operator of the Laplacian is the coarse Laplacian.
  const DenseMatrix coarse = five_point(16).to_dense();
  EXPECT_LT(frob(naive_diff(h.levels[1].op.to_dense(), coarse)), 1e-12);
}

TEST(Gmg, ProlongationInterpolatesLinearsInside) {
  const GridDescriptor c{4, 4};
  const CsrMatrix p = p1_prolongation(c);
  // A coarse function that is linear on the interior patch around the centre.
  Vector uc(9);
  for (Index j = 1; j < 4; ++j)
    for (Index i = 1; i < 4; ++i) uc[static_cast<std::size_t>((j - 1) * 3 + i - 1)] = 2.0 * i - 3.0 * j + 1.0;
  const Vector uf = p.apply(uc);
  // Fine nodes strictly inside the coarse interior hull (coarse coords 1..3).
  for (Index jf = 2; jf <= 6; ++jf)
    for (Index if_ = 2; if_ <= 6; ++if_) {
      const double expect = 2.0 * (if_ / 2.0) - 3.0 * (jf / 2.0) + 1.0;
      EXPECT_NEAR(uf[static_cast<std::size_t>((jf - 1) * 7 + if_ - 1)], expect, 1e-14) << if_ << "," << jf;
    }
}

TEST(Gmg, PoissonContraction) {
  const CsrMatrix k = five_point(32);
  const auto v = gmg_vcycle_prec(gmg_build(k, {32, 32}, 4));
  Vector e = random_vector(k.rows(), 14);
  const double e0 = energy(k, e);
  for (int c = 0; c < 10; ++c) {
    const Vector corr = v.apply_inverse(k.apply(e));
    for (std::size_t i = 0; i < e.size(); ++i) e[i] -= corr[i];
  }
  const double rate = std::pow(energy(k, e) / e0, 0.1);
  EXPECT_LT(rate, 0.25);
}

TEST(Gmg, CoarseRepresentableRhs) {
  const CsrMatrix k = five_point(32);
  // r = K·P·uc: the exact solution P·uc lives in the coarse space, so the
  // Galerkin correction recovers it exactly when no pre-smoothing moves the
  // error out of that space first.
  const auto h = gmg_build(k, {32, 32}, 2, 1.0, 0, 2);
  const Vector uc = random_vector(15 * 15, 15);
  const Vector r = k.apply(h.levels[0].prolongation.apply(uc));
  const Vector x = vcycle(h, r);
  Vector res = k.apply(x);
  for (std::size_t i = 0; i < res.size(); ++i) res[i] -= r[i];
  EXPECT_GT(norm2(r) / norm2(res), 1e3);
}

TEST(Gmg, VcycleIsSymmetric) {
  for (double omega : {1.0, 1.3}) {
    const auto v = gmg_vcycle_prec(gmg_build(five_point(32), {32, 32}, 4, omega, 2, 2));
    const auto res = spd_probe(v);
    EXPECT_LT(res.symmetry_defect, 1e-10);
    EXPECT_GT(res.min_rayleigh, 0.0);
  }
}

TEST(Gmg, IndivisibleGridRejected) {
  EXPECT_THROW(gmg_build(five_point(12), {12, 12}, 4), ConfigError);
  EXPECT_THROW(gmg_build(five_point(8), {8, 8}, 4), ConfigError);
  EXPECT_THROW(gmg_build(five_point(8), {8, 8}, 0), ConfigError);
  EXPECT_THROW(gmg_build(five_point(8), {8, 8}, 2, 2.5), ConfigError);
}

TEST(MatrixSquaring, ClusteredEigenvaluesDoNotSufficeForCgne) {
  // A·P⁻¹ = J = [[1, 10], [0, 1]] has the single eigenvalue 1 and b = e₁ is an
  // eigenvector, so GMRES finishes in one step; CGNE sees the singular values
  // of J, which are far apart.
  DenseMatrix p(2, 2);
  p(0, 0) = 2.0;
  p(0, 1) = 1.0;
  p(1, 0) = 0.5;
  p(1, 1) = 3.0;
  DenseMatrix j(2, 2);
  j(0, 0) = 1.0;
  j(0, 1) = 10.0;
  j(1, 1) = 1.0;
  const DenseMatrix a = naive_product(j, p);
  const Vector b{1.0, 0.0};
  KrylovConfig cfg;
  cfg.tol_abs = 1e-12;
  const auto f = factor_solves(p);
  const auto g = krylov::gmres(LinearOperator::from(a), inverse_operator(f), b, cfg);
  const auto c = krylov::cgne(LinearOperator::from(a), from_factor(f), b, cfg);
  EXPECT_TRUE(g.converged);
  EXPECT_TRUE(c.converged);
  EXPECT_GE(c.iterations, 2 * g.iterations);
}

TEST(PrecondConfig, ParsesAllForms) {
  EXPECT_EQ(parse_precond("qr-r").kind, "qr-r");
  EXPECT_EQ(parse_precond("polar-right").kind, "polar-right");
  const auto f = parse_precond("factor:trid");
  EXPECT_EQ(f.kind, "factor");
  EXPECT_EQ(f.variant, "trid");
  EXPECT_EQ(parse_precond("direct:cholesky").variant, "cholesky");
  const auto ic = parse_precond("inner-cg:tol=1e-10");
  EXPECT_DOUBLE_EQ(ic.number("tol", 0.0), 1e-10);
  EXPECT_EQ(ic.integer("max", 1000), 1000);
  const auto g = parse_precond("gmg:levels=4,omega=1.0,smooth=2");
  EXPECT_EQ(g.integer("levels", 0), 4);
  EXPECT_DOUBLE_EQ(g.number("omega", 0.0), 1.0);
  EXPECT_EQ(g.integer("smooth", 0), 2);
  EXPECT_EQ(parse_precond(g.to_string()).options, g.options);
}

TEST(PrecondConfig, RejectsMalformed) {
  for (const char* s : {"ilu", "factor", "factor:dense", "qr-r:x=1", "gmg:levels", "gmg:levels=four",
                        "gmg:depth=3", "inner-cg:tol=abc", "direct:", "gmg:levels=2.5"}) {
    EXPECT_THROW(parse_precond(s), ConfigError) << s;
  }
}
