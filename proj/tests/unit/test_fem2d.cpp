#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "normalkit/fem2d/assembly.hpp"
#include "normalkit/fem2d/mesh.hpp"
#include "normalkit/fem2d/riesz.hpp"
#include "normalkit/krylov/solvers.hpp"
#include "normalkit/matkit/banded.hpp"
#include "normalkit/precond/direct.hpp"
#include "normalkit/precond/handle.hpp"
#include "support.hpp"

using namespace normalkit;
using namespace normalkit::fem2d;
using normalkit::krylov::KrylovConfig;
using normalkit::krylov::LinearOperator;
using normalkit::matkit::CsrMatrix;
using normalkit::matkit::DenseMatrix;
using namespace testing_support;

namespace {

double quad(const CsrMatrix& a, const Vector& u) {
  const Vector au = a.apply(u);
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * au[i];
  return s;
}

void expect_dense_eq(const DenseMatrix& got, const std::vector<std::vector<double>>& want, double tol) {
  ASSERT_EQ(got.rows(), static_cast<Index>(want.size()));
  for (Index i = 0; i < got.rows(); ++i)
    for (Index j = 0; j < got.cols(); ++j)
      EXPECT_NEAR(got(i, j), want[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], tol) << i << "," << j;
}

FemProblem2D problem(double nu, Wind beta, double delta = 1e-4) {
  FemProblem2D p;
  p.nu = nu;
  p.beta = beta;
  p.delta_sd = delta;
  return p;
}

}  // namespace

TEST(Mesh, GeometryInvariants) {
  const StructuredMesh m(6);
  EXPECT_EQ(m.num_nodes(), 49);
  EXPECT_EQ(m.num_interior(), 25);
  EXPECT_EQ(m.num_triangles(), 72);
  for (Index t = 0; t < m.num_triangles(); ++t) {
    const auto v = m.triangle(t);
    const auto a = m.coords(v[0]), b = m.coords(v[1]), c = m.coords(v[2]);
    const double det = (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]);
    EXPECT_NEAR(0.5 * det, 0.5 * m.hx() * m.hx(), 1e-15);
  }
  for (Index k = 0; k < m.num_interior(); ++k) EXPECT_EQ(m.interior_index(m.interior_node(k)), k);
  EXPECT_EQ(m.interior_index(m.node(0, 3)), -1);
  EXPECT_EQ(m.interior_index(m.node(6, 3)), -1);
  EXPECT_THROW(StructuredMesh(0), ConfigError);
}

TEST(Mesh, SolutionCsv) {
  const StructuredMesh m(2);
  std::ostringstream out;
  write_solution_csv(out, m, Vector{0.75});
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "x,y,u");
  int rows = 0;
  bool saw_centre = false;
  while (std::getline(in, line)) {
    ++rows;
    if (line == "0.5,0.5,0.75") saw_centre = true;
  }
  EXPECT_EQ(rows, 9);
  EXPECT_TRUE(saw_centre);
  EXPECT_THROW(write_solution_csv(out, m, Vector{1.0, 2.0}), DimensionError);
}

TEST(ElementMatrices, UnitSquareByHand) {
  // Nodes 0=(0,0), 1=(1,0), 2=(0,1), 3=(1,1); triangles (0,1,3) and (0,3,2).
  const StructuredMesh m(1);
  expect_dense_eq(assemble_stiffness(m, Dofs::All).to_dense(),
                  {{1, -0.5, -0.5, 0}, {-0.5, 1, 0, -0.5}, {-0.5, 0, 1, -0.5}, {0, -0.5, -0.5, 1}}, 1e-15);
  const double a = 1.0 / 12, b = 1.0 / 24;
  expect_dense_eq(assemble_mass(m, Dofs::All).to_dense(),
                  {{2 * a, b, b, 2 * b}, {b, a, 0, b}, {b, 0, a, b}, {2 * b, b, b, 2 * a}}, 1e-15);
  expect_dense_eq(assemble_anisotropic(m, {1.0, 0.0}, Dofs::All).to_dense(),
                  {{0.5, -0.5, 0, 0}, {-0.5, 0.5, 0, 0}, {0, 0, 0.5, -0.5}, {0, 0, -0.5, 0.5}}, 1e-15);
  const double s = 1.0 / 6;
  expect_dense_eq(assemble_advection(m, {1.0, 0.0}, Dofs::All).to_dense(),
                  {{-s, s, -s, s}, {-s, s, 0, 0}, {0, 0, -s, s}, {-s, s, -s, s}}, 1e-15);
}

TEST(ElementMatrices, TwoByTwoInteriorNode) {
  const StructuredMesh m(2);
  EXPECT_NEAR(assemble_stiffness(m).at(0, 0), 4.0, 1e-14);
  EXPECT_NEAR(assemble_mass(m).at(0, 0), 0.125, 1e-15);
}

TEST(Mass, PartitionOfUnity) {
  const StructuredMesh m(8);
  const CsrMatrix full = assemble_mass(m, Dofs::All);
  double total = 0.0;
  for (double v : full.values()) total += v;
  EXPECT_NEAR(total, 1.0, 1e-13);
  // Interior variant: Σ M_ij = ∫ (Σ_i φ_i)² over the interior support.
  const CsrMatrix inner = assemble_mass(m);
  double s = 0.0;
  for (double v : inner.values()) s += v;
  EXPECT_GT(s, 0.0);
  EXPECT_LT(s, 1.0);
  EXPECT_TRUE(inner.is_symmetric());
}

TEST(Stiffness, AnnihilatesConstants) {
  const StructuredMesh m(9);
  const CsrMatrix k = assemble_stiffness(m, Dofs::All);
  const Vector ones(static_cast<std::size_t>(k.rows()), 1.0);
  for (double v : k.apply(ones)) EXPECT_NEAR(v, 0.0, 1e-13);
  EXPECT_TRUE(precond::spd_probe(precond::from_spd_matrix(assemble_stiffness(m))).passed());
}

TEST(Anisotropic, ZeroWindAndQuadraticForm) {
  const StructuredMesh m(7);
  const CsrMatrix z = assemble_anisotropic(m, {0.0, 0.0});
  for (double v : z.values()) EXPECT_EQ(v, 0.0);
  const Wind beta{0.6, -0.8};
  const CsrMatrix s = assemble_anisotropic(m, beta);
  const Vector u = random_vector(m.num_interior(), 3);
  // ‖β·∇u_h‖² element by element.
  double direct = 0.0;
  for (Index t = 0; t < m.num_triangles(); ++t) {
    const auto v = m.triangle(t);
    std::array<double, 3> val{};
    std::array<std::array<double, 2>, 3> xy{};
    for (int a = 0; a < 3; ++a) {
      const Index k = m.interior_index(v[a]);
      val[a] = k >= 0 ? u[static_cast<std::size_t>(k)] : 0.0;
      xy[a] = m.coords(v[a]);
    }
    const double x1 = xy[1][0] - xy[0][0], y1 = xy[1][1] - xy[0][1];
    const double x2 = xy[2][0] - xy[0][0], y2 = xy[2][1] - xy[0][1];
    const double det = x1 * y2 - x2 * y1;
    const double du1 = val[1] - val[0], du2 = val[2] - val[0];
    const double gx = (du1 * y2 - du2 * y1) / det;
    const double gy = (x1 * du2 - x2 * du1) / det;
    const double bg = beta[0] * gx + beta[1] * gy;
    direct += 0.5 * det * bg * bg;
  }
  EXPECT_NEAR(quad(s, u), direct, 1e-12 * direct);
  EXPECT_GE(quad(s, u), 0.0);
}

TEST(AdvDiff, PureDiffusionIsSymmetricStiffness) {
  const StructuredMesh m(8);
  const auto sys = assemble_advdiff(m, problem(0.7, {0.0, 0.0}, 0.0));
  const DenseMatrix a = sys.matrix.to_dense();
  EXPECT_LT(frob(naive_diff(a, naive_transpose(a))), 1e-14);
  const DenseMatrix k = matkit::scaled(assemble_stiffness(m), 0.7).to_dense();
  EXPECT_LT(frob(naive_diff(a, k)), 1e-14);
}

TEST(AdvDiff, LargeDiffusionApproachesPoisson) {
  const StructuredMesh m(16);
  const double nu = 1e3;
  const auto sys = assemble_advdiff(m, problem(nu, {1.0, 0.0}));
  const Vector u = matkit::lu_solve(matkit::banded_lu(sys.matrix), sys.rhs);
  // Poisson oracle: νK u = (f, v) with the same load vector minus the SD part.
  const CsrMatrix k = matkit::scaled(assemble_stiffness(m), nu);
  Vector load(static_cast<std::size_t>(m.num_interior()), m.hx() * m.hx());
  const Vector up = gauss_solve(k.to_dense(), load);
  const CsrMatrix mass = assemble_mass(m);
  Vector d(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) d[i] = u[i] - up[i];
  EXPECT_LT(std::sqrt(quad(mass, d) / quad(mass, up)), 1e-3);
}

TEST(AdvDiff, PatchTestReproducesLinears) {
  const StructuredMesh m(6);
  FemProblem2D p = problem(0.05, {0.6, 0.8}, 1e-2);
  auto exact = [](double x, double y) { return 1.5 - 2.0 * x + 0.5 * y; };
  p.g = exact;
  p.f = [&](double, double) { return p.beta[0] * -2.0 + p.beta[1] * 0.5; };
  const auto sys = assemble_advdiff(m, p);
  const Vector u = matkit::lu_solve(matkit::banded_lu(sys.matrix), sys.rhs);
  for (Index k = 0; k < m.num_interior(); ++k) {
    const auto [x, y] = m.coords(m.interior_node(k));
    EXPECT_NEAR(u[static_cast<std::size_t>(k)], exact(x, y), 1e-12);
  }
}

TEST(AdvDiff, AdjointIsReversedWind) {
  const StructuredMesh m(10);
  const Wind beta = wind_from_name("diag");
  const CsrMatrix a = assemble_advdiff(m, problem(1e-2, beta, 0.0)).matrix;
  const CsrMatrix am = assemble_advdiff(m, problem(1e-2, {-beta[0], -beta[1]}, 0.0)).matrix;
  const CsrMatrix diff = matkit::add(a.transpose(), 1.0, am, -1.0);
  EXPECT_LE(diff.frobenius_norm(), 1e-12 * a.frobenius_norm());
}

TEST(AdvDiff, RejectsBadProblems) {
  const StructuredMesh m(4);
  EXPECT_THROW(assemble_advdiff(m, problem(0.0, {1.0, 0.0})), ConfigError);
  EXPECT_THROW(assemble_advdiff(m, problem(1.0, {1.0, 1.0})), ConfigError);
  EXPECT_THROW(assemble_advdiff(StructuredMesh(1), problem(1.0, {1.0, 0.0})), ConfigError);
  EXPECT_THROW(wind_from_name("north"), ConfigError);
}

TEST(ReactionDiffusion, Cases) {
  const StructuredMesh m(8);
  const double nu = 5e-3;
  const CsrMatrix k = assemble_stiffness(m);
  const CsrMatrix r0 = assemble_reaction_diffusion(m, nu, {0.0, 0.0});
  EXPECT_LT(matkit::add(r0, 1.0, k, -nu).frobenius_norm(), 1e-15);
  const CsrMatrix r1 = assemble_reaction_diffusion(m, nu, wind_from_name("diag"));
  const CsrMatrix expect = matkit::add(k, nu, assemble_mass(m), 1.0 / nu);
  EXPECT_LT(matkit::add(r1, 1.0, expect, -1.0).frobenius_norm(), 1e-12 * expect.frobenius_norm());
  EXPECT_TRUE(precond::spd_probe(precond::from_spd_matrix(r1)).passed());
}

TEST(ReactionDiffusion, DirectInverseResidual) {
  const StructuredMesh m(32);
  const CsrMatrix g = assemble_reaction_diffusion(m, 5e-3, {1.0, 0.0});
  const auto h = precond::from_spd_matrix(g);
  const Vector r = random_vector(g.rows(), 5);
  const Vector back = g.apply(h.apply_inverse(r));
  EXPECT_LT(rel_diff(back, r), 1e-9);
}

TEST(ProjectedOperator, SymmetricAndDominated) {
  const StructuredMesh m(8);
  const double nu = 5e-3;
  const Wind beta = wind_from_name("diag");
  const auto op = projected_rd_operator(m, nu, beta);
  EXPECT_LT(krylov::adjoint_defect(op), 1e-9);
  const DenseMatrix d = op.to_dense();
  EXPECT_LT(frob(naive_diff(d, naive_transpose(d))), 1e-9 * frob(d));
  const CsrMatrix unprojected = assemble_reaction_diffusion(m, nu, beta);
  for (unsigned s = 0; s < 10; ++s) {
    const Vector u = random_vector(m.num_interior(), 100 + s);
    const Vector ou = op.apply(u);
    double q = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) q += u[i] * ou[i];
    EXPECT_LE(q, quad(unprojected, u) * (1.0 + 1e-12));
  }
}

TEST(ProjectedOperator, NoWindIsStiffness) {
  const StructuredMesh m(6);
  const auto op = projected_rd_operator(m, 1.0, {0.0, 0.0});
  const Vector u = random_vector(m.num_interior(), 7);
  EXPECT_LT(rel_diff(op.apply(u), assemble_stiffness(m).apply(u)), 1e-15);
}

TEST(ProjectedOperator, FactoredInverseMatchesOperator) {
  const StructuredMesh m(16);
  const double nu = 2.5e-3;
  const Wind beta = wind_from_name("x");
  const auto op = projected_rd_operator(m, nu, beta);
  const auto g = projected_rd_prec(m, nu, beta);
  const Vector r = random_vector(m.num_interior(), 9);
  EXPECT_LT(rel_diff(op.apply(g.apply_inverse(r)), r), 1e-9);
  EXPECT_TRUE(precond::spd_probe(g).passed());
  // The inner-CG route agrees with the factored one.
  const auto ic = precond::from_spd_operator(op, 1e-12, 5000);
  EXPECT_LT(rel_diff(ic.apply_inverse(r), g.apply_inverse(r)), 1e-8);
}

TEST(Riesz, Variants) {
  const StructuredMesh m(16);
  const Vector r = random_vector(m.num_interior(), 11);
  const auto id = riesz(m, RieszVariant::Identity, 1.0);
  EXPECT_EQ(id.apply(r), r);
  const auto l2 = riesz(m, RieszVariant::L2, 1.0);
  EXPECT_LT(rel_diff(assemble_mass(m).apply(l2.apply(r)), r), 1e-10);
  EXPECT_LT(rel_diff(l2.apply(l2.apply_inverse(r)), r), 1e-10);
  const double nu = 5e-3;
  const auto h1 = riesz(m, RieszVariant::H1, nu);
  const Vector kt = assemble_stiffness(m).apply(h1.apply(r));
  for (std::size_t i = 0; i < r.size(); ++i) EXPECT_NEAR(kt[i] * nu, r[i], 1e-10 * norm2(r));
  EXPECT_EQ(riesz_from_name("h1"), RieszVariant::H1);
  EXPECT_THROW(riesz_from_name("h2"), ConfigError);
}

TEST(Riesz, WeightedNormalOperatorIsSpd) {
  const StructuredMesh m(8);
  const auto a = LinearOperator::from(assemble_advdiff(m, problem(5e-3, {1.0, 0.0})).matrix);
  const auto t = riesz(m, RieszVariant::H1, 5e-3).as_operator();
  const auto bt = krylov::gram(a, t);
  EXPECT_LT(krylov::adjoint_defect(bt), 1e-9);
  const DenseMatrix d = bt.to_dense();
  const DenseMatrix sym = symmetric_part(d);
  EXPECT_EQ(count_below(sym, 0.0), 0);
}

TEST(Riesz, H1CgneWithProjectedPreconditioner) {
  const StructuredMesh m(32);
  const double nu = 5e-3;
  const Wind beta{1.0, 0.0};
  const auto sys = assemble_advdiff(m, problem(nu, beta));
  KrylovConfig cfg;
  const auto r = krylov::cgne(LinearOperator::from(sys.matrix), riesz(m, RieszVariant::H1, nu).as_operator(),
                              projected_rd_prec(m, nu, beta), sys.rhs, cfg);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.iterations, 5);
  EXPECT_GE(r.iterations, 1);
}

TEST(Riesz, TNormHistoryNonincreasing) {
  const StructuredMesh m(16);
  const double nu = 1e-2;
  const auto sys = assemble_advdiff(m, problem(nu, wind_from_name("diag")));
  for (auto v : {RieszVariant::L2, RieszVariant::H1}) {
    KrylovConfig cfg;
    cfg.max_iter = 300;
    const auto r = krylov::cgne(LinearOperator::from(sys.matrix), riesz(m, v, nu).as_operator(),
                                precond::PreconditionerHandle::identity(m.num_interior()), sys.rhs, cfg);
    for (std::size_t k = 1; k < r.t_norm_history.size(); ++k)
      EXPECT_LE(r.t_norm_history[k], r.t_norm_history[k - 1] * (1.0 + 1e-10)) << to_string(v) << " step " << k;
  }
}

TEST(Riesz, CholeskySplitConsistency) {
  // cgne with T = CᵀC equals plain cgne on C·A x = C·b, iterate by iterate.
  const StructuredMesh m(8);
  const double nu = 1e-2;
  const auto sys = assemble_advdiff(m, problem(nu, {1.0, 0.0}));
  const DenseMatrix mass = assemble_mass(m).to_dense();
  const DenseMatrix t = naive_inverse(mass);
  const DenseMatrix c = naive_transpose(dense_cholesky(symmetric_part(t)));  // T = CᵀC
  const DenseMatrix a = sys.matrix.to_dense();
  const DenseMatrix ca = naive_product(c, a);
  const Vector cb = naive_matvec(c, sys.rhs);
  const auto g = precond::from_spd_matrix(assemble_anisotropic(m, {1.0, 0.0}));
  KrylovConfig cfg;
  cfg.tol_abs = 1e-300;
  cfg.max_iter = 15;
  std::vector<Vector> xs1, xs2;
  krylov::cgne(LinearOperator::from(sys.matrix), riesz(m, RieszVariant::L2, nu).as_operator(), g, sys.rhs, cfg,
               [&](Index, ConstSpan x) { xs1.emplace_back(x.begin(), x.end()); });
  krylov::cgne(LinearOperator::from(ca), g, cb, cfg, [&](Index, ConstSpan x) { xs2.emplace_back(x.begin(), x.end()); });
  ASSERT_EQ(xs1.size(), xs2.size());
  for (std::size_t k = 0; k < xs1.size(); ++k) EXPECT_LT(rel_diff(xs1[k], xs2[k]), 1e-8) << "step " << k;
}
