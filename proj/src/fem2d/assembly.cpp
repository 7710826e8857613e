#include "normalkit/fem2d/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "normalkit/matkit/banded.hpp"
#include "normalkit/precond/factor.hpp"

namespace normalkit::fem2d {

namespace {

using matkit::CsrMatrix;
using matkit::Triplet;
using Local = std::array<std::array<double, 3>, 3>;

struct Element {
  std::array<Index, 3> v;
  std::array<std::array<double, 2>, 3> xy;
  double area;
  std::array<std::array<double, 2>, 3> grad;
};

Element element(const StructuredMesh& mesh, Index t) {
  Element e;
  e.v = mesh.triangle(t);
  for (int a = 0; a < 3; ++a) e.xy[a] = mesh.coords(e.v[a]);
  const auto& p = e.xy;
  const double det = (p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]);
  if (!(det > 0.0)) throw Error("degenerate or clockwise triangle");
  e.area = 0.5 * det;
  for (int a = 0; a < 3; ++a) {
    const auto& pb = p[(a + 1) % 3];
    const auto& pc = p[(a + 2) % 3];
    e.grad[a] = {(pb[1] - pc[1]) / det, (pc[0] - pb[0]) / det};
  }
  return e;
}

double dot2(const std::array<double, 2>& a, const std::array<double, 2>& b) {
  return a[0] * b[0] + a[1] * b[1];
}

Local mass_local(const Element& e) {
  Local m{};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) m[a][b] = e.area / 12.0 * (a == b ? 2.0 : 1.0);
  return m;
}

Local stiffness_local(const Element& e) {
  Local k{};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) k[a][b] = e.area * dot2(e.grad[a], e.grad[b]);
  return k;
}

Local advection_local(const Element& e, const Wind& beta) {
  Local c{};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) c[a][b] = dot2(beta, e.grad[b]) * e.area / 3.0;
  return c;
}

Local anisotropic_local(const Element& e, const Wind& beta) {
  Local s{};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) s[a][b] = e.area * dot2(beta, e.grad[a]) * dot2(beta, e.grad[b]);
  return s;
}

template <class LocalFn>
CsrMatrix assemble(const StructuredMesh& mesh, Dofs dofs, LocalFn local) {
  const Index n = dofs == Dofs::All ? mesh.num_nodes() : mesh.num_interior();
  if (n < 1) throw ConfigError("assembly: the mesh has no interior vertices");
  auto dof = [&](Index v) { return dofs == Dofs::All ? v : mesh.interior_index(v); };
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(9 * mesh.num_triangles()));
  for (Index k = 0; k < mesh.num_triangles(); ++k) {
    const Element e = element(mesh, k);
    const Local l = local(e);
    for (int a = 0; a < 3; ++a) {
      const Index ra = dof(e.v[a]);
      if (ra < 0) continue;
      for (int b = 0; b < 3; ++b) {
        const Index cb = dof(e.v[b]);
        if (cb >= 0) t.push_back({ra, cb, l[a][b]});
      }
    }
  }
  return CsrMatrix::from_triplets(n, n, t);
}

}  // namespace

Wind wind_from_name(const std::string& name) {
  if (name == "x") return {1.0, 0.0};
  if (name == "diag") return {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
  throw ConfigError("unknown wind '" + name + "' (expected x or diag)");
}

void FemProblem2D::validate() const {
  if (!(nu > 0.0)) throw ConfigError("FemProblem2D: nu must be positive");
  if (std::hypot(beta[0], beta[1]) > 1.0 + 1e-12) throw ConfigError("FemProblem2D: |beta| must be at most 1");
  if (delta_sd < 0.0) throw ConfigError("FemProblem2D: delta_sd must be nonnegative");
}

CsrMatrix assemble_mass(const StructuredMesh& mesh, Dofs dofs) {
  return assemble(mesh, dofs, mass_local);
}

CsrMatrix assemble_stiffness(const StructuredMesh& mesh, Dofs dofs) {
  return assemble(mesh, dofs, stiffness_local);
}

CsrMatrix assemble_advection(const StructuredMesh& mesh, Wind beta, Dofs dofs) {
  return assemble(mesh, dofs, [&](const Element& e) { return advection_local(e, beta); });
}

CsrMatrix assemble_anisotropic(const StructuredMesh& mesh, Wind beta, Dofs dofs) {
  return assemble(mesh, dofs, [&](const Element& e) { return anisotropic_local(e, beta); });
}

FemSystem assemble_advdiff(const StructuredMesh& mesh, const FemProblem2D& p) {
  p.validate();
  const Index n = mesh.num_interior();
  if (n < 1) throw ConfigError("assemble_advdiff: the mesh has no interior vertices");
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(9 * mesh.num_triangles()));
  Vector rhs(static_cast<std::size_t>(n), 0.0);
  auto f = [&](double x, double y) { return p.f ? p.f(x, y) : 1.0; };
  for (Index k = 0; k < mesh.num_triangles(); ++k) {
    const Element e = element(mesh, k);
    const Local kl = stiffness_local(e);
    const Local cl = advection_local(e, p.beta);
    const Local sl = anisotropic_local(e, p.beta);
    // Edge-midpoint rule: m[c] is the midpoint of the edge opposite vertex c.
    std::array<double, 3> fm{};
    for (int c = 0; c < 3; ++c) {
      const auto& a = e.xy[(c + 1) % 3];
      const auto& b = e.xy[(c + 2) % 3];
      fm[c] = f(0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1]));
    }
    const double fsum = fm[0] + fm[1] + fm[2];
    for (int a = 0; a < 3; ++a) {
      const Index ra = mesh.interior_index(e.v[a]);
      if (ra < 0) continue;
      // φ_a is 1/2 on the two edges through vertex a and 0 on the opposite one.
      const double load = e.area / 3.0 * 0.5 * (fsum - fm[a]);
      const double sd = p.delta_sd * dot2(p.beta, e.grad[a]) * e.area / 3.0 * fsum;
      rhs[static_cast<std::size_t>(ra)] += load + sd;
      for (int b = 0; b < 3; ++b) {
        const double v = p.nu * kl[a][b] + cl[a][b] + p.delta_sd * sl[a][b];
        const Index cb = mesh.interior_index(e.v[b]);
        if (cb >= 0) {
          t.push_back({ra, cb, v});
        } else if (p.g) {
          rhs[static_cast<std::size_t>(ra)] -= v * p.g(e.xy[b][0], e.xy[b][1]);
        }
      }
    }
  }
  return {CsrMatrix::from_triplets(n, n, t), std::move(rhs)};
}

CsrMatrix assemble_reaction_diffusion(const StructuredMesh& mesh, double nu, Wind beta) {
  if (!(nu > 0.0)) throw ConfigError("assemble_reaction_diffusion: nu must be positive");
  const double b2 = dot2(beta, beta);
  return matkit::add(assemble_stiffness(mesh), nu, assemble_mass(mesh), b2 / nu);
}

krylov::LinearOperator projected_rd_operator(const StructuredMesh& mesh, double nu, Wind beta) {
  if (!(nu > 0.0)) throw ConfigError("projected_rd_operator: nu must be positive");
  auto k = std::make_shared<const CsrMatrix>(assemble_stiffness(mesh));
  auto kf = std::make_shared<const matkit::CholeskyFactor>(matkit::cholesky(*k));
  auto c = std::make_shared<const CsrMatrix>(assemble_advection(mesh, beta));
  auto apply = [k, kf, c, nu](ConstSpan x, MutSpan y) {
    const Vector ctx = c->apply_transpose(x);
    const Vector phi = kf->solve(ctx);
    const Vector second = c->apply(phi);
    k->apply(x, y);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = nu * y[i] + second[i] / nu;
  };
  return krylov::LinearOperator(k->rows(), k->rows(), apply, apply);
}

precond::PreconditionerHandle projected_rd_prec(const StructuredMesh& mesh, double nu, Wind beta) {
  if (!(nu > 0.0)) throw ConfigError("projected_rd_prec: nu must be positive");
  const CsrMatrix k = assemble_stiffness(mesh);
  const CsrMatrix a0 = matkit::add(k, nu, assemble_advection(mesh, beta), 1.0);
  auto nuk = std::make_shared<const CsrMatrix>(matkit::scaled(k, nu));
  auto handle = precond::from_factor(precond::factor_solves(matkit::banded_lu(a0)),
                                     [nuk](ConstSpan r, MutSpan z) { nuk->apply(r, z); });
  return precond::PreconditionerHandle(
      handle.size(), [handle](ConstSpan r, MutSpan z) { handle.apply_inverse(r, z); },
      handle.certificate(), "projected reaction-diffusion (A0⁻¹ νK A0⁻ᵀ)");
}

}  // namespace normalkit::fem2d
