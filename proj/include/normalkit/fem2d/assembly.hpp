#pragma once

#include <array>

#include "normalkit/core.hpp"
#include "normalkit/fem2d/mesh.hpp"
#include "normalkit/krylov/operator.hpp"
#include "normalkit/matkit/csr.hpp"
#include "normalkit/precond/handle.hpp"

namespace normalkit::fem2d {

using Wind = std::array<double, 2>;

/// (1, 0) for "x", (1, 1)/√2 for "diag". Throws ConfigError otherwise.
Wind wind_from_name(const std::string& name);

/// −νΔu + β·∇u = f with u = g on the boundary.
struct FemProblem2D {
  double nu = 1e-2;
  Wind beta{1.0, 0.0};
  double delta_sd = 1e-4;
  /// Empty means f ≡ 1.
  Field2D f;
  /// Dirichlet data; empty means homogeneous.
  Field2D g;

  void validate() const;
};

/// Which vertices carry unknowns.
enum class Dofs { Interior, All };

matkit::CsrMatrix assemble_mass(const StructuredMesh& mesh, Dofs dofs = Dofs::Interior);
matkit::CsrMatrix assemble_stiffness(const StructuredMesh& mesh, Dofs dofs = Dofs::Interior);
/// C_ij = (β·∇φ_j, φ_i).
matkit::CsrMatrix assemble_advection(const StructuredMesh& mesh, Wind beta, Dofs dofs = Dofs::Interior);
/// (β⊗β ∇φ_j, ∇φ_i) = (β·∇φ_j, β·∇φ_i).
matkit::CsrMatrix assemble_anisotropic(const StructuredMesh& mesh, Wind beta, Dofs dofs = Dofs::Interior);

struct FemSystem {
  matkit::CsrMatrix matrix;
  Vector rhs;
};

/// A = νK + C + δS on the interior vertices, with rhs (f, v + δβ·∇v) and the
/// Dirichlet data lifted.
FemSystem assemble_advdiff(const StructuredMesh& mesh, const FemProblem2D& p);

/// νK + ν⁻¹|β|²M.
matkit::CsrMatrix assemble_reaction_diffusion(const StructuredMesh& mesh, double nu, Wind beta);

/// νK + ν⁻¹CK⁻¹Cᵀ, applied with one Cholesky solve of K per call.
krylov::LinearOperator projected_rd_operator(const StructuredMesh& mesh, double nu, Wind beta);

/// The inverse of the projected operator in factored form. With A₀ = νK + C
/// (homogeneous Dirichlet, constant wind) the operator equals
/// A₀ᵀ(ν⁻¹K⁻¹)A₀, so G⁻¹ = A₀⁻¹(νK)A₀⁻ᵀ through a banded LU of A₀.
precond::PreconditionerHandle projected_rd_prec(const StructuredMesh& mesh, double nu, Wind beta);

}  // namespace normalkit::fem2d
