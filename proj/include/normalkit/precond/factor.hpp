#pragma once

#include <string>

#include "normalkit/core.hpp"
#include "normalkit/krylov/operator.hpp"
#include "normalkit/matkit/banded.hpp"
#include "normalkit/matkit/dense.hpp"
#include "normalkit/matkit/qr.hpp"
#include "normalkit/matkit/tridiagonal.hpp"
#include "normalkit/precond/handle.hpp"

namespace normalkit::precond {

/// A nonsingular factor P, known only through r ↦ P⁻¹r and r ↦ P⁻ᵀr.
struct FactorSolves {
  Index size = 0;
  PreconditionerHandle::ApplyFn solve;
  PreconditionerHandle::ApplyFn solve_transpose;
  std::string description;
};

FactorSolves factor_solves(const matkit::Tridiagonal& p);
FactorSolves factor_solves(const matkit::UpperBand2& r);
/// General dense P through a partial-pivoting LU.
FactorSolves factor_solves(const matkit::DenseMatrix& p);
FactorSolves factor_solves(const matkit::BandedLuFactor& lu);
/// Dense upper-triangular R (back substitution, no factorization).
FactorSolves upper_triangular_solves(const matkit::DenseMatrix& r);

/// P⁻¹ as a LinearOperator (its transpose is P⁻ᵀ), the form LSQR and GMRES take.
krylov::LinearOperator inverse_operator(const FactorSolves& p);

/// G⁻¹ = P⁻¹ T⁻¹ P⁻ᵀ, i.e. G = PᵀTP. Without `tinv`, G = PᵀP.
PreconditionerHandle from_factor(const FactorSolves& p, PreconditionerHandle::ApplyFn tinv = {});

}  // namespace normalkit::precond
