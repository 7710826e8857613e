#pragma once

#include "normalkit/core.hpp"
#include "normalkit/krylov/operator.hpp"
#include "normalkit/matkit/csr.hpp"
#include "normalkit/precond/handle.hpp"

namespace normalkit::precond {

enum class DirectMethod { Cholesky, BandedLU };

/// G⁻¹ through a banded factorization of an assembled SPD matrix. Cholesky
/// failure raises FactorizationError.
PreconditionerHandle from_spd_matrix(const matkit::CsrMatrix& g,
                                     DirectMethod method = DirectMethod::Cholesky);

/// G⁻¹ through unpreconditioned inner CG to relative tolerance `inner_tol`.
/// Throws ConvergenceError (carrying the achieved relative residual) if the
/// cap is hit. The handle keeps no state between calls but is not reentrant
/// if `g` itself is not.
PreconditionerHandle from_spd_operator(const krylov::LinearOperator& g, double inner_tol = 1e-10,
                                       Index inner_max = 1000);

}  // namespace normalkit::precond
