#pragma once

#include "normalkit/core.hpp"
#include "normalkit/matkit/dense.hpp"

namespace normalkit::matkit {

/// Eigenvalues of a symmetric matrix in ascending order (Householder
/// tridiagonalization followed by implicit QL). Throws Error if S is not
/// symmetric to 1e-12 relative.
Vector sym_eig(const DenseMatrix& s);

/// Eigenvalues of a symmetric tridiagonal matrix given by its diagonal and
/// off-diagonal, ascending.
Vector sym_tridiagonal_eig(Vector diag, Vector off);

}  // namespace normalkit::matkit
