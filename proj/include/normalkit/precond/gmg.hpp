#pragma once

#include <memory>
#include <vector>

#include "normalkit/core.hpp"
#include "normalkit/matkit/banded.hpp"
#include "normalkit/matkit/csr.hpp"
#include "normalkit/precond/handle.hpp"

namespace normalkit::precond {

/// Uniform grid of mx × my cells on the unit square. Unknowns are the
/// (mx−1)(my−1) interior vertices numbered x-fastest, every cell split along
/// the diagonal from (i, j) to (i+1, j+1).
struct GridDescriptor {
  Index mx = 0;
  Index my = 0;

  Index unknowns() const { return (mx - 1) * (my - 1); }
};

struct GmgLevel {
  GridDescriptor grid;
  matkit::CsrMatrix op;
  /// From the next coarser level to this one; empty on the coarsest level.
  matkit::CsrMatrix prolongation;
  double omega = 1.0;
  Index pre_smooth = 2;
  Index post_smooth = 2;
};

/// Finest level first.
struct GmgHierarchy {
  std::vector<GmgLevel> levels;
  std::shared_ptr<const matkit::CholeskyFactor> coarsest;
};

/// Piecewise-linear interpolation from `coarse` to the grid with twice as many
/// cells per side. Exact for the nested P1 spaces of the split triangulation.
matkit::CsrMatrix p1_prolongation(GridDescriptor coarse);

/// Galerkin hierarchy Aₗ₊₁ = PᵀAₗP. Throws ConfigError if the grid cannot be
/// halved `levels − 1` times with interior nodes left over, Error if `fine` is
/// not symmetric.
GmgHierarchy gmg_build(const matkit::CsrMatrix& fine, GridDescriptor grid, Index levels,
                       double omega = 1.0, Index nu_pre = 2, Index nu_post = 2);

/// One V-cycle from a zero initial guess: forward SOR before the coarse
/// correction, backward SOR after it.
Vector vcycle(const GmgHierarchy& h, ConstSpan r);

PreconditionerHandle gmg_vcycle_prec(GmgHierarchy h);

}  // namespace normalkit::precond
