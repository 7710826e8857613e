#include "normalkit/precond/gmg.hpp"

#include <algorithm>
#include <string>

#include "normalkit/simd/kernels.hpp"

namespace normalkit::precond {

namespace {

using matkit::CsrMatrix;

// One SOR sweep on A x = b, ascending or descending row order.
void sor_sweep(const CsrMatrix& a, ConstSpan b, MutSpan x, double omega, bool forward) {
  const auto& rp = a.row_ptr();
  const auto& ci = a.col_idx();
  const auto& v = a.values();
  const Index n = a.rows();
  for (Index step = 0; step < n; ++step) {
    const Index i = forward ? step : n - 1 - step;
    double s = b[static_cast<std::size_t>(i)];
    double d = 0.0;
    for (Index k = rp[static_cast<std::size_t>(i)]; k < rp[static_cast<std::size_t>(i) + 1]; ++k) {
      const Index j = ci[static_cast<std::size_t>(k)];
      if (j == i) {
        d = v[static_cast<std::size_t>(k)];
      } else {
        s -= v[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(j)];
      }
    }
    auto& xi = x[static_cast<std::size_t>(i)];
    xi = (1.0 - omega) * xi + omega * s / d;
  }
}

Vector cycle(const GmgHierarchy& h, std::size_t l, ConstSpan r) {
  if (l + 1 == h.levels.size()) return h.coarsest->solve(r);
  const GmgLevel& lev = h.levels[l];
  Vector x(r.size(), 0.0);
  for (Index s = 0; s < lev.pre_smooth; ++s) sor_sweep(lev.op, r, x, lev.omega, true);
  Vector res = lev.op.apply(x);
  simd::xpay(r, -1.0, res);
  const Vector rc = lev.prolongation.apply_transpose(res);
  const Vector ec = cycle(h, l + 1, rc);
  const Vector e = lev.prolongation.apply(ec);
  simd::axpy(1.0, e, x);
  for (Index s = 0; s < lev.post_smooth; ++s) sor_sweep(lev.op, r, x, lev.omega, false);
  return x;
}

}  // namespace

CsrMatrix p1_prolongation(GridDescriptor coarse) {
  const Index cmx = coarse.mx;
  const Index cmy = coarse.my;
  const Index fmx = 2 * cmx;
  const Index fmy = 2 * cmy;
  auto coarse_index = [&](Index i, Index j) -> Index {
    if (i <= 0 || j <= 0 || i >= cmx || j >= cmy) return -1;
    return (j - 1) * (cmx - 1) + (i - 1);
  };
  std::vector<matkit::Triplet> t;
  for (Index jf = 1; jf < fmy; ++jf) {
    for (Index if_ = 1; if_ < fmx; ++if_) {
      const Index row = (jf - 1) * (fmx - 1) + (if_ - 1);
      auto add = [&](Index i, Index j, double w) {
        const Index c = coarse_index(i, j);
        if (c >= 0) t.push_back({row, c, w});
      };
      const Index i0 = if_ / 2;
      const Index j0 = jf / 2;
      const bool odd_i = if_ % 2 == 1;
      const bool odd_j = jf % 2 == 1;
      if (!odd_i && !odd_j) {
        add(i0, j0, 1.0);
      } else if (odd_i && !odd_j) {
        add(i0, j0, 0.5);
        add(i0 + 1, j0, 0.5);
      } else if (!odd_i && odd_j) {
        add(i0, j0, 0.5);
        add(i0, j0 + 1, 0.5);
      } else {
        // Midpoint of the cell diagonal (i0, j0)–(i0+1, j0+1).
        add(i0, j0, 0.5);
        add(i0 + 1, j0 + 1, 0.5);
      }
    }
  }
  return CsrMatrix::from_triplets((fmx - 1) * (fmy - 1), (cmx - 1) * (cmy - 1), t);
}

GmgHierarchy gmg_build(const CsrMatrix& fine, GridDescriptor grid, Index levels, double omega,
                       Index nu_pre, Index nu_post) {
  if (levels < 1) throw ConfigError("gmg_build: levels must be at least 1");
  if (!(omega > 0.0 && omega < 2.0)) throw ConfigError("gmg_build: omega must lie in (0, 2)");
  if (nu_pre < 0 || nu_post < 0) throw ConfigError("gmg_build: smoothing counts must be >= 0");
  if (fine.rows() != grid.unknowns() || fine.cols() != grid.unknowns()) {
    throw DimensionError("gmg_build: matrix size does not match the grid");
  }
  if (!fine.is_symmetric(1e-12)) throw Error("gmg_build: fine operator is not symmetric");
  const Index div = Index{1} << (levels - 1);
  if (grid.mx % div != 0 || grid.my % div != 0 || grid.mx / div < 2 || grid.my / div < 2) {
    throw ConfigError("gmg_build: a " + std::to_string(grid.mx) + "x" + std::to_string(grid.my) +
                      " grid cannot be coarsened " + std::to_string(levels - 1) + " times");
  }
  GmgHierarchy h;
  GridDescriptor g = grid;
  CsrMatrix op = fine;
  for (Index l = 0; l < levels; ++l) {
    GmgLevel lev;
    lev.grid = g;
    lev.omega = omega;
    lev.pre_smooth = nu_pre;
    lev.post_smooth = nu_post;
    if (l + 1 < levels) {
      const GridDescriptor coarse{g.mx / 2, g.my / 2};
      lev.prolongation = p1_prolongation(coarse);
      CsrMatrix next = triple_product(lev.prolongation, op);
      lev.op = std::move(op);
      op = std::move(next);
      g = coarse;
    } else {
      lev.op = op;
    }
    h.levels.push_back(std::move(lev));
  }
  h.coarsest = std::make_shared<const matkit::CholeskyFactor>(matkit::cholesky(h.levels.back().op));
  return h;
}

Vector vcycle(const GmgHierarchy& h, ConstSpan r) {
  require_size(r.size(), static_cast<std::size_t>(h.levels.front().op.rows()), "vcycle");
  return cycle(h, 0, r);
}

PreconditionerHandle gmg_vcycle_prec(GmgHierarchy h) {
  auto hp = std::make_shared<const GmgHierarchy>(std::move(h));
  const auto& f = hp->levels.front();
  const std::string desc = "gmg:levels=" + std::to_string(hp->levels.size()) +
                           ",omega=" + std::to_string(f.omega) + ",smooth=" + std::to_string(f.pre_smooth);
  return PreconditionerHandle(
      f.op.rows(),
      [hp](ConstSpan r, MutSpan z) {
        const Vector x = cycle(*hp, 0, r);
        std::copy(x.begin(), x.end(), z.begin());
      },
      SymmetryCertificate::SymmetricByConstruction, desc);
}

}  // namespace normalkit::precond
