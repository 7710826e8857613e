#include "normalkit/krylov/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "normalkit/matkit/banded.hpp"
#include "normalkit/matkit/csr.hpp"
#include "normalkit/matkit/eigen.hpp"
#include "normalkit/simd/kernels.hpp"

namespace normalkit::krylov {

using matkit::DenseMatrix;

TSingularSpectrum t_singular_values(const DenseMatrix& a, const DenseMatrix& p,
                                    const DenseMatrix& t) {
  const Index n = a.rows();
  if (a.cols() != n || p.rows() != n || p.cols() != n || t.rows() != n || t.cols() != n) {
    throw DimensionError("t_singular_values: A, P and T must be square of equal size");
  }
  const matkit::DenseLu plu(p);
  const auto chol = matkit::cholesky(matkit::CsrMatrix::from_dense(t));

  // Row i of M = AP⁻¹ solves Pᵀm = a_i; row i of X = M L⁻ᵀ solves L x = m.
  DenseMatrix x(n, n);
  for (Index i = 0; i < n; ++i) {
    const Vector m = plu.solve_transpose(a.row(i));
    const Vector xi = chol.forward(m);
    std::copy(xi.begin(), xi.end(), x.row(i).begin());
  }
  const DenseMatrix l = chol.to_dense();
  const DenseMatrix w = transpose_multiply(l, x);
  DenseMatrix g = transpose_multiply(w, w);
  g = symmetric_part(g);

  TSingularSpectrum s;
  s.sigma = matkit::sym_eig(g);
  for (double& v : s.sigma) v = std::sqrt(std::max(v, 0.0));
  const double lo = s.sigma.front();
  const double hi = s.sigma.back();
  s.kappa_T = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  return s;
}

double cg_bound(double kappa, Index k) {
  if (!std::isfinite(kappa)) throw Error("cg_bound: kappa must be finite");
  return 2.0 * std::pow((kappa - 1.0) / (kappa + 1.0), static_cast<double>(k));
}

double cg_bound(const TSingularSpectrum& s, Index k) { return cg_bound(s.kappa_T, k); }

double energy_norm(const DenseMatrix& b, ConstSpan e) {
  const Vector be = b.apply(e);
  return std::sqrt(std::max(0.0, simd::dot(e, be)));
}

}  // namespace normalkit::krylov
