#include "normalkit/matkit/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "normalkit/simd/kernels.hpp"

namespace normalkit::matkit {

Vector sym_tridiagonal_eig(Vector d, Vector e) {
  const std::size_t n = d.size();
  if (n == 0) return d;
  require_size(e.size(), n - 1, "sym_tridiagonal_eig off-diagonal");
  e.push_back(0.0);
  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m = l;
    while (true) {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
      }
      if (m == l) break;
      if (++iter > 60) throw ConvergenceError("sym_eig: QL iteration did not converge", std::abs(e[l]));
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + (g >= 0.0 ? r : -r));
      double s = 1.0;
      double c = 1.0;
      double p = 0.0;
      bool underflow = false;
      for (std::size_t i = m; i-- > l;) {
        double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
      }
      if (underflow) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    }
  }
  std::sort(d.begin(), d.end());
  return d;
}

Vector sym_eig(const DenseMatrix& s) {
  if (!s.square()) throw DimensionError("sym_eig: matrix not square");
  const Index n = s.rows();
  double asym = 0.0;
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) asym = std::max(asym, std::abs(s(i, j) - s(j, i)));
  if (asym > 1e-12 * std::max(s.max_abs(), kNormFloor)) throw Error("sym_eig: matrix not symmetric");
  if (n == 0) return {};

  // Householder reduction to tridiagonal form, A ← H A H applied to the
  // trailing block only.
  DenseMatrix a = symmetric_part(s);
  const auto& kt = simd::active();
  Vector diag(static_cast<std::size_t>(n));
  Vector off(static_cast<std::size_t>(n > 0 ? n - 1 : 0));
  Vector v(static_cast<std::size_t>(n));
  Vector p(static_cast<std::size_t>(n));
  for (Index k = 0; k + 2 < n; ++k) {
    const auto m = static_cast<std::size_t>(n - k - 1);
    double* vk = v.data();
    for (std::size_t i = 0; i < m; ++i) vk[i] = a(k + 1 + static_cast<Index>(i), k);
    const double norm_x = std::sqrt(kt.dot(vk, vk, m));
    if (norm_x == 0.0) {
      off[static_cast<std::size_t>(k)] = 0.0;
      continue;
    }
    const double alpha = vk[0] >= 0.0 ? -norm_x : norm_x;
    vk[0] -= alpha;
    const double vn = std::sqrt(kt.dot(vk, vk, m));
    kt.scal(1.0 / vn, vk, m);
    off[static_cast<std::size_t>(k)] = alpha;
    // B ← (I − 2vvᵀ) B (I − 2vvᵀ) = B − v wᵀ − w vᵀ with p = 2Bv, w = p − (vᵀp) v.
    const Index off0 = k + 1;
    for (std::size_t i = 0; i < m; ++i) {
      p[i] = 2.0 * kt.dot(a.row(off0 + static_cast<Index>(i)).data() + off0, vk, m);
    }
    const double vp = kt.dot(vk, p.data(), m);
    kt.axpy(-vp, vk, p.data(), m);
    for (std::size_t i = 0; i < m; ++i) {
      double* row = a.row(off0 + static_cast<Index>(i)).data() + off0;
      kt.axpy(-vk[i], p.data(), row, m);
      kt.axpy(-p[i], vk, row, m);
    }
  }
  if (n >= 2) off[static_cast<std::size_t>(n - 2)] = a(n - 1, n - 2);
  for (Index i = 0; i < n; ++i) diag[static_cast<std::size_t>(i)] = a(i, i);
  return sym_tridiagonal_eig(std::move(diag), std::move(off));
}

}  // namespace normalkit::matkit
