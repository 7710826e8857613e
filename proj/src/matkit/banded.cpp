#include "normalkit/matkit/banded.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "normalkit/simd/kernels.hpp"

namespace normalkit::matkit {

CholeskyFactor::CholeskyFactor(Index n, Index bandwidth, Vector band)
    : n_(n), p_(bandwidth), band_(std::move(band)) {
  require_size(band_.size(), static_cast<std::size_t>(n * (bandwidth + 1)), "CholeskyFactor band");
}

double CholeskyFactor::l(Index i, Index j) const {
  if (j > i || j < i - p_) return 0.0;
  return band_[static_cast<std::size_t>(i * (p_ + 1) + (j - i + p_))];
}

Vector CholeskyFactor::forward(ConstSpan b) const {
  require_size(b.size(), static_cast<std::size_t>(n_), "CholeskyFactor::forward");
  const auto& k = simd::active();
  Vector y(b.begin(), b.end());
  for (Index i = 0; i < n_; ++i) {
    const Index j0 = std::max<Index>(0, i - p_);
    const double* li = band_.data() + i * (p_ + 1) + (j0 - i + p_);
    const double s = k.dot(li, y.data() + j0, static_cast<std::size_t>(i - j0));
    y[static_cast<std::size_t>(i)] = (y[static_cast<std::size_t>(i)] - s) / li[i - j0];
  }
  return y;
}

Vector CholeskyFactor::backward(ConstSpan y) const {
  require_size(y.size(), static_cast<std::size_t>(n_), "CholeskyFactor::backward");
  const auto& k = simd::active();
  Vector x(y.begin(), y.end());
  for (Index i = n_ - 1; i >= 0; --i) {
    const Index j0 = std::max<Index>(0, i - p_);
    const double* li = band_.data() + i * (p_ + 1) + (j0 - i + p_);
    x[static_cast<std::size_t>(i)] /= li[i - j0];
    k.axpy(-x[static_cast<std::size_t>(i)], li, x.data() + j0, static_cast<std::size_t>(i - j0));
  }
  return x;
}

Vector CholeskyFactor::solve(ConstSpan b) const { return backward(forward(b)); }

DenseMatrix CholeskyFactor::to_dense() const {
  DenseMatrix d(n_, n_);
  for (Index i = 0; i < n_; ++i)
    for (Index j = std::max<Index>(0, i - p_); j <= i; ++j) d(i, j) = l(i, j);
  return d;
}

CholeskyFactor cholesky(const CsrMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("cholesky: matrix not square");
  if (!a.is_symmetric(1e-12)) throw Error("cholesky: matrix not symmetric");
  const Index n = a.rows();
  const Index p = a.bandwidth().first;
  const Index w = p + 1;
  Vector band(static_cast<std::size_t>(n * w), 0.0);
  const auto& k = simd::active();
  for (Index i = 0; i < n; ++i) {
    double* li = band.data() + i * w;
    for (Index m = a.row_ptr()[static_cast<std::size_t>(i)]; m < a.row_ptr()[static_cast<std::size_t>(i) + 1]; ++m) {
      const Index j = a.col_idx()[static_cast<std::size_t>(m)];
      if (j <= i) li[j - i + p] = a.values()[static_cast<std::size_t>(m)];
    }
    const Index j0 = std::max<Index>(0, i - p);
    for (Index j = j0; j <= i; ++j) {
      const double* lj = band.data() + j * w;
      const double s = li[j - i + p] - k.dot(li + (j0 - i + p), lj + (j0 - j + p),
                                             static_cast<std::size_t>(j - j0));
      if (j < i) {
        li[j - i + p] = s / lj[p];
      } else {
        if (!(s > 0.0)) {
          throw FactorizationError("cholesky: nonpositive pivot at index " + std::to_string(i), i, s);
        }
        li[p] = std::sqrt(s);
      }
    }
  }
  return CholeskyFactor(n, p, std::move(band));
}

Vector cholesky_solve(const CholeskyFactor& f, ConstSpan b) { return f.solve(b); }

BandedLuFactor::BandedLuFactor(Index n, Index kl, Index ku, Vector band, std::vector<Index> pivots)
    : n_(n), kl_(kl), ku_(ku), width_(2 * kl + ku + 1), band_(std::move(band)), piv_(std::move(pivots)) {
  require_size(band_.size(), static_cast<std::size_t>(n * width_), "BandedLuFactor band");
  require_size(piv_.size(), static_cast<std::size_t>(n), "BandedLuFactor pivots");
}

Vector BandedLuFactor::solve(ConstSpan b) const {
  require_size(b.size(), static_cast<std::size_t>(n_), "lu_solve");
  const auto& kt = simd::active();
  Vector x(b.begin(), b.end());
  for (Index k = 0; k < n_; ++k) {
    const Index p = piv_[static_cast<std::size_t>(k)];
    if (p != k) std::swap(x[static_cast<std::size_t>(k)], x[static_cast<std::size_t>(p)]);
    const double xk = x[static_cast<std::size_t>(k)];
    const Index rend = std::min(n_ - 1, k + kl_);
    for (Index r = k + 1; r <= rend; ++r) x[static_cast<std::size_t>(r)] -= row(r)[k - r + kl_] * xk;
  }
  const Index span = ku_ + kl_;
  for (Index i = n_ - 1; i >= 0; --i) {
    const Index cend = std::min(n_ - 1, i + span);
    const double* ri = row(i);
    const double s = kt.dot(ri + kl_ + 1, x.data() + i + 1, static_cast<std::size_t>(cend - i));
    x[static_cast<std::size_t>(i)] = (x[static_cast<std::size_t>(i)] - s) / ri[kl_];
  }
  return x;
}

Vector BandedLuFactor::solve_transpose(ConstSpan b) const {
  require_size(b.size(), static_cast<std::size_t>(n_), "lu_solve transpose");
  const auto& kt = simd::active();
  Vector z(b.begin(), b.end());
  const Index span = ku_ + kl_;
  for (Index i = 0; i < n_; ++i) {
    const double* ri = row(i);
    z[static_cast<std::size_t>(i)] /= ri[kl_];
    const Index cend = std::min(n_ - 1, i + span);
    kt.axpy(-z[static_cast<std::size_t>(i)], ri + kl_ + 1, z.data() + i + 1,
            static_cast<std::size_t>(cend - i));
  }
  for (Index k = n_ - 1; k >= 0; --k) {
    const Index rend = std::min(n_ - 1, k + kl_);
    double s = 0.0;
    for (Index r = k + 1; r <= rend; ++r) s += row(r)[k - r + kl_] * z[static_cast<std::size_t>(r)];
    z[static_cast<std::size_t>(k)] -= s;
    const Index p = piv_[static_cast<std::size_t>(k)];
    if (p != k) std::swap(z[static_cast<std::size_t>(k)], z[static_cast<std::size_t>(p)]);
  }
  return z;
}

BandedLuFactor banded_lu(const CsrMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("banded_lu: matrix not square");
  const Index n = a.rows();
  const auto [kl, ku] = a.bandwidth();
  const Index w = 2 * kl + ku + 1;
  Vector band(static_cast<std::size_t>(n * w), 0.0);
  auto at = [&](Index r, Index c) -> double& {
    return band[static_cast<std::size_t>(r * w + (c - r + kl))];
  };
  for (Index i = 0; i < n; ++i)
    for (Index m = a.row_ptr()[static_cast<std::size_t>(i)]; m < a.row_ptr()[static_cast<std::size_t>(i) + 1]; ++m)
      at(i, a.col_idx()[static_cast<std::size_t>(m)]) = a.values()[static_cast<std::size_t>(m)];

  const double tol = 1e-14 * std::max(a.max_abs(), kNormFloor);
  const auto& kt = simd::active();
  std::vector<Index> piv(static_cast<std::size_t>(n));
  for (Index k = 0; k < n; ++k) {
    const Index rend = std::min(n - 1, k + kl);
    Index p = k;
    double best = std::abs(at(k, k));
    for (Index r = k + 1; r <= rend; ++r) {
      if (std::abs(at(r, k)) > best) {
        best = std::abs(at(r, k));
        p = r;
      }
    }
    if (!(best > tol)) {
      throw FactorizationError("banded_lu: matrix singular to working precision at column " +
                                   std::to_string(k),
                               k, best);
    }
    piv[static_cast<std::size_t>(k)] = p;
    const Index cend = std::min(n - 1, k + ku + kl);
    if (p != k) {
      for (Index c = k; c <= cend; ++c) std::swap(at(k, c), at(p, c));
    }
    const double inv = 1.0 / at(k, k);
    const double* pivot_row = &at(k, k) + 1;
    for (Index r = k + 1; r <= rend; ++r) {
      const double l = at(r, k) * inv;
      at(r, k) = l;
      if (l != 0.0) kt.axpy(-l, pivot_row, &at(r, k) + 1, static_cast<std::size_t>(cend - k));
    }
  }
  return BandedLuFactor(n, kl, ku, std::move(band), std::move(piv));
}

Vector lu_solve(const BandedLuFactor& f, ConstSpan b) { return f.solve(b); }

}  // namespace normalkit::matkit
