#include "normalkit/matkit/dense.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "normalkit/simd/kernels.hpp"

namespace normalkit::matkit {

namespace {

void require_same_shape(const DenseMatrix& a, const DenseMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(what) + ": shape mismatch");
  }
}

}  // namespace

DenseMatrix::DenseMatrix(Index rows, Index cols, double fill)
    : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows * cols), fill) {
  if (rows < 0 || cols < 0) throw DimensionError("DenseMatrix: negative dimension");
}

DenseMatrix::DenseMatrix(Index rows, Index cols, Vector entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (rows < 0 || cols < 0) throw DimensionError("DenseMatrix: negative dimension");
  require_size(data_.size(), static_cast<std::size_t>(rows * cols), "DenseMatrix entries");
  if (!all_finite()) throw Error("DenseMatrix: non-finite entry");
}

DenseMatrix DenseMatrix::identity(Index n) {
  DenseMatrix m(n, n);
  for (Index i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::diagonal(ConstSpan d) {
  const auto n = static_cast<Index>(d.size());
  DenseMatrix m(n, n);
  for (Index i = 0; i < n; ++i) m(i, i) = d[static_cast<std::size_t>(i)];
  return m;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(cols_, rows_);
  for (Index i = 0; i < rows_; ++i)
    for (Index j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

void DenseMatrix::apply(ConstSpan x, MutSpan y) const {
  require_size(x.size(), static_cast<std::size_t>(cols_), "DenseMatrix::apply x");
  require_size(y.size(), static_cast<std::size_t>(rows_), "DenseMatrix::apply y");
  const auto& k = simd::active();
  for (Index i = 0; i < rows_; ++i) {
    y[static_cast<std::size_t>(i)] = k.dot(data_.data() + i * cols_, x.data(), x.size());
  }
}

void DenseMatrix::apply_transpose(ConstSpan x, MutSpan y) const {
  require_size(x.size(), static_cast<std::size_t>(rows_), "DenseMatrix::apply_transpose x");
  require_size(y.size(), static_cast<std::size_t>(cols_), "DenseMatrix::apply_transpose y");
  std::fill(y.begin(), y.end(), 0.0);
  const auto& k = simd::active();
  for (Index i = 0; i < rows_; ++i) {
    k.axpy(x[static_cast<std::size_t>(i)], data_.data() + i * cols_, y.data(), y.size());
  }
}

Vector DenseMatrix::apply(ConstSpan x) const {
  Vector y(static_cast<std::size_t>(rows_));
  apply(x, y);
  return y;
}

Vector DenseMatrix::apply_transpose(ConstSpan x) const {
  Vector y(static_cast<std::size_t>(cols_));
  apply_transpose(x, y);
  return y;
}

double DenseMatrix::frobenius_norm() const { return simd::nrm2(data_); }

double DenseMatrix::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

bool DenseMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("DenseMatrix product: inner dimension mismatch");
  DenseMatrix c(a.rows(), b.cols());
  const auto& k = simd::active();
  const auto n = static_cast<std::size_t>(b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    double* ci = c.row(i).data();
    for (Index p = 0; p < a.cols(); ++p) {
      const double aip = a(i, p);
      if (aip != 0.0) k.axpy(aip, b.row(p).data(), ci, n);
    }
  }
  return c;
}

DenseMatrix transpose_multiply(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows()) throw DimensionError("transpose_multiply: row mismatch");
  DenseMatrix c(a.cols(), b.cols());
  const auto& k = simd::active();
  const auto n = static_cast<std::size_t>(b.cols());
  for (Index p = 0; p < a.rows(); ++p) {
    const double* bp = b.row(p).data();
    for (Index i = 0; i < a.cols(); ++i) {
      const double api = a(p, i);
      if (api != 0.0) k.axpy(api, bp, c.row(i).data(), n);
    }
  }
  return c;
}

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_shape(a, b, "DenseMatrix +");
  DenseMatrix c = a;
  simd::axpy(1.0, b.data(), c.data());
  return c;
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_shape(a, b, "DenseMatrix -");
  DenseMatrix c = a;
  simd::axpy(-1.0, b.data(), c.data());
  return c;
}

DenseMatrix operator*(double s, const DenseMatrix& a) {
  DenseMatrix c = a;
  simd::scal(s, c.data());
  return c;
}

DenseMatrix symmetric_part(const DenseMatrix& a) {
  if (!a.square()) throw DimensionError("symmetric_part: matrix not square");
  DenseMatrix s(a.rows(), a.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) s(i, j) = 0.5 * (a(i, j) + a(j, i));
  return s;
}

DenseLu::DenseLu(const DenseMatrix& a) : lu_(a), perm_(static_cast<std::size_t>(a.rows())) {
  if (!a.square()) throw DimensionError("DenseLu: matrix not square");
  const Index n = a.rows();
  std::iota(perm_.begin(), perm_.end(), Index{0});
  const double scale = std::max(a.max_abs(), kNormFloor);
  const auto& k = simd::active();
  min_pivot_ratio_ = n > 0 ? std::numeric_limits<double>::infinity() : 0.0;
  for (Index c = 0; c < n; ++c) {
    Index piv = c;
    double best = std::abs(lu_(c, c));
    for (Index r = c + 1; r < n; ++r) {
      if (std::abs(lu_(r, c)) > best) {
        best = std::abs(lu_(r, c));
        piv = r;
      }
    }
    if (best <= 1e-14 * scale) {
      throw FactorizationError("DenseLu: matrix singular to working precision at column " +
                                   std::to_string(c),
                               c, best);
    }
    min_pivot_ratio_ = std::min(min_pivot_ratio_, best / scale);
    if (piv != c) {
      std::swap_ranges(lu_.row(c).begin(), lu_.row(c).end(), lu_.row(piv).begin());
      std::swap(perm_[static_cast<std::size_t>(c)], perm_[static_cast<std::size_t>(piv)]);
    }
    const double inv = 1.0 / lu_(c, c);
    const auto tail = static_cast<std::size_t>(n - c - 1);
    const double* pivot_row = lu_.row(c).data() + c + 1;
    for (Index r = c + 1; r < n; ++r) {
      const double l = lu_(r, c) * inv;
      lu_(r, c) = l;
      if (l != 0.0) k.axpy(-l, pivot_row, lu_.row(r).data() + c + 1, tail);
    }
  }
}

Vector DenseLu::solve(ConstSpan b) const {
  const Index n = size();
  require_size(b.size(), static_cast<std::size_t>(n), "DenseLu::solve");
  const auto& k = simd::active();
  Vector y(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    y[static_cast<std::size_t>(i)] =
        b[static_cast<std::size_t>(perm_[static_cast<std::size_t>(i)])] -
        k.dot(lu_.row(i).data(), y.data(), static_cast<std::size_t>(i));
  }
  for (Index i = n - 1; i >= 0; --i) {
    const auto tail = static_cast<std::size_t>(n - i - 1);
    const double s = k.dot(lu_.row(i).data() + i + 1, y.data() + i + 1, tail);
    y[static_cast<std::size_t>(i)] = (y[static_cast<std::size_t>(i)] - s) / lu_(i, i);
  }
  return y;
}

Vector DenseLu::solve_transpose(ConstSpan b) const {
  // Aᵀ = Uᵀ Lᵀ P, so solve Uᵀ z = b, Lᵀ w = z, x = Pᵀ w.
  const Index n = size();
  require_size(b.size(), static_cast<std::size_t>(n), "DenseLu::solve_transpose");
  const auto& k = simd::active();
  Vector z(b.begin(), b.end());
  for (Index i = 0; i < n; ++i) {
    z[static_cast<std::size_t>(i)] /= lu_(i, i);
    const auto tail = static_cast<std::size_t>(n - i - 1);
    k.axpy(-z[static_cast<std::size_t>(i)], lu_.row(i).data() + i + 1, z.data() + i + 1, tail);
  }
  for (Index i = n - 1; i >= 0; --i) {
    k.axpy(-z[static_cast<std::size_t>(i)], lu_.row(i).data(), z.data(), static_cast<std::size_t>(i));
  }
  Vector x(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    x[static_cast<std::size_t>(perm_[static_cast<std::size_t>(i)])] = z[static_cast<std::size_t>(i)];
  }
  return x;
}

DenseMatrix DenseLu::inverse() const {
  // Row-oriented substitution on all right-hand sides at once: every update is a
  // full-row axpy.
  const Index n = size();
  const auto un = static_cast<std::size_t>(n);
  const auto& k = simd::active();
  DenseMatrix x(n, n);
  for (Index i = 0; i < n; ++i) x(i, perm_[static_cast<std::size_t>(i)]) = 1.0;
  for (Index i = 1; i < n; ++i) {
    double* xi = x.row(i).data();
    for (Index p = 0; p < i; ++p) {
      const double l = lu_(i, p);
      if (l != 0.0) k.axpy(-l, x.row(p).data(), xi, un);
    }
  }
  for (Index i = n - 1; i >= 0; --i) {
    double* xi = x.row(i).data();
    for (Index p = i + 1; p < n; ++p) {
      const double u = lu_(i, p);
      if (u != 0.0) k.axpy(-u, x.row(p).data(), xi, un);
    }
    k.scal(1.0 / lu_(i, i), xi, un);
  }
  return x;
}

Vector upper_solve(const DenseMatrix& r, ConstSpan b) {
  const Index n = r.rows();
  require_size(b.size(), static_cast<std::size_t>(n), "upper_solve");
  const auto& k = simd::active();
  Vector x(b.begin(), b.end());
  for (Index i = n - 1; i >= 0; --i) {
    const auto tail = static_cast<std::size_t>(n - i - 1);
    const double s = k.dot(r.row(i).data() + i + 1, x.data() + i + 1, tail);
    x[static_cast<std::size_t>(i)] = (x[static_cast<std::size_t>(i)] - s) / r(i, i);
  }
  return x;
}

Vector upper_transpose_solve(const DenseMatrix& r, ConstSpan b) {
  const Index n = r.rows();
  require_size(b.size(), static_cast<std::size_t>(n), "upper_transpose_solve");
  const auto& k = simd::active();
  Vector x(b.begin(), b.end());
  for (Index i = 0; i < n; ++i) {
    x[static_cast<std::size_t>(i)] /= r(i, i);
    const auto tail = static_cast<std::size_t>(n - i - 1);
    k.axpy(-x[static_cast<std::size_t>(i)], r.row(i).data() + i + 1, x.data() + i + 1, tail);
  }
  return x;
}

}  // namespace normalkit::matkit
