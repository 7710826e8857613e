#pragma once

#include <span>
#include <vector>

#include "normalkit/core.hpp"

namespace normalkit::matkit {

/// Row-major dense matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(Index rows, Index cols, double fill = 0.0);
  /// Takes ownership of row-major `entries`; throws if the length is wrong or an
  /// entry is not finite.
  DenseMatrix(Index rows, Index cols, Vector entries);

  static DenseMatrix identity(Index n);
  static DenseMatrix diagonal(ConstSpan d);

  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  double& operator()(Index i, Index j) { return data_[static_cast<std::size_t>(i * cols_ + j)]; }
  double operator()(Index i, Index j) const {
    return data_[static_cast<std::size_t>(i * cols_ + j)];
  }

  MutSpan row(Index i) { return {data_.data() + i * cols_, static_cast<std::size_t>(cols_)}; }
  ConstSpan row(Index i) const {
    return {data_.data() + i * cols_, static_cast<std::size_t>(cols_)};
  }

  const Vector& data() const noexcept { return data_; }
  Vector& data() noexcept { return data_; }

  DenseMatrix transpose() const;
  Vector apply(ConstSpan x) const;
  Vector apply_transpose(ConstSpan x) const;
  void apply(ConstSpan x, MutSpan y) const;
  void apply_transpose(ConstSpan x, MutSpan y) const;

  double frobenius_norm() const;
  double max_abs() const;
  bool all_finite() const;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  Vector data_;
};

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator*(double s, const DenseMatrix& a);

/// aᵀ·b without forming the transpose.
DenseMatrix transpose_multiply(const DenseMatrix& a, const DenseMatrix& b);

/// Symmetric part (A + Aᵀ)/2.
DenseMatrix symmetric_part(const DenseMatrix& a);

/// Dense LU with partial pivoting, P·A = L·U.
class DenseLu {
 public:
  explicit DenseLu(const DenseMatrix& a);

  Index size() const noexcept { return lu_.rows(); }
  Vector solve(ConstSpan b) const;
  Vector solve_transpose(ConstSpan b) const;
  DenseMatrix inverse() const;
  /// Smallest |U_ii| relative to max |A_ij|; a cheap singularity indicator.
  double min_pivot_ratio() const noexcept { return min_pivot_ratio_; }

 private:
  DenseMatrix lu_;
  std::vector<Index> perm_;
  double min_pivot_ratio_ = 0.0;
};

/// Solve with an upper-triangular dense matrix (R x = b) and its transpose.
Vector upper_solve(const DenseMatrix& r, ConstSpan b);
Vector upper_transpose_solve(const DenseMatrix& r, ConstSpan b);

}  // namespace normalkit::matkit
