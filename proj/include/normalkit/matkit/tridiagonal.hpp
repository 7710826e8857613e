#pragma once

#include "normalkit/core.hpp"
#include "normalkit/matkit/dense.hpp"

namespace normalkit::matkit {

class CsrMatrix;

class Tridiagonal {
 public:
  Tridiagonal() = default;
  Tridiagonal(Vector sub, Vector diag, Vector super);
  /// Constant-coefficient tridiagonal of order n.
  static Tridiagonal constant(Index n, double sub, double diag, double super);

  Index size() const noexcept { return static_cast<Index>(diag_.size()); }
  const Vector& sub() const noexcept { return sub_; }
  const Vector& diag() const noexcept { return diag_; }
  const Vector& super() const noexcept { return super_; }

  void apply(ConstSpan x, MutSpan y) const;
  void apply_transpose(ConstSpan x, MutSpan y) const;
  Vector apply(ConstSpan x) const;
  Vector apply_transpose(ConstSpan x) const;

  Tridiagonal transpose() const { return Tridiagonal(super_, diag_, sub_); }
  /// Infinity norm (max absolute row sum).
  double norm_inf() const;
  DenseMatrix to_dense() const;
  CsrMatrix to_csr() const;

 private:
  Vector sub_;
  Vector diag_;
  Vector super_;
};

/// LU without pivoting in O(n). Throws FactorizationError carrying the index of
/// the first pivot smaller than 1e-14·‖T‖∞.
Vector thomas_solve(const Tridiagonal& t, ConstSpan b);

}  // namespace normalkit::matkit
