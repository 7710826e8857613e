#pragma once

#include <vector>

#include "normalkit/core.hpp"
#include "normalkit/matkit/dense.hpp"
#include "normalkit/matkit/tridiagonal.hpp"

namespace normalkit::matkit {

/// Dense factors. R is upper-triangular with a nonnegative diagonal.
struct QrFactor {
  DenseMatrix q;
  DenseMatrix r;
};

struct RqFactor {
  DenseMatrix r;
  DenseMatrix q;
};

/// A = Q·H with Q orthogonal and H symmetric positive definite.
struct PolarFactor {
  DenseMatrix q;
  DenseMatrix h;
  int iterations = 0;
  /// max |(QᵀQ − I)_ij| at exit.
  double orthogonality_defect = 0.0;
};

/// Upper-triangular matrix with two superdiagonals.
class UpperBand2 {
 public:
  UpperBand2() = default;
  UpperBand2(Vector d0, Vector d1, Vector d2);

  Index size() const noexcept { return static_cast<Index>(d0_.size()); }
  const Vector& diag() const noexcept { return d0_; }
  const Vector& super1() const noexcept { return d1_; }
  const Vector& super2() const noexcept { return d2_; }

  Vector apply(ConstSpan x) const;
  Vector apply_transpose(ConstSpan x) const;
  /// R x = b and Rᵀ x = b.
  Vector solve(ConstSpan b) const;
  Vector solve_transpose(ConstSpan b) const;
  DenseMatrix to_dense() const;

 private:
  Vector d0_;
  Vector d1_;
  Vector d2_;
};

/// Givens QR of a tridiagonal matrix; Q is kept as the rotation sequence.
class TridiagonalQr {
 public:
  explicit TridiagonalQr(const Tridiagonal& a);

  Index size() const noexcept { return r_.size(); }
  const UpperBand2& r() const noexcept { return r_; }
  Vector apply_q(ConstSpan x) const;
  Vector apply_qt(ConstSpan x) const;
  DenseMatrix q_dense() const;

 private:
  Vector c_;
  Vector s_;
  Vector sign_;
  UpperBand2 r_;
};

/// A = R·Q for tridiagonal A, through the Givens QR of the flipped transpose.
class TridiagonalRq {
 public:
  explicit TridiagonalRq(const Tridiagonal& a);

  Index size() const noexcept { return r_.size(); }
  const UpperBand2& r() const noexcept { return r_; }
  Vector apply_q(ConstSpan x) const;
  Vector apply_qt(ConstSpan x) const;
  DenseMatrix q_dense() const;

 private:
  TridiagonalQr flipped_;
  UpperBand2 r_;
};

/// Householder QR. Throws FactorizationError if |R_ii| < 1e-14·‖A‖_F.
QrFactor qr(const DenseMatrix& a);
TridiagonalQr qr(const Tridiagonal& a);
RqFactor rq(const DenseMatrix& a);
TridiagonalRq rq(const Tridiagonal& a);

/// Scaled Newton iteration X ← (γX + γ⁻¹X⁻ᵀ)/2. Throws ConvergenceError if
/// max |(XᵀX − I)_ij| is not below `tol` within `max_iter` steps.
PolarFactor polar(const DenseMatrix& a, double tol = 1e-13, int max_iter = 100);

}  // namespace normalkit::matkit
