#pragma once

#include <functional>
#include <memory>
#include <string>

#include "normalkit/core.hpp"
#include "normalkit/matkit/csr.hpp"
#include "normalkit/matkit/dense.hpp"
#include "normalkit/matkit/tridiagonal.hpp"

namespace normalkit::krylov {

/// A matrix-free linear map together with its transpose. Copies share the
/// underlying callables.
class LinearOperator {
 public:
  using ApplyFn = std::function<void(ConstSpan, MutSpan)>;

  LinearOperator(Index rows, Index cols, ApplyFn apply, ApplyFn apply_transpose);

  /// The operators below keep a shared copy of the matrix.
  static LinearOperator from(matkit::CsrMatrix a);
  static LinearOperator from(matkit::DenseMatrix a);
  static LinearOperator from(matkit::Tridiagonal a);
  static LinearOperator identity(Index n);
  /// x ↦ diag(d)·x.
  static LinearOperator diagonal(Vector d);

  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }

  void apply(ConstSpan x, MutSpan y) const;
  void apply_transpose(ConstSpan x, MutSpan y) const;
  Vector apply(ConstSpan x) const;
  Vector apply_transpose(ConstSpan x) const;

  LinearOperator transpose() const;
  /// Dense materialization, column by column (tests and small analyses).
  matkit::DenseMatrix to_dense() const;

 private:
  Index rows_;
  Index cols_;
  std::shared_ptr<const ApplyFn> apply_;
  std::shared_ptr<const ApplyFn> apply_t_;
};

/// a∘b, i.e. x ↦ a(b(x)).
LinearOperator product(const LinearOperator& a, const LinearOperator& b);
LinearOperator sum(const LinearOperator& a, const LinearOperator& b);
LinearOperator scaled(double s, const LinearOperator& a);
/// aᵀ∘t∘a, the weighted Gram operator.
LinearOperator gram(const LinearOperator& a, const LinearOperator& t);

/// max over `probes` random pairs of |⟨Ax,y⟩ − ⟨x,Aᵀy⟩| / (‖Ax‖‖y‖).
double adjoint_defect(const LinearOperator& a, int probes = 8, unsigned seed = 1);

}  // namespace normalkit::krylov
