#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "normalkit/core.hpp"
#include "normalkit/matkit/dense.hpp"

namespace normalkit::matkit {

struct Triplet {
  Index row;
  Index col;
  double value;
};

/// Compressed sparse row matrix with sorted, duplicate-free column indices.
class CsrMatrix {
 public:
  CsrMatrix() = default;
  /// Validates the structure; throws DimensionError on malformed input.
  CsrMatrix(Index rows, Index cols, std::vector<Index> row_ptr, std::vector<Index> col_idx,
            Vector values);

  /// Duplicate (row, col) entries are summed.
  static CsrMatrix from_triplets(Index rows, Index cols, std::span<const Triplet> triplets);
  static CsrMatrix identity(Index n);
  static CsrMatrix diagonal(ConstSpan d);
  static CsrMatrix from_dense(const DenseMatrix& d, double drop_tol = 0.0);

  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }
  Index nnz() const noexcept { return static_cast<Index>(values_.size()); }
  const std::vector<Index>& row_ptr() const noexcept { return row_ptr_; }
  const std::vector<Index>& col_idx() const noexcept { return col_idx_; }
  const Vector& values() const noexcept { return values_; }
  Vector& values() noexcept { return values_; }

  /// Stored value at (i, j), zero if absent.
  double at(Index i, Index j) const;

  void apply(ConstSpan x, MutSpan y) const;
  void apply_transpose(ConstSpan x, MutSpan y) const;
  Vector apply(ConstSpan x) const;
  Vector apply_transpose(ConstSpan x) const;

  CsrMatrix transpose() const;
  Vector diagonal_values() const;
  /// (lower, upper) bandwidth: max i−j and max j−i over stored entries.
  std::pair<Index, Index> bandwidth() const;
  double frobenius_norm() const;
  double max_abs() const;
  bool is_symmetric(double rel_tol = 1e-12) const;
  DenseMatrix to_dense() const;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<Index> row_ptr_{0};
  std::vector<Index> col_idx_;
  Vector values_;
};

/// alpha·a + beta·b (union sparsity pattern).
CsrMatrix add(const CsrMatrix& a, double alpha, const CsrMatrix& b, double beta);
CsrMatrix scaled(const CsrMatrix& a, double s);
CsrMatrix multiply(const CsrMatrix& a, const CsrMatrix& b);
/// Galerkin product rᵀ·a·r, with r given explicitly (e.g. a prolongation).
CsrMatrix triple_product(const CsrMatrix& p, const CsrMatrix& a);

CsrMatrix read_matrix_market(std::istream& in);
CsrMatrix read_matrix_market(const std::string& path);
void write_matrix_market(std::ostream& out, const CsrMatrix& a);
void write_matrix_market(const std::string& path, const CsrMatrix& a);

}  // namespace normalkit::matkit
