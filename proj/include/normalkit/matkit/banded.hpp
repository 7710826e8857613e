#pragma once

#include <vector>

#include "normalkit/core.hpp"
#include "normalkit/matkit/csr.hpp"
#include "normalkit/matkit/dense.hpp"

namespace normalkit::matkit {

/// A = L·Lᵀ with L stored by rows inside a band of half-width p.
class CholeskyFactor {
 public:
  CholeskyFactor(Index n, Index bandwidth, Vector band);

  Index size() const noexcept { return n_; }
  Index bandwidth() const noexcept { return p_; }
  /// L(i, j) for i−p ≤ j ≤ i, zero elsewhere.
  double l(Index i, Index j) const;
  Vector solve(ConstSpan b) const;
  /// L⁻¹b and L⁻ᵀb separately.
  Vector forward(ConstSpan b) const;
  Vector backward(ConstSpan y) const;
  DenseMatrix to_dense() const;

 private:
  Index n_;
  Index p_;
  Vector band_;
};

/// Throws FactorizationError naming the first nonpositive pivot, or Error if A
/// is not symmetric to 1e-12 relative.
CholeskyFactor cholesky(const CsrMatrix& a);
Vector cholesky_solve(const CholeskyFactor& f, ConstSpan b);

/// Row-pivoted banded LU (LAPACK gbtrf layout, stored by rows).
class BandedLuFactor {
 public:
  BandedLuFactor(Index n, Index kl, Index ku, Vector band, std::vector<Index> pivots);

  Index size() const noexcept { return n_; }
  Index lower_bandwidth() const noexcept { return kl_; }
  Index upper_bandwidth() const noexcept { return ku_; }
  const std::vector<Index>& pivots() const noexcept { return piv_; }
  Vector solve(ConstSpan b) const;
  Vector solve_transpose(ConstSpan b) const;

 private:
  double* row(Index i) { return band_.data() + i * width_; }
  const double* row(Index i) const { return band_.data() + i * width_; }

  Index n_;
  Index kl_;
  Index ku_;
  Index width_;
  Vector band_;
  std::vector<Index> piv_;
};

BandedLuFactor banded_lu(const CsrMatrix& a);
Vector lu_solve(const BandedLuFactor& f, ConstSpan b);

}  // namespace normalkit::matkit
