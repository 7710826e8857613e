#pragma once

#include "normalkit/core.hpp"
#include "normalkit/matkit/dense.hpp"

namespace normalkit::krylov {

/// T-singular values of AP⁻¹, i.e. the square roots of the eigenvalues of
/// T⁻¹(AP⁻¹)ᵀT(AP⁻¹), ascending.
struct TSingularSpectrum {
  Vector sigma;
  double kappa_T = 1.0;
};

/// Dense analysis for small problems. T must be SPD; P and A square and
/// nonsingular. The eigenproblem is solved in the symmetric form WᵀW with
/// W = Lᵀ(AP⁻¹)L⁻ᵀ and T = LLᵀ.
TSingularSpectrum t_singular_values(const matkit::DenseMatrix& a, const matkit::DenseMatrix& p,
                                    const matkit::DenseMatrix& t);

/// 2·((κ−1)/(κ+1))^k.
double cg_bound(double kappa, Index k);
double cg_bound(const TSingularSpectrum& s, Index k);

/// √(eᵀBe) for a dense SPD B.
double energy_norm(const matkit::DenseMatrix& b, ConstSpan e);

}  // namespace normalkit::krylov
