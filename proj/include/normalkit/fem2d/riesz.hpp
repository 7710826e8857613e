#pragma once

#include <memory>
#include <string>

#include "normalkit/core.hpp"
#include "normalkit/fem2d/mesh.hpp"
#include "normalkit/krylov/operator.hpp"
#include "normalkit/matkit/banded.hpp"
#include "normalkit/matkit/csr.hpp"

namespace normalkit::fem2d {

enum class RieszVariant { Identity, L2, H1 };

RieszVariant riesz_from_name(const std::string& name);
const char* to_string(RieszVariant v);

/// The discrete Riesz map T: identity, M⁻¹ (L2) or ν⁻¹K⁻¹ (H1). T is dense;
/// only its inverse is kept as a sparse matrix together with its Cholesky
/// factor.
class RieszMap {
 public:
  RieszVariant variant() const noexcept { return variant_; }
  Index size() const noexcept { return n_; }

  /// r ↦ T r.
  Vector apply(ConstSpan r) const;
  /// r ↦ T⁻¹ r.
  Vector apply_inverse(ConstSpan r) const;
  krylov::LinearOperator as_operator() const;
  /// T⁻¹ as a sparse matrix (identity for the identity map).
  const matkit::CsrMatrix& inverse_matrix() const noexcept { return tinv_; }

  friend RieszMap riesz(const StructuredMesh& mesh, RieszVariant variant, double nu);

 private:
  RieszVariant variant_ = RieszVariant::Identity;
  Index n_ = 0;
  matkit::CsrMatrix tinv_;
  std::shared_ptr<const matkit::CholeskyFactor> factor_;
};

RieszMap riesz(const StructuredMesh& mesh, RieszVariant variant, double nu);

}  // namespace normalkit::fem2d
