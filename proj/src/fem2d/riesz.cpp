#include "normalkit/fem2d/riesz.hpp"

#include <algorithm>

#include "normalkit/fem2d/assembly.hpp"

namespace normalkit::fem2d {

RieszVariant riesz_from_name(const std::string& name) {
  if (name == "identity") return RieszVariant::Identity;
  if (name == "l2") return RieszVariant::L2;
  if (name == "h1") return RieszVariant::H1;
  throw ConfigError("unknown Riesz map '" + name + "' (expected identity, l2 or h1)");
}

const char* to_string(RieszVariant v) {
  switch (v) {
    case RieszVariant::Identity:
      return "identity";
    case RieszVariant::L2:
      return "l2";
    case RieszVariant::H1:
      return "h1";
  }
  return "?";
}

RieszMap riesz(const StructuredMesh& mesh, RieszVariant variant, double nu) {
  if (!(nu > 0.0)) throw ConfigError("riesz: nu must be positive");
  RieszMap t;
  t.variant_ = variant;
  t.n_ = mesh.num_interior();
  switch (variant) {
    case RieszVariant::Identity:
      t.tinv_ = matkit::CsrMatrix::identity(t.n_);
      return t;
    case RieszVariant::L2:
      t.tinv_ = assemble_mass(mesh);
      break;
    case RieszVariant::H1:
      t.tinv_ = matkit::scaled(assemble_stiffness(mesh), nu);
      break;
  }
  t.factor_ = std::make_shared<const matkit::CholeskyFactor>(matkit::cholesky(t.tinv_));
  return t;
}

Vector RieszMap::apply(ConstSpan r) const {
  require_size(r.size(), static_cast<std::size_t>(n_), "RieszMap::apply");
  if (!factor_) return Vector(r.begin(), r.end());
  return factor_->solve(r);
}

Vector RieszMap::apply_inverse(ConstSpan r) const {
  require_size(r.size(), static_cast<std::size_t>(n_), "RieszMap::apply_inverse");
  if (!factor_) return Vector(r.begin(), r.end());
  return tinv_.apply(r);
}

krylov::LinearOperator RieszMap::as_operator() const {
  auto self = std::make_shared<const RieszMap>(*this);
  auto f = [self](ConstSpan x, MutSpan y) {
    const Vector v = self->apply(x);
    std::copy(v.begin(), v.end(), y.begin());
  };
  return krylov::LinearOperator(n_, n_, f, f);
}

}  // namespace normalkit::fem2d
