#include "normalkit/precond/factor.hpp"

#include <algorithm>
#include <memory>

namespace normalkit::precond {

namespace {

void copy_into(const Vector& v, MutSpan out) { std::copy(v.begin(), v.end(), out.begin()); }

}  // namespace

FactorSolves factor_solves(const matkit::Tridiagonal& p) {
  auto fwd = std::make_shared<const matkit::Tridiagonal>(p);
  auto bwd = std::make_shared<const matkit::Tridiagonal>(p.transpose());
  return {p.size(), [fwd](ConstSpan r, MutSpan z) { copy_into(matkit::thomas_solve(*fwd, r), z); },
          [bwd](ConstSpan r, MutSpan z) { copy_into(matkit::thomas_solve(*bwd, r), z); },
          "tridiagonal"};
}

FactorSolves factor_solves(const matkit::UpperBand2& r) {
  auto m = std::make_shared<const matkit::UpperBand2>(r);
  return {r.size(), [m](ConstSpan x, MutSpan z) { copy_into(m->solve(x), z); },
          [m](ConstSpan x, MutSpan z) { copy_into(m->solve_transpose(x), z); }, "banded R"};
}

FactorSolves factor_solves(const matkit::DenseMatrix& p) {
  auto lu = std::make_shared<const matkit::DenseLu>(p);
  return {p.rows(), [lu](ConstSpan x, MutSpan z) { copy_into(lu->solve(x), z); },
          [lu](ConstSpan x, MutSpan z) { copy_into(lu->solve_transpose(x), z); }, "dense LU"};
}

FactorSolves factor_solves(const matkit::BandedLuFactor& lu) {
  auto f = std::make_shared<const matkit::BandedLuFactor>(lu);
  return {lu.size(), [f](ConstSpan x, MutSpan z) { copy_into(f->solve(x), z); },
          [f](ConstSpan x, MutSpan z) { copy_into(f->solve_transpose(x), z); }, "banded LU"};
}

FactorSolves upper_triangular_solves(const matkit::DenseMatrix& r) {
  if (r.rows() != r.cols()) throw DimensionError("upper_triangular_solves: R must be square");
  auto m = std::make_shared<const matkit::DenseMatrix>(r);
  return {r.rows(), [m](ConstSpan x, MutSpan z) { copy_into(matkit::upper_solve(*m, x), z); },
          [m](ConstSpan x, MutSpan z) { copy_into(matkit::upper_transpose_solve(*m, x), z); },
          "dense R"};
}

krylov::LinearOperator inverse_operator(const FactorSolves& p) {
  return krylov::LinearOperator(p.size, p.size, p.solve, p.solve_transpose);
}

PreconditionerHandle from_factor(const FactorSolves& p, PreconditionerHandle::ApplyFn tinv) {
  if (!p.solve || !p.solve_transpose) throw ConfigError("from_factor: both solves are required");
  const auto n = static_cast<std::size_t>(p.size);
  std::string desc = "P⁻¹" + std::string(tinv ? "T⁻¹" : "") + "P⁻ᵀ (" + p.description + ")";
  return PreconditionerHandle(
      p.size,
      [p, tinv, n](ConstSpan r, MutSpan z) {
        Vector y(n);
        p.solve_transpose(r, y);
        if (tinv) {
          Vector w(n);
          tinv(y, w);
          y.swap(w);
        }
        p.solve(y, z);
      },
      SymmetryCertificate::ExactlySymmetric, std::move(desc));
}

}  // namespace normalkit::precond
