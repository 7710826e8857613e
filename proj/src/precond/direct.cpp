#include "normalkit/precond/direct.hpp"

#include <algorithm>
#include <memory>

#include "normalkit/krylov/solvers.hpp"
#include "normalkit/matkit/banded.hpp"
#include "normalkit/simd/kernels.hpp"

namespace normalkit::precond {

PreconditionerHandle from_spd_matrix(const matkit::CsrMatrix& g, DirectMethod method) {
  if (g.rows() != g.cols()) throw DimensionError("from_spd_matrix: G must be square");
  if (method == DirectMethod::Cholesky) {
    auto f = std::make_shared<const matkit::CholeskyFactor>(matkit::cholesky(g));
    return PreconditionerHandle(
        g.rows(),
        [f](ConstSpan r, MutSpan z) {
          const Vector x = f->solve(r);
          std::copy(x.begin(), x.end(), z.begin());
        },
        SymmetryCertificate::ExactlySymmetric, "direct:cholesky");
  }
  auto f = std::make_shared<const matkit::BandedLuFactor>(matkit::banded_lu(g));
  return PreconditionerHandle(
      g.rows(),
      [f](ConstSpan r, MutSpan z) {
        const Vector x = f->solve(r);
        std::copy(x.begin(), x.end(), z.begin());
      },
      SymmetryCertificate::ExactlySymmetric, "direct:banded-lu");
}

PreconditionerHandle from_spd_operator(const krylov::LinearOperator& g, double inner_tol,
                                       Index inner_max) {
  if (g.rows() != g.cols()) throw DimensionError("from_spd_operator: G must be square");
  if (!(inner_tol > 0.0) || inner_max < 1) throw ConfigError("from_spd_operator: bad inner settings");
  const auto ident = PreconditionerHandle::identity(g.rows());
  return PreconditionerHandle(
      g.rows(),
      [g, ident, inner_tol, inner_max](ConstSpan r, MutSpan z) {
        const double rn = simd::nrm2(r);
        if (rn == 0.0) {
          std::fill(z.begin(), z.end(), 0.0);
          return;
        }
        krylov::KrylovConfig cfg;
        cfg.tol_abs = inner_tol * rn;
        cfg.max_iter = inner_max;
        const auto rep = krylov::pcg(g, ident, r, cfg);
        if (!rep.converged) {
          throw ConvergenceError("inner CG did not reach the requested tolerance (" +
                                     std::string(krylov::to_string(rep.termination)) + ")",
                                 rep.residual_history.back() / rn);
        }
        std::copy(rep.solution.begin(), rep.solution.end(), z.begin());
      },
      SymmetryCertificate::SymmetricByConstruction, "inner-cg");
}

}  // namespace normalkit::precond
