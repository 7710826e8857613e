#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>

#include "normalkit/core.hpp"
#include "normalkit/krylov/operator.hpp"
#include "normalkit/precond/handle.hpp"

namespace normalkit::krylov {

using precond::PreconditionerHandle;

enum class Monitor {
  /// Stop on the true residual ‖Ax_k − b‖₂ (recomputed every step).
  TrueResidual,
  /// Stop on the preconditioned residual: ‖G⁻¹r_k‖₂ for CG (r_k the normal
  /// equation residual), ‖P⁻¹(b − Ax_k)‖₂ for left-preconditioned GMRES.
  PreconditionedResidual,
};

enum class Side { Right, Left };

enum class Termination { ResidualTol, MaxIter, Breakdown, Diverged };

const char* to_string(Termination t);
const char* to_string(Monitor m);
const char* to_string(Side s);

struct KrylovConfig {
  double tol_abs = 1e-5;
  Index max_iter = 1000;
  Monitor monitor = Monitor::TrueResidual;
  /// Stop as Diverged once the monitored norm exceeds this multiple of its
  /// initial value. Zero disables the check.
  double divergence_factor = 0.0;
  /// Initial guess; empty means zero.
  Vector x0;
  /// GMRES only: preconditioning side and basis-size cap (0 means max_iter).
  Side side = Side::Right;
  Index basis_cap = 0;

  void validate() const;
};

struct SolveReport {
  Index iterations = 0;
  bool converged = false;
  Termination termination = Termination::MaxIter;
  /// ‖Ax_k − b‖₂ for k = 0..iterations. GMRES records its least-squares
  /// residual instead: the true residual for right preconditioning, the
  /// preconditioned one for left.
  Vector residual_history;
  /// The quantity the stopping test was applied to, same length.
  Vector monitor_history;
  /// ‖Ax_k − b‖_T when a weight T was supplied to cgne.
  Vector t_norm_history;
  Vector solution;
  /// ‖Ax − b‖₂ of the returned solution, recomputed explicitly.
  double final_residual = 0.0;
  double wall_time = 0.0;
  std::string message;
};

/// Called after every iteration with the step index and current iterate.
using IterateObserver = std::function<void(Index, ConstSpan)>;
/// Returns ‖Ax − b‖₂ for the outer problem; used by cgne on top of pcg.
using ResidualFn = std::function<double(ConstSpan)>;

/// Preconditioned CG for SPD B. Without `true_residual`, residual_history
/// holds ‖rhs − Bx_k‖₂.
SolveReport pcg(const LinearOperator& b, const PreconditionerHandle& ginv, ConstSpan rhs,
                const KrylovConfig& cfg, const ResidualFn& true_residual = {},
                const IterateObserver& observer = {});

/// CG on AᵀTA x = AᵀTb, preconditioned by G⁻¹. T defaults to the identity.
SolveReport cgne(const LinearOperator& a, const PreconditionerHandle& ginv, ConstSpan b,
                 const KrylovConfig& cfg, const IterateObserver& observer = {});
SolveReport cgne(const LinearOperator& a, const LinearOperator& t, const PreconditionerHandle& ginv,
                 ConstSpan b, const KrylovConfig& cfg, const IterateObserver& observer = {});

/// LSQR on min ‖AP⁻¹y − b‖ with x = P⁻¹y. `pinv` applies P⁻¹ and its transpose
/// applies P⁻ᵀ.
SolveReport lsqr(const LinearOperator& a, const LinearOperator& pinv, ConstSpan b,
                 const KrylovConfig& cfg);

/// Full (unrestarted) GMRES with modified Gram–Schmidt Arnoldi. `pinv` applies
/// P⁻¹ on the side chosen in cfg.
SolveReport gmres(const LinearOperator& a, const LinearOperator& pinv, ConstSpan b,
                  const KrylovConfig& cfg);

/// Solver closure for refinement: returns an approximate solution of A d = r.
using InnerSolve = std::function<SolveReport(ConstSpan)>;

/// x ← x + solve(b − Ax), `steps` times from x = 0. The history concatenates
/// the inner histories, each continuing from the current residual.
SolveReport iterative_refinement(const InnerSolve& solve, const LinearOperator& a, ConstSpan b,
                                 Index steps);

/// CSV with header `step,res`, one row per history entry.
void write_history_csv(std::ostream& out, const SolveReport& report);
void write_history_csv(const std::string& path, const SolveReport& report);

/// One JSON object per line: a config/summary record followed by one record
/// per step.
void write_jsonl_log(std::ostream& out, const SolveReport& report, const std::string& solver,
                     const KrylovConfig& cfg, const std::string& extra_json = "{}");

}  // namespace normalkit::krylov
