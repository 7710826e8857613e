#pragma once

#include <functional>
#include <memory>
#include <string>

#include "normalkit/core.hpp"

namespace normalkit::precond {

enum class SymmetryCertificate {
  /// G⁻¹ is applied by an exact symmetric procedure (a factorization or a
  /// symmetric product of exact solves).
  ExactlySymmetric,
  /// Symmetric as an operator by construction, but realized approximately (a
  /// symmetrized V-cycle, an inner iterative solve).
  SymmetricByConstruction,
};

/// The contract every normal preconditioner satisfies: apply G⁻¹ for an SPD G.
class PreconditionerHandle {
 public:
  using ApplyFn = std::function<void(ConstSpan, MutSpan)>;

  PreconditionerHandle(Index size, ApplyFn apply_inverse, SymmetryCertificate certificate,
                       std::string description);

  static PreconditionerHandle identity(Index n);

  Index size() const noexcept { return size_; }
  SymmetryCertificate certificate() const noexcept { return certificate_; }
  const std::string& description() const noexcept { return description_; }

  void apply_inverse(ConstSpan r, MutSpan z) const;
  Vector apply_inverse(ConstSpan r) const;

 private:
  Index size_;
  std::shared_ptr<const ApplyFn> apply_;
  SymmetryCertificate certificate_;
  std::string description_;
};

struct SpdProbeResult {
  /// max |⟨G⁻¹u,v⟩ − ⟨u,G⁻¹v⟩| / (‖G⁻¹u‖‖v‖ + ‖u‖‖G⁻¹v‖) over the probes.
  double symmetry_defect = 0.0;
  /// min ⟨G⁻¹u,u⟩/‖u‖² over the probes.
  double min_rayleigh = 0.0;

  bool passed(double symmetry_tol = 1e-9) const {
    return symmetry_defect <= symmetry_tol && min_rayleigh > 0.0;
  }
};

/// Symmetry and positivity on `probes` random pairs.
SpdProbeResult spd_probe(const PreconditionerHandle& g, int probes = 32, unsigned seed = 7);

}  // namespace normalkit::precond
