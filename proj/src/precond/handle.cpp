#include "normalkit/precond/handle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "normalkit/simd/kernels.hpp"

namespace normalkit::precond {

PreconditionerHandle::PreconditionerHandle(Index size, ApplyFn apply_inverse,
                                           SymmetryCertificate certificate, std::string description)
    : size_(size),
      apply_(std::make_shared<const ApplyFn>(std::move(apply_inverse))),
      certificate_(certificate),
      description_(std::move(description)) {}

PreconditionerHandle PreconditionerHandle::identity(Index n) {
  return PreconditionerHandle(
      n, [](ConstSpan r, MutSpan z) { std::copy(r.begin(), r.end(), z.begin()); },
      SymmetryCertificate::ExactlySymmetric, "identity");
}

void PreconditionerHandle::apply_inverse(ConstSpan r, MutSpan z) const {
  require_size(r.size(), static_cast<std::size_t>(size_), "PreconditionerHandle r");
  require_size(z.size(), static_cast<std::size_t>(size_), "PreconditionerHandle z");
  (*apply_)(r, z);
}

Vector PreconditionerHandle::apply_inverse(ConstSpan r) const {
  Vector z(static_cast<std::size_t>(size_));
  apply_inverse(r, z);
  return z;
}

SpdProbeResult spd_probe(const PreconditionerHandle& g, int probes, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist;
  const auto n = static_cast<std::size_t>(g.size());
  Vector u(n), v(n);
  SpdProbeResult out;
  out.min_rayleigh = std::numeric_limits<double>::infinity();
  for (int p = 0; p < probes; ++p) {
    for (double& x : u) x = dist(rng);
    for (double& x : v) x = dist(rng);
    const Vector gu = g.apply_inverse(u);
    const Vector gv = g.apply_inverse(v);
    const double lhs = simd::dot(gu, v);
    const double rhs = simd::dot(u, gv);
    const double scale = simd::nrm2(gu) * simd::nrm2(v) + simd::nrm2(u) * simd::nrm2(gv);
    out.symmetry_defect = std::max(out.symmetry_defect, std::abs(lhs - rhs) / std::max(scale, kNormFloor));
    out.min_rayleigh = std::min(out.min_rayleigh, simd::dot(gu, u) / simd::dot(u, u));
  }
  return out;
}

}  // namespace normalkit::precond
