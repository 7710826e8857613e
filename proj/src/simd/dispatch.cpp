#include <atomic>
#include <cmath>
#include <cstdlib>
#include <string>

#include "normalkit/simd/kernels.hpp"

namespace normalkit::simd {
namespace {

bool cpu_has_avx2() {
#if (defined(__x86_64__) || defined(_M_X64)) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* initial_table() {
  if (const char* env = std::getenv("NORMALKIT_SIMD"); env != nullptr && *env != '\0') {
    return &kernels(parse_backend(env));
  }
  return cpu_has_avx2() ? &avx2_kernels() : &scalar_kernels();
}

std::atomic<const KernelTable*>& slot() {
  static std::atomic<const KernelTable*> table{initial_table()};
  return table;
}

}  // namespace

bool backend_available(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return true;
    case Backend::Avx2:
      return cpu_has_avx2();
  }
  return false;
}

const KernelTable& kernels(Backend b) {
  if (!backend_available(b)) {
    throw ConfigError("SIMD backend not supported on this CPU");
  }
  return b == Backend::Avx2 ? avx2_kernels() : scalar_kernels();
}

const KernelTable& active() { return *slot().load(std::memory_order_acquire); }

void set_active(Backend b) { slot().store(&kernels(b), std::memory_order_release); }

Backend parse_backend(std::string_view name) {
  if (name == "scalar") return Backend::Scalar;
  if (name == "avx2") return Backend::Avx2;
  throw ConfigError("unknown SIMD backend '" + std::string(name) + "' (expected scalar|avx2)");
}

double dot(ConstSpan x, ConstSpan y) {
  require_size(y.size(), x.size(), "dot");
  return active().dot(x.data(), y.data(), x.size());
}

double nrm2(ConstSpan x) { return std::sqrt(active().dot(x.data(), x.data(), x.size())); }

void axpy(double a, ConstSpan x, MutSpan y) {
  require_size(y.size(), x.size(), "axpy");
  active().axpy(a, x.data(), y.data(), x.size());
}

void xpay(ConstSpan x, double a, MutSpan y) {
  require_size(y.size(), x.size(), "xpay");
  active().xpay(x.data(), a, y.data(), x.size());
}

void scal(double a, MutSpan x) { active().scal(a, x.data(), x.size()); }

}  // namespace normalkit::simd
