#pragma once

// Data-parallel inner loops shared by every solver and factorization.
//
// Each kernel exists as a portable scalar reference implementation and as an
// AVX2+FMA variant. The active table is chosen once at first use from the CPU
// feature bits; NORMALKIT_SIMD=scalar|avx2 overrides the choice. Results
// between backends agree to rounding (reductions are reassociated), and each
// backend is deterministic on its own.

#include <cstddef>
#include <string_view>

#include "normalkit/core.hpp"

namespace normalkit::simd {

enum class Backend { Scalar, Avx2 };

struct KernelTable {
  Backend backend;
  const char* name;
  double (*dot)(const double* x, const double* y, std::size_t n);
  // y += a*x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // y = x + a*y
  void (*xpay)(const double* x, double a, double* y, std::size_t n);
  // x *= a
  void (*scal)(double a, double* x, std::size_t n);
  // y = A*x for a CSR matrix with `rows` rows
  void (*csr_spmv)(std::size_t rows, const Index* row_ptr, const Index* col_idx,
                   const double* values, const double* x, double* y);
};

const KernelTable& scalar_kernels();
/// Only callable when backend_available(Backend::Avx2).
const KernelTable& avx2_kernels();

bool backend_available(Backend b);
const KernelTable& kernels(Backend b);

/// The process-wide active table.
const KernelTable& active();
/// Switch the active table (tests and benchmarks). Throws ConfigError if the
/// backend is not supported on this CPU.
void set_active(Backend b);
Backend parse_backend(std::string_view name);

// Convenience wrappers over the active table.
double dot(ConstSpan x, ConstSpan y);
double nrm2(ConstSpan x);
void axpy(double a, ConstSpan x, MutSpan y);
void xpay(ConstSpan x, double a, MutSpan y);
void scal(double a, MutSpan x);

}  // namespace normalkit::simd
