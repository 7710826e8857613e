#include "normalkit/simd/kernels.hpp"

namespace normalkit::simd {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void xpay_scalar(const double* x, double a, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + a * y[i];
}

void scal_scalar(double a, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void csr_spmv_scalar(std::size_t rows, const Index* row_ptr, const Index* col_idx,
                     const double* values, const double* x, double* y) {
  for (std::size_t i = 0; i < rows; ++i) {
    double s = 0.0;
    for (Index k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += values[k] * x[col_idx[k]];
    y[i] = s;
  }
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{Backend::Scalar, "scalar",     &dot_scalar,     &axpy_scalar,
                                 &xpay_scalar,    &scal_scalar, &csr_spmv_scalar};
  return table;
}

}  // namespace normalkit::simd
