#include "normalkit/krylov/operator.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "normalkit/simd/kernels.hpp"

namespace normalkit::krylov {

LinearOperator::LinearOperator(Index rows, Index cols, ApplyFn apply, ApplyFn apply_transpose)
    : rows_(rows),
      cols_(cols),
      apply_(std::make_shared<const ApplyFn>(std::move(apply))),
      apply_t_(std::make_shared<const ApplyFn>(std::move(apply_transpose))) {
  if (rows < 0 || cols < 0) throw DimensionError("LinearOperator: negative dimension");
}

LinearOperator LinearOperator::from(matkit::CsrMatrix a) {
  auto m = std::make_shared<const matkit::CsrMatrix>(std::move(a));
  return LinearOperator(
      m->rows(), m->cols(), [m](ConstSpan x, MutSpan y) { m->apply(x, y); },
      [m](ConstSpan x, MutSpan y) { m->apply_transpose(x, y); });
}

LinearOperator LinearOperator::from(matkit::DenseMatrix a) {
  auto m = std::make_shared<const matkit::DenseMatrix>(std::move(a));
  return LinearOperator(
      m->rows(), m->cols(), [m](ConstSpan x, MutSpan y) { m->apply(x, y); },
      [m](ConstSpan x, MutSpan y) { m->apply_transpose(x, y); });
}

LinearOperator LinearOperator::from(matkit::Tridiagonal a) {
  auto m = std::make_shared<const matkit::Tridiagonal>(std::move(a));
  return LinearOperator(
      m->size(), m->size(), [m](ConstSpan x, MutSpan y) { m->apply(x, y); },
      [m](ConstSpan x, MutSpan y) { m->apply_transpose(x, y); });
}

LinearOperator LinearOperator::identity(Index n) {
  auto copy = [](ConstSpan x, MutSpan y) { std::copy(x.begin(), x.end(), y.begin()); };
  return LinearOperator(n, n, copy, copy);
}

LinearOperator LinearOperator::diagonal(Vector d) {
  const auto n = static_cast<Index>(d.size());
  auto dd = std::make_shared<const Vector>(std::move(d));
  auto f = [dd](ConstSpan x, MutSpan y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = (*dd)[i] * x[i];
  };
  return LinearOperator(n, n, f, f);
}

void LinearOperator::apply(ConstSpan x, MutSpan y) const {
  require_size(x.size(), static_cast<std::size_t>(cols_), "LinearOperator::apply x");
  require_size(y.size(), static_cast<std::size_t>(rows_), "LinearOperator::apply y");
  (*apply_)(x, y);
}

void LinearOperator::apply_transpose(ConstSpan x, MutSpan y) const {
  require_size(x.size(), static_cast<std::size_t>(rows_), "LinearOperator::apply_transpose x");
  require_size(y.size(), static_cast<std::size_t>(cols_), "LinearOperator::apply_transpose y");
  (*apply_t_)(x, y);
}

Vector LinearOperator::apply(ConstSpan x) const {
  Vector y(static_cast<std::size_t>(rows_));
  apply(x, y);
  return y;
}

Vector LinearOperator::apply_transpose(ConstSpan x) const {
  Vector y(static_cast<std::size_t>(cols_));
  apply_transpose(x, y);
  return y;
}

LinearOperator LinearOperator::transpose() const {
  LinearOperator t = *this;
  std::swap(t.rows_, t.cols_);
  std::swap(t.apply_, t.apply_t_);
  return t;
}

matkit::DenseMatrix LinearOperator::to_dense() const {
  matkit::DenseMatrix d(rows_, cols_);
  Vector e(static_cast<std::size_t>(cols_), 0.0);
  Vector col(static_cast<std::size_t>(rows_));
  for (Index j = 0; j < cols_; ++j) {
    e[static_cast<std::size_t>(j)] = 1.0;
    apply(e, col);
    for (Index i = 0; i < rows_; ++i) d(i, j) = col[static_cast<std::size_t>(i)];
    e[static_cast<std::size_t>(j)] = 0.0;
  }
  return d;
}

LinearOperator product(const LinearOperator& a, const LinearOperator& b) {
  if (a.cols() != b.rows()) throw DimensionError("product: inner dimension mismatch");
  return LinearOperator(
      a.rows(), b.cols(),
      [a, b](ConstSpan x, MutSpan y) {
        Vector t(static_cast<std::size_t>(b.rows()));
        b.apply(x, t);
        a.apply(t, y);
      },
      [a, b](ConstSpan x, MutSpan y) {
        Vector t(static_cast<std::size_t>(a.cols()));
        a.apply_transpose(x, t);
        b.apply_transpose(t, y);
      });
}

LinearOperator sum(const LinearOperator& a, const LinearOperator& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("sum: shape mismatch");
  return LinearOperator(
      a.rows(), a.cols(),
      [a, b](ConstSpan x, MutSpan y) {
        Vector t(y.size());
        a.apply(x, y);
        b.apply(x, t);
        simd::axpy(1.0, t, y);
      },
      [a, b](ConstSpan x, MutSpan y) {
        Vector t(y.size());
        a.apply_transpose(x, y);
        b.apply_transpose(x, t);
        simd::axpy(1.0, t, y);
      });
}

LinearOperator scaled(double s, const LinearOperator& a) {
  return LinearOperator(
      a.rows(), a.cols(),
      [a, s](ConstSpan x, MutSpan y) {
        a.apply(x, y);
        simd::scal(s, y);
      },
      [a, s](ConstSpan x, MutSpan y) {
        a.apply_transpose(x, y);
        simd::scal(s, y);
      });
}

LinearOperator gram(const LinearOperator& a, const LinearOperator& t) {
  return product(a.transpose(), product(t, a));
}

double adjoint_defect(const LinearOperator& a, int probes, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  double worst = 0.0;
  Vector x(static_cast<std::size_t>(a.cols())), y(static_cast<std::size_t>(a.rows()));
  for (int p = 0; p < probes; ++p) {
    for (double& v : x) v = g(rng);
    for (double& v : y) v = g(rng);
    const Vector ax = a.apply(x);
    const Vector aty = a.apply_transpose(y);
    const double lhs = simd::dot(ax, y);
    const double rhs = simd::dot(x, aty);
    const double scale = std::max(simd::nrm2(ax) * simd::nrm2(y), simd::nrm2(x) * simd::nrm2(aty));
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(scale, kNormFloor));
  }
  return worst;
}

}  // namespace normalkit::krylov
