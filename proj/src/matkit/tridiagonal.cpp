#include "normalkit/matkit/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "normalkit/matkit/csr.hpp"

namespace normalkit::matkit {

namespace {

bool finite(const Vector& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

Tridiagonal::Tridiagonal(Vector sub, Vector diag, Vector super)
    : sub_(std::move(sub)), diag_(std::move(diag)), super_(std::move(super)) {
  const std::size_t off = diag_.empty() ? 0 : diag_.size() - 1;
  require_size(sub_.size(), off, "Tridiagonal sub");
  require_size(super_.size(), off, "Tridiagonal super");
  if (!finite(sub_) || !finite(diag_) || !finite(super_)) {
    throw Error("Tridiagonal: non-finite entry");
  }
}

Tridiagonal Tridiagonal::constant(Index n, double sub, double diag, double super) {
  if (n < 1) throw DimensionError("Tridiagonal::constant: n must be positive");
  const auto un = static_cast<std::size_t>(n);
  return Tridiagonal(Vector(un - 1, sub), Vector(un, diag), Vector(un - 1, super));
}

void Tridiagonal::apply(ConstSpan x, MutSpan y) const {
  const std::size_t n = diag_.size();
  require_size(x.size(), n, "Tridiagonal::apply x");
  require_size(y.size(), n, "Tridiagonal::apply y");
  if (n == 0) return;
  if (n == 1) {
    y[0] = diag_[0] * x[0];
    return;
  }
  y[0] = diag_[0] * x[0] + super_[0] * x[1];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    y[i] = sub_[i - 1] * x[i - 1] + diag_[i] * x[i] + super_[i] * x[i + 1];
  }
  y[n - 1] = sub_[n - 2] * x[n - 2] + diag_[n - 1] * x[n - 1];
}

void Tridiagonal::apply_transpose(ConstSpan x, MutSpan y) const { transpose().apply(x, y); }

Vector Tridiagonal::apply(ConstSpan x) const {
  Vector y(diag_.size());
  apply(x, y);
  return y;
}

Vector Tridiagonal::apply_transpose(ConstSpan x) const {
  Vector y(diag_.size());
  apply_transpose(x, y);
  return y;
}

double Tridiagonal::norm_inf() const {
  double m = 0.0;
  const std::size_t n = diag_.size();
  for (std::size_t i = 0; i < n; ++i) {
    double s = std::abs(diag_[i]);
    if (i > 0) s += std::abs(sub_[i - 1]);
    if (i + 1 < n) s += std::abs(super_[i]);
    m = std::max(m, s);
  }
  return m;
}

DenseMatrix Tridiagonal::to_dense() const {
  const Index n = size();
  DenseMatrix d(n, n);
  for (Index i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    d(i, i) = diag_[ui];
    if (i > 0) d(i, i - 1) = sub_[ui - 1];
    if (i + 1 < n) d(i, i + 1) = super_[ui];
  }
  return d;
}

CsrMatrix Tridiagonal::to_csr() const {
  const Index n = size();
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(3 * n));
  for (Index i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    if (i > 0) t.push_back({i, i - 1, sub_[ui - 1]});
    t.push_back({i, i, diag_[ui]});
    if (i + 1 < n) t.push_back({i, i + 1, super_[ui]});
  }
  return CsrMatrix::from_triplets(n, n, t);
}

Vector thomas_solve(const Tridiagonal& t, ConstSpan b) {
  const std::size_t n = static_cast<std::size_t>(t.size());
  require_size(b.size(), n, "thomas_solve");
  const double tol = 1e-14 * std::max(t.norm_inf(), kNormFloor);
  const auto& a = t.sub();
  const auto& d = t.diag();
  const auto& c = t.super();
  Vector cp(n);
  Vector x(n);
  double piv = d.empty() ? 0.0 : d[0];
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) piv = d[i] - a[i - 1] * cp[i - 1];
    if (!(std::abs(piv) > tol)) {
      throw FactorizationError("thomas_solve: pivot breakdown at index " + std::to_string(i),
                               static_cast<Index>(i), piv);
    }
    cp[i] = i + 1 < n ? c[i] / piv : 0.0;
    x[i] = (b[i] - (i > 0 ? a[i - 1] * x[i - 1] : 0.0)) / piv;
  }
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= cp[i] * x[i + 1];
  return x;
}

}  // namespace normalkit::matkit
