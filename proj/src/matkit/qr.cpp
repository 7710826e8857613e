#include "normalkit/matkit/qr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "normalkit/simd/kernels.hpp"

namespace normalkit::matkit {

namespace {

Vector reversed(ConstSpan v) { return Vector(v.rbegin(), v.rend()); }

double max_orthogonality_defect(const DenseMatrix& q) {
  DenseMatrix g = transpose_multiply(q, q);
  for (Index i = 0; i < g.rows(); ++i) g(i, i) -= 1.0;
  return g.max_abs();
}

}  // namespace

UpperBand2::UpperBand2(Vector d0, Vector d1, Vector d2)
    : d0_(std::move(d0)), d1_(std::move(d1)), d2_(std::move(d2)) {
  const std::size_t n = d0_.size();
  require_size(d1_.size(), n > 0 ? n - 1 : 0, "UpperBand2 super1");
  require_size(d2_.size(), n > 1 ? n - 2 : 0, "UpperBand2 super2");
}

Vector UpperBand2::apply(ConstSpan x) const {
  const std::size_t n = d0_.size();
  require_size(x.size(), n, "UpperBand2::apply");
  Vector y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = d0_[i] * x[i];
    if (i + 1 < n) s += d1_[i] * x[i + 1];
    if (i + 2 < n) s += d2_[i] * x[i + 2];
    y[i] = s;
  }
  return y;
}

Vector UpperBand2::apply_transpose(ConstSpan x) const {
  const std::size_t n = d0_.size();
  require_size(x.size(), n, "UpperBand2::apply_transpose");
  Vector y(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = d0_[j] * x[j];
    if (j >= 1) s += d1_[j - 1] * x[j - 1];
    if (j >= 2) s += d2_[j - 2] * x[j - 2];
    y[j] = s;
  }
  return y;
}

Vector UpperBand2::solve(ConstSpan b) const {
  const std::size_t n = d0_.size();
  require_size(b.size(), n, "UpperBand2::solve");
  Vector x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    if (i + 1 < n) s -= d1_[i] * x[i + 1];
    if (i + 2 < n) s -= d2_[i] * x[i + 2];
    x[i] = s / d0_[i];
  }
  return x;
}

Vector UpperBand2::solve_transpose(ConstSpan b) const {
  const std::size_t n = d0_.size();
  require_size(b.size(), n, "UpperBand2::solve_transpose");
  Vector x(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = b[j];
    if (j >= 1) s -= d1_[j - 1] * x[j - 1];
    if (j >= 2) s -= d2_[j - 2] * x[j - 2];
    x[j] = s / d0_[j];
  }
  return x;
}

DenseMatrix UpperBand2::to_dense() const {
  const Index n = size();
  DenseMatrix d(n, n);
  for (Index i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    d(i, i) = d0_[ui];
    if (i + 1 < n) d(i, i + 1) = d1_[ui];
    if (i + 2 < n) d(i, i + 2) = d2_[ui];
  }
  return d;
}

TridiagonalQr::TridiagonalQr(const Tridiagonal& a) {
  const std::size_t n = static_cast<std::size_t>(a.size());
  if (n == 0) throw DimensionError("qr: empty matrix");
  const auto& sub = a.sub();
  const auto& dg = a.diag();
  const auto& sup = a.super();
  const double scale = std::max(
      std::sqrt(simd::dot(sub, sub) + simd::dot(dg, dg) + simd::dot(sup, sup)), kNormFloor);
  c_.assign(n - 1, 1.0);
  s_.assign(n - 1, 0.0);
  Vector d0(n), d1(n - 1), d2(n > 1 ? n - 2 : 0);
  // Current row k restricted to columns k, k+1, k+2.
  double a0 = dg[0];
  double a1 = n > 1 ? sup[0] : 0.0;
  double a2 = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double b0 = sub[k];
    const double b1 = dg[k + 1];
    const double b2 = k + 2 < n ? sup[k + 1] : 0.0;
    const double r = std::hypot(a0, b0);
    const double c = r > 0.0 ? a0 / r : 1.0;
    const double s = r > 0.0 ? b0 / r : 0.0;
    c_[k] = c;
    s_[k] = s;
    d0[k] = r;
    d1[k] = c * a1 + s * b1;
    if (k + 2 < n) d2[k] = c * a2 + s * b2;
    a0 = -s * a1 + c * b1;
    a1 = -s * a2 + c * b2;
    a2 = 0.0;
  }
  d0[n - 1] = a0;
  sign_.assign(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (d0[i] < 0.0) {
      sign_[i] = -1.0;
      d0[i] = -d0[i];
      if (i + 1 < n) d1[i] = -d1[i];
      if (i + 2 < n) d2[i] = -d2[i];
    }
    if (d0[i] < 1e-14 * scale) {
      throw FactorizationError("qr: rank deficient at column " + std::to_string(i),
                               static_cast<Index>(i), d0[i]);
    }
  }
  r_ = UpperBand2(std::move(d0), std::move(d1), std::move(d2));
}

Vector TridiagonalQr::apply_qt(ConstSpan x) const {
  const std::size_t n = sign_.size();
  require_size(x.size(), n, "TridiagonalQr::apply_qt");
  Vector y(x.begin(), x.end());
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double u = y[k];
    const double v = y[k + 1];
    y[k] = c_[k] * u + s_[k] * v;
    y[k + 1] = -s_[k] * u + c_[k] * v;
  }
  for (std::size_t i = 0; i < n; ++i) y[i] *= sign_[i];
  return y;
}

Vector TridiagonalQr::apply_q(ConstSpan x) const {
  const std::size_t n = sign_.size();
  require_size(x.size(), n, "TridiagonalQr::apply_q");
  Vector y(x.begin(), x.end());
  for (std::size_t i = 0; i < n; ++i) y[i] *= sign_[i];
  for (std::size_t k = n - 1; k-- > 0;) {
    const double u = y[k];
    const double v = y[k + 1];
    y[k] = c_[k] * u - s_[k] * v;
    y[k + 1] = s_[k] * u + c_[k] * v;
  }
  return y;
}

DenseMatrix TridiagonalQr::q_dense() const {
  const Index n = size();
  DenseMatrix q(n, n);
  Vector e(static_cast<std::size_t>(n), 0.0);
  for (Index j = 0; j < n; ++j) {
    e[static_cast<std::size_t>(j)] = 1.0;
    const Vector col = apply_q(e);
    for (Index i = 0; i < n; ++i) q(i, j) = col[static_cast<std::size_t>(i)];
    e[static_cast<std::size_t>(j)] = 0.0;
  }
  return q;
}

TridiagonalRq::TridiagonalRq(const Tridiagonal& a)
    : flipped_(Tridiagonal(reversed(a.sub()), reversed(a.diag()), reversed(a.super()))) {
  const auto& r1 = flipped_.r();
  r_ = UpperBand2(reversed(r1.diag()), reversed(r1.super1()), reversed(r1.super2()));
}

Vector TridiagonalRq::apply_q(ConstSpan x) const { return reversed(flipped_.apply_qt(reversed(x))); }

Vector TridiagonalRq::apply_qt(ConstSpan x) const { return reversed(flipped_.apply_q(reversed(x))); }

DenseMatrix TridiagonalRq::q_dense() const {
  const Index n = size();
  DenseMatrix q(n, n);
  Vector e(static_cast<std::size_t>(n), 0.0);
  for (Index j = 0; j < n; ++j) {
    e[static_cast<std::size_t>(j)] = 1.0;
    const Vector col = apply_q(e);
    for (Index i = 0; i < n; ++i) q(i, j) = col[static_cast<std::size_t>(i)];
    e[static_cast<std::size_t>(j)] = 0.0;
  }
  return q;
}

QrFactor qr(const DenseMatrix& a) {
  if (!a.square()) throw DimensionError("qr: matrix not square");
  const Index n = a.rows();
  const auto& kt = simd::active();
  const double scale = std::max(a.frobenius_norm(), kNormFloor);
  DenseMatrix r = a;
  std::vector<Vector> reflectors(static_cast<std::size_t>(n));
  Vector w(static_cast<std::size_t>(n));
  for (Index k = 0; k < n; ++k) {
    const auto m = static_cast<std::size_t>(n - k);
    Vector v(m);
    for (std::size_t i = 0; i < m; ++i) v[i] = r(k + static_cast<Index>(i), k);
    const double norm_x = simd::nrm2(v);
    if (norm_x < 1e-14 * scale) {
      throw FactorizationError("qr: rank deficient at column " + std::to_string(k), k, norm_x);
    }
    const double alpha = v[0] >= 0.0 ? -norm_x : norm_x;
    v[0] -= alpha;
    const double vn = simd::nrm2(v);
    if (vn > 0.0) simd::scal(1.0 / vn, v);
    // R[k:, k:] -= 2 v (vᵀ R[k:, k:])
    const auto cols = static_cast<std::size_t>(n - k);
    std::fill(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(cols), 0.0);
    for (std::size_t i = 0; i < m; ++i) kt.axpy(v[i], r.row(k + static_cast<Index>(i)).data() + k, w.data(), cols);
    for (std::size_t i = 0; i < m; ++i) {
      kt.axpy(-2.0 * v[i], w.data(), r.row(k + static_cast<Index>(i)).data() + k, cols);
    }
    for (std::size_t i = 1; i < m; ++i) r(k + static_cast<Index>(i), k) = 0.0;
    reflectors[static_cast<std::size_t>(k)] = std::move(v);
  }
  DenseMatrix q = DenseMatrix::identity(n);
  for (Index k = n - 1; k >= 0; --k) {
    const Vector& v = reflectors[static_cast<std::size_t>(k)];
    const auto cols = static_cast<std::size_t>(n - k);
    std::fill(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(cols), 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) kt.axpy(v[i], q.row(k + static_cast<Index>(i)).data() + k, w.data(), cols);
    for (std::size_t i = 0; i < v.size(); ++i) {
      kt.axpy(-2.0 * v[i], w.data(), q.row(k + static_cast<Index>(i)).data() + k, cols);
    }
  }
  for (Index k = 0; k < n; ++k) {
    if (r(k, k) < 0.0) {
      simd::scal(-1.0, r.row(k));
      for (Index i = 0; i < n; ++i) q(i, k) = -q(i, k);
    }
    if (r(k, k) < 1e-14 * scale) {
      throw FactorizationError("qr: rank deficient at column " + std::to_string(k), k, r(k, k));
    }
  }
  return {std::move(q), std::move(r)};
}

TridiagonalQr qr(const Tridiagonal& a) { return TridiagonalQr(a); }

RqFactor rq(const DenseMatrix& a) {
  if (!a.square()) throw DimensionError("rq: matrix not square");
  const Index n = a.rows();
  // B = Aᵀ·J, B = Q1·R1  ⇒  A = (J·R1ᵀ·J)(J·Q1ᵀ).
  DenseMatrix b(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) b(i, j) = a(n - 1 - j, i);
  const QrFactor f = qr(b);
  DenseMatrix r(n, n);
  DenseMatrix q(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      r(i, j) = f.r(n - 1 - j, n - 1 - i);
      q(i, j) = f.q(j, n - 1 - i);
    }
  }
  return {std::move(r), std::move(q)};
}

TridiagonalRq rq(const Tridiagonal& a) { return TridiagonalRq(a); }

PolarFactor polar(const DenseMatrix& a, double tol, int max_iter) {
  if (!a.square()) throw DimensionError("polar: matrix not square");
  DenseMatrix x = a;
  bool scaling = true;
  double defect = std::numeric_limits<double>::infinity();
  int it = 0;
  while (it < max_iter) {
    ++it;
    const DenseMatrix inv = DenseLu(x).inverse();
    double gamma = 1.0;
    if (scaling) gamma = std::sqrt(inv.frobenius_norm() / x.frobenius_norm());
    DenseMatrix next = inv.transpose();
    simd::scal(0.5 / gamma, next.data());
    simd::axpy(0.5 * gamma, x.data(), next.data());
    const double change = (next - x).frobenius_norm() / next.frobenius_norm();
    x = std::move(next);
    if (change < 1e-2) scaling = false;
    if (change < 1e-9) {
      defect = max_orthogonality_defect(x);
      if (defect < tol) break;
    }
  }
  if (!(defect < tol)) {
    defect = max_orthogonality_defect(x);
    if (!(defect < tol)) {
      throw ConvergenceError("polar: Newton iteration did not reach orthogonality", defect);
    }
  }
  DenseMatrix h = symmetric_part(transpose_multiply(x, a));
  return {std::move(x), std::move(h), it, defect};
}

}  // namespace normalkit::matkit
