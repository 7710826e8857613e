#pragma once

// Independent reference implementations used as test oracles. These are kept
// deliberately naive so they share no code paths with the library.

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "normalkit/matkit/dense.hpp"

namespace testing_support {

using normalkit::Index;
using normalkit::Vector;
using normalkit::matkit::DenseMatrix;

inline DenseMatrix random_dense(Index rows, Index cols, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  DenseMatrix a(rows, cols);
  for (double& v : a.data()) v = u(rng);
  return a;
}

inline Vector random_vector(Index n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vector v(static_cast<std::size_t>(n));
  for (double& x : v) x = u(rng);
  return v;
}

inline double norm2(const Vector& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline double rel_diff(const Vector& a, const Vector& b) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return std::sqrt(num) / std::max(std::sqrt(den), 1e-300);
}

inline double frob(const DenseMatrix& a) {
  double s = 0.0;
  for (double v : a.data()) s += v * v;
  return std::sqrt(s);
}

inline DenseMatrix naive_product(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix c(a.rows(), b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < b.cols(); ++j) {
      double s = 0.0;
      for (Index k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  return c;
}

inline DenseMatrix naive_transpose(const DenseMatrix& a) {
  DenseMatrix t(a.cols(), a.rows());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

inline DenseMatrix naive_diff(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix c(a.rows(), a.cols());
  for (std::size_t k = 0; k < a.data().size(); ++k) c.data()[k] = a.data()[k] - b.data()[k];
  return c;
}

inline Vector naive_matvec(const DenseMatrix& a, const Vector& x) {
  Vector y(static_cast<std::size_t>(a.rows()), 0.0);
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) y[static_cast<std::size_t>(i)] += a(i, j) * x[static_cast<std::size_t>(j)];
  return y;
}

/// Gaussian elimination with complete pivoting.
inline Vector gauss_solve(DenseMatrix a, Vector b) {
  const Index n = a.rows();
  std::vector<Index> col(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) col[static_cast<std::size_t>(i)] = i;
  for (Index k = 0; k < n; ++k) {
    Index pr = k, pc = k;
    for (Index i = k; i < n; ++i)
      for (Index j = k; j < n; ++j)
        if (std::abs(a(i, j)) > std::abs(a(pr, pc))) {
          pr = i;
          pc = j;
        }
    for (Index j = 0; j < n; ++j) std::swap(a(k, j), a(pr, j));
    std::swap(b[static_cast<std::size_t>(k)], b[static_cast<std::size_t>(pr)]);
    for (Index i = 0; i < n; ++i) std::swap(a(i, k), a(i, pc));
    std::swap(col[static_cast<std::size_t>(k)], col[static_cast<std::size_t>(pc)]);
    for (Index i = k + 1; i < n; ++i) {
      const double l = a(i, k) / a(k, k);
      for (Index j = k; j < n; ++j) a(i, j) -= l * a(k, j);
      b[static_cast<std::size_t>(i)] -= l * b[static_cast<std::size_t>(k)];
    }
  }
  Vector y(static_cast<std::size_t>(n));
  for (Index i = n - 1; i >= 0; --i) {
    double s = b[static_cast<std::size_t>(i)];
    for (Index j = i + 1; j < n; ++j) s -= a(i, j) * y[static_cast<std::size_t>(j)];
    y[static_cast<std::size_t>(i)] = s / a(i, i);
  }
  Vector x(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) x[static_cast<std::size_t>(col[static_cast<std::size_t>(i)])] = y[static_cast<std::size_t>(i)];
  return x;
}

inline DenseMatrix naive_inverse(const DenseMatrix& a) {
  const Index n = a.rows();
  DenseMatrix inv(n, n);
  for (Index j = 0; j < n; ++j) {
    Vector e(static_cast<std::size_t>(n), 0.0);
    e[static_cast<std::size_t>(j)] = 1.0;
    const Vector col = gauss_solve(a, e);
    for (Index i = 0; i < n; ++i) inv(i, j) = col[static_cast<std::size_t>(i)];
  }
  return inv;
}

/// Cyclic Jacobi: eigenvalues and eigenvectors (columns of V) of a symmetric matrix.
inline std::pair<Vector, DenseMatrix> jacobi_eigen(DenseMatrix a) {
  const Index n = a.rows();
  DenseMatrix v = DenseMatrix::identity(n);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Index i = 0; i < n; ++i)
      for (Index j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    if (off < 1e-30 * std::max(frob(a) * frob(a), 1e-300)) break;
    for (Index p = 0; p < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (Index k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  Vector lambda(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) lambda[static_cast<std::size_t>(i)] = a(i, i);
  return {lambda, v};
}

/// Number of eigenvalues of symmetric S strictly below sigma, from the signs of
/// the LDLᵀ pivots of S − σI (Sylvester's law of inertia).
inline int count_below(const DenseMatrix& s, double sigma) {
  const Index n = s.rows();
  DenseMatrix a = s;
  for (Index i = 0; i < n; ++i) a(i, i) -= sigma;
  int neg = 0;
  for (Index k = 0; k < n; ++k) {
    double d = a(k, k);
    if (d == 0.0) d = 1e-300;
    if (d < 0.0) ++neg;
    for (Index i = k + 1; i < n; ++i) {
      const double l = a(i, k) / d;
      for (Index j = k + 1; j < n; ++j) a(i, j) -= l * a(k, j);
    }
  }
  return neg;
}

/// Lower Cholesky factor of symmetric S; NaN entries appear if S is not
/// positive definite.
inline DenseMatrix dense_cholesky(const DenseMatrix& s) {
  const Index n = s.rows();
  DenseMatrix l(n, n);
  for (Index j = 0; j < n; ++j) {
    double d = s(j, j);
    for (Index k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    l(j, j) = std::sqrt(d);
    for (Index i = j + 1; i < n; ++i) {
      double v = s(i, j);
      for (Index k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
      l(i, j) = v / l(j, j);
    }
  }
  return l;
}

}  // namespace testing_support
