#pragma once

#include <functional>

#include "normalkit/core.hpp"
#include "normalkit/matkit/tridiagonal.hpp"

namespace normalkit::fd1d {

/// −ν u″ + β u′ = f on (a, b) with u(a) = ua, u(b) = ub, discretized on n
/// interior nodes with step h = (b − a)/(n + 1).
struct Problem1D {
  double nu = 1.0;
  double beta = 1.0;
  double a = 0.0;
  double b = 1.0;
  double ua = 0.0;
  double ub = 1.0;
  Index n = 10;
  /// Source term; empty means f ≡ 0.
  std::function<double(double)> f;

  double h() const { return (b - a) / static_cast<double>(n + 1); }
  /// Node x_j = a + j·h for j = 1..n, as a 0-based vector.
  Vector nodes() const;
  /// Throws ConfigError for n < 2, ν < 0 or b ≤ a.
  void validate() const;
};

struct System1D {
  matkit::Tridiagonal matrix;
  Vector rhs;
};

/// tridiag(−ν/h² − β/2h, 2ν/h², −ν/h² + β/2h), boundary values lifted into
/// the first and last rows.
System1D assemble_centered(const Problem1D& p);

/// tridiag(−ν/h² − β/h, 2ν/h² + β/h, −ν/h²). Requires β ≥ 0.
System1D assemble_upwind(const Problem1D& p);

/// The pure-advection factor P = tridiag(−β/h, β/h, 0). Requires β > 0.
matkit::Tridiagonal advection_prec(const Problem1D& p);

}  // namespace normalkit::fd1d
