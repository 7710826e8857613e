#include "normalkit/fd1d/problem.hpp"

namespace normalkit::fd1d {

namespace {

Vector source(const Problem1D& p) {
  Vector rhs(static_cast<std::size_t>(p.n), 0.0);
  if (p.f) {
    const Vector x = p.nodes();
    for (std::size_t j = 0; j < rhs.size(); ++j) rhs[j] = p.f(x[j]);
  }
  return rhs;
}

System1D build(const Problem1D& p, double sub, double diag, double super) {
  System1D s{matkit::Tridiagonal::constant(p.n, sub, diag, super), source(p)};
  s.rhs.front() -= sub * p.ua;
  s.rhs.back() -= super * p.ub;
  return s;
}

}  // namespace

Vector Problem1D::nodes() const {
  Vector x(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) x[static_cast<std::size_t>(j)] = a + static_cast<double>(j + 1) * h();
  return x;
}

void Problem1D::validate() const {
  if (n < 2) throw ConfigError("Problem1D: n must be at least 2");
  if (nu < 0.0) throw ConfigError("Problem1D: nu must be nonnegative");
  if (!(b > a)) throw ConfigError("Problem1D: empty interval");
}

System1D assemble_centered(const Problem1D& p) {
  p.validate();
  const double h = p.h();
  const double d = p.nu / (h * h);
  const double c = p.beta / (2.0 * h);
  return build(p, -d - c, 2.0 * d, -d + c);
}

System1D assemble_upwind(const Problem1D& p) {
  p.validate();
  if (p.beta < 0.0) throw ConfigError("assemble_upwind: negative wind is not supported");
  const double h = p.h();
  const double d = p.nu / (h * h);
  const double c = p.beta / h;
  return build(p, -d - c, 2.0 * d + c, -d);
}

matkit::Tridiagonal advection_prec(const Problem1D& p) {
  p.validate();
  if (!(p.beta > 0.0)) throw ConfigError("advection_prec: beta must be positive");
  const double c = p.beta / p.h();
  return matkit::Tridiagonal::constant(p.n, -c, c, 0.0);
}

}  // namespace normalkit::fd1d
