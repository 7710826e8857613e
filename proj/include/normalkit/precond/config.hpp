#pragma once

#include <map>
#include <string>

#include "normalkit/core.hpp"

namespace normalkit::precond {

/// A parsed preconditioner string such as `qr-r`, `factor:trid`,
/// `inner-cg:tol=1e-10` or `gmg:levels=4,omega=1.0,smooth=2`.
struct PrecondSpec {
  std::string kind;
  /// Bare argument after the colon (`trid` in `factor:trid`).
  std::string variant;
  std::map<std::string, std::string> options;

  double number(const std::string& key, double fallback) const;
  Index integer(const std::string& key, Index fallback) const;
  std::string to_string() const;
};

/// Throws ConfigError on unknown kinds, unknown option keys or malformed values.
PrecondSpec parse_precond(const std::string& text);

}  // namespace normalkit::precond
