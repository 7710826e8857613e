#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace normalkit {

using Index = std::int64_t;
using Vector = std::vector<double>;
using ConstSpan = std::span<const double>;
using MutSpan = std::span<double>;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A factorization could not be completed (non-SPD pivot, singular matrix,
/// rank deficiency, non-convergence of an iterative factorization).
class FactorizationError : public Error {
 public:
  FactorizationError(const std::string& what, Index index = -1, double value = 0.0)
      : Error(what), index_(index), value_(value) {}
  Index index() const noexcept { return index_; }
  double value() const noexcept { return value_; }

 private:
  Index index_;
  double value_;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double achieved) : Error(what), achieved_(achieved) {}
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Absolute floor used when a tolerance is scaled by a norm that may be zero.
inline constexpr double kNormFloor = 1e-300;

inline void require_size(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw DimensionError(std::string(what) + ": expected length " + std::to_string(want) +
                         ", got " + std::to_string(got));
  }
}

}  // namespace normalkit
