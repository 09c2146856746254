#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace dmflow {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The analytic map does not exist for the requested network regime.
class UnsupportedRegimeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid scenario or simulation configuration (CFL, schema, topology).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Time series too short for the requested warmup and window.
class InsufficientDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parameter comparisons at regime boundaries. Capacities and proportions are
// O(1), so an absolute tolerance is enough to absorb rounding such as
// 1 - 2/2.5 != 0.2.
inline constexpr double kBoundaryTol = 1e-12;

inline bool near(double a, double b, double tol = kBoundaryTol) {
  return std::abs(a - b) <= tol;
}
inline bool definitely_less(double a, double b, double tol = kBoundaryTol) {
  return a < b - tol;
}
inline bool less_or_near(double a, double b, double tol = kBoundaryTol) {
  return a <= b + tol;
}

}  // namespace dmflow
