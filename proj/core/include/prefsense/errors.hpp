#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace prefsense {

/// Argument outside the mathematical domain of an operation (non-finite
/// input, probability not strictly inside (0,1), bad index, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A derivative whose denominator vanishes at the requested point.
/// Carries the point so callers can distinguish "undefined" from "huge".
class SingularityError : public std::runtime_error {
 public:
  SingularityError(const std::string& what, double a, double b)
      : std::runtime_error(what), point_{a, b} {}

  std::pair<double, double> point() const { return point_; }

 private:
  std::pair<double, double> point_;
};

/// Region and area formulas are only characterized for M > 1.
class UnsupportedThreshold : public std::domain_error {
 public:
  explicit UnsupportedThreshold(double m)
      : std::domain_error("sensitivity threshold M must be > 1, got " + std::to_string(m)),
        m_(m) {}

  double threshold() const { return m_; }

 private:
  double m_;
};

/// Structurally invalid input data (inconsistent ratio matrix, unknown option
/// names in a dataset, malformed files).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Comparison graph is not connected; the MLE is not unique.
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Enumeration refused because K! would be too large.
class SizeGuardError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// The constructive scan ran out of floating-point headroom before 1.
class WitnessNotFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File I/O failure; message includes the offending path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace prefsense
