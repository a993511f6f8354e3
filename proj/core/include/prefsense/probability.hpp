#pragma once

#include <cmath>
#include <string>

#include "prefsense/errors.hpp"

namespace prefsense {

/// A preference probability. Inputs are validated into the open interval
/// (0,1); model outputs that round to exactly 0 or 1 are kept but flagged
/// as saturated instead of being silently returned as a regular value.
class Probability {
 public:
  /// Validating constructor for caller-supplied values.
  static Probability checked(double p, const char* what = "probability") {
    if (!(p > 0.0 && p < 1.0)) {
      throw DomainError(std::string(what) + " must lie strictly inside (0,1), got " +
                        std::to_string(p));
    }
    return Probability(p, false);
  }

  /// Wraps a value computed by a model. Non-finite values are a bug upstream.
  static Probability from_model(double p) {
    if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
      throw DomainError("model produced a value outside [0,1]: " + std::to_string(p));
    }
    return Probability(p, p == 0.0 || p == 1.0);
  }

  double value() const { return value_; }
  bool saturated() const { return saturated_; }
  Probability complement() const { return from_model(1.0 - value_); }

  explicit operator double() const { return value_; }

 private:
  Probability(double p, bool saturated) : value_(p), saturated_(saturated) {}

  double value_;
  bool saturated_;
};

}  // namespace prefsense
