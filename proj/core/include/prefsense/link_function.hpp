#pragma once

#include <string_view>

#include "prefsense/probability.hpp"

namespace prefsense {

enum class LinkFamily { logistic, probit };

std::string_view to_string(LinkFamily family);
LinkFamily parse_link_family(std::string_view name);

/// Pairwise link g mapping a score difference to a preference probability.
///
/// Both families are strictly increasing, satisfy g(x) + g(-x) = 1, tend to
/// 0 and 1 at -inf/+inf, and are continuously differentiable. Logistic gives
/// the Bradley-Terry model, probit the Thurstone (case V) model.
class LinkFunction {
 public:
  constexpr explicit LinkFunction(LinkFamily family) : family_(family) {}

  static constexpr LinkFunction logistic() { return LinkFunction(LinkFamily::logistic); }
  static constexpr LinkFunction probit() { return LinkFunction(LinkFamily::probit); }

  constexpr LinkFamily family() const { return family_; }

  /// g(x). Throws DomainError for non-finite x.
  double value(double x) const;

  /// g(x) wrapped as a model probability (saturation flagged).
  Probability evaluate(double x) const { return Probability::from_model(value(x)); }

  /// g'(x) >= 0. Throws DomainError for non-finite x.
  double derivative(double x) const;

  /// g^{-1}(p) for p strictly inside (0,1); never clamps.
  double inverse(double p) const;
  double inverse(Probability p) const { return inverse(p.value()); }

 private:
  LinkFamily family_;
};

}  // namespace prefsense
