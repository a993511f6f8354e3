#include "prefsense/link_function.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace prefsense {
namespace {

void require_finite(double x) {
  if (!std::isfinite(x)) throw DomainError("link argument must be finite");
}

double logistic_value(double x) {
  // Split on sign so exp never overflows.
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double logistic_derivative(double x) {
  const double e = std::exp(-std::abs(x));
  const double d = 1.0 + e;
  return e / (d * d);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_pdf(double x) {
  static const double kNorm = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  return kNorm * std::exp(-0.5 * x * x);
}

// Acklam's rational approximation to the normal quantile, |rel err| < 1.2e-9.
double probit_seed(double q) {
  static constexpr std::array<double, 6> a{-3.969683028665376e+01, 2.209460984245205e+02,
                                           -2.759285104469687e+02, 1.383577518672690e+02,
                                           -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr std::array<double, 5> b{-5.447609879822406e+01, 1.615858368580409e+02,
                                           -1.556989798598866e+02, 6.680131188771972e+01,
                                           -1.328068155288572e+01};
  static constexpr std::array<double, 6> c{-7.784894002430293e-03, -3.223964580411365e-01,
                                           -2.400758277161838e+00, -2.549732539343734e+00,
                                           4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr std::array<double, 4> d{7.784695709041462e-03, 3.224671290700398e-01,
                                           2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double kLow = 0.02425;

  if (q < kLow) {
    const double t = std::sqrt(-2.0 * std::log(q));
    return (((((c[0] * t + c[1]) * t + c[2]) * t + c[3]) * t + c[4]) * t + c[5]) /
           ((((d[0] * t + d[1]) * t + d[2]) * t + d[3]) * t + 1.0);
  }
  const double r = q - 0.5;
  const double s = r * r;
  return (((((a[0] * s + a[1]) * s + a[2]) * s + a[3]) * s + a[4]) * s + a[5]) * r /
         (((((b[0] * s + b[1]) * s + b[2]) * s + b[3]) * s + b[4]) * s + 1.0);
}

// Solves Phi(x) = q for q in (0, 0.5]; the lower tail keeps full relative
// precision in both q and the residual.
double probit_lower_inverse(double q) {
  constexpr int kNewtonIterations = 50;
  double x = probit_seed(q);
  for (int it = 0; it < kNewtonIterations; ++it) {
    const double residual = normal_cdf(x) - q;
    if (std::abs(residual) <= 1e-12 * q) return x;
    const double pdf = normal_pdf(x);
    if (!(pdf > 0.0)) break;
    const double step = residual / pdf;
    x -= step;
    if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x))) {
      return x;
    }
  }

  // Bisection fallback: Phi is monotone and Phi(-40) underflows below any
  // representable q of interest.
  double lo = -40.0;
  double hi = 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (normal_cdf(mid) < q) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::string_view to_string(LinkFamily family) {
  switch (family) {
    case LinkFamily::logistic:
      return "logistic";
    case LinkFamily::probit:
      return "probit";
  }
  return "unknown";
}

LinkFamily parse_link_family(std::string_view name) {
  if (name == "logistic" || name == "bt") return LinkFamily::logistic;
  if (name == "probit" || name == "thurstone") return LinkFamily::probit;
  throw DomainError("unknown link family '" + std::string(name) + "'");
}

double LinkFunction::value(double x) const {
  require_finite(x);
  return family_ == LinkFamily::logistic ? logistic_value(x) : normal_cdf(x);
}

double LinkFunction::derivative(double x) const {
  require_finite(x);
  return family_ == LinkFamily::logistic ? logistic_derivative(x) : normal_pdf(x);
}

double LinkFunction::inverse(double p) const {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("link inverse needs p strictly inside (0,1), got " + std::to_string(p));
  }
  if (family_ == LinkFamily::logistic) return std::log(p) - std::log1p(-p);
  if (p <= 0.5) return probit_lower_inverse(p);
  return -probit_lower_inverse(1.0 - p);
}

}  // namespace prefsense
