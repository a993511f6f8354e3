#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

#include "prefsense/link_function.hpp"
#include "prefsense/preference_models.hpp"
#include "prefsense/probability.hpp"

namespace prefsense {

/// Open interval (lo, hi).
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool empty() const { return !(lo < hi); }
  bool contains(double x) const { return lo < x && x < hi; }
  double width() const { return empty() ? 0.0 : hi - lo; }
};

// ---------------------------------------------------------------------------
// Bradley-Terry
// ---------------------------------------------------------------------------

/// d p_ij / d p_ik for the Bradley-Terry composition:
///   p_kj (1 - p_kj) / (p_ik + p_kj - 2 p_ik p_kj - 1)^2.
/// The denominator is evaluated as ((1-p_ik)(1-p_kj) + p_ik p_kj)^2, the same
/// polynomial without cancellation. Throws SingularityError if it vanishes.
double bt_partial(double p_ik, double p_kj);

/// d p_ij / d p_ik for a general link, by the chain rule:
///   g'(g^{-1}(p_ik) + g^{-1}(p_kj)) / g'(g^{-1}(p_ik)).
double general_partial(const LinkFunction& link, double p_ik, double p_kj);

enum class BtRegionCase { case1, case2, empty };

std::string_view to_string(BtRegionCase c);

/// Horizontal slice of the BT M-sensitive region at fixed p_kj.
struct BtRegionSlice {
  double threshold = 0.0;
  double p_kj = 0.0;
  BtRegionCase region_case = BtRegionCase::empty;
  /// Boundary p_ik = gamma0. Absent where the expression has its pole
  /// (p_kj = 1/2); the slice is always empty there.
  std::optional<double> gamma0;
  /// p_ik interval where |d p_ij / d p_ik| > M; empty when no case applies.
  Interval p_ik_interval;
};

/// Case 1: p_kj < 1/(1+M), p_ik in (gamma0, 1).
/// Case 2: p_kj > M/(1+M), p_ik in (0, gamma0).
/// Throws UnsupportedThreshold for M <= 1.
BtRegionSlice bt_region_slice(double m, double p_kj);

enum class AreaMethod { proposition1, proposition2_uv, proposition2_vu };

struct AreaResult {
  double closed_form = 0.0;
  AreaMethod method = AreaMethod::proposition1;
};

/// Area of the BT M-sensitive region in the unit square:
///   1/2 ln((M-1)/(M+1)) + 1/(2 sqrt M) ln((sqrt M + 1)/(sqrt M - 1)).
AreaResult bt_region_area(double m);

// ---------------------------------------------------------------------------
// Plackett-Luce
// ---------------------------------------------------------------------------

/// Constants that fold every ratio not involving the (u,v) swap into the
/// PL probability: p_omega = beta * p_uv / (alpha p_uv + p_vu).
/// Positions u < v are 0-based tuple positions.
struct PlSensitivityContext {
  std::size_t k = 2;
  std::size_t u = 0;
  std::size_t v = 1;
  double alpha = 1.0;
  double beta = 1.0;
  RatioMatrix ratios{2};
};

/// alpha = 1 + sum_{t > u, t != v} ratio(u,t);
/// beta  = prod_{l != u, l < K-1} 1 / (1 + sum_{m > l} ratio(l,m)).
PlSensitivityContext pl_context(const ScoredOptionSet& options, const KTuplePreference& omega,
                                std::size_t u, std::size_t v);

/// Same constants computed from an explicit ratio matrix.
PlSensitivityContext pl_context(const RatioMatrix& ratios, std::size_t u, std::size_t v);

/// A context carrying only (alpha, beta), for formula-level sweeps.
PlSensitivityContext pl_context(double alpha, double beta);

struct PlPartials {
  double d_uv = 0.0;  ///< d p_omega / d p_uv  =  beta p_vu / (alpha p_uv + p_vu)^2
  double d_vu = 0.0;  ///< d p_omega / d p_vu  = -beta p_uv / (alpha p_uv + p_vu)^2
};

PlPartials pl_partials(double p_uv, double p_vu, const PlSensitivityContext& ctx);

/// Bounds of the PL M-sensitive region along one axis at a fixed value of
/// the other. `center` and `half_width` are gamma1/gamma2 (uv case) or
/// eta1/eta2 (vu case).
struct PlRegionBounds {
  double center = 0.0;
  double half_width = 0.0;
  /// Upper end of the fixed coordinate's admissible range, beta / (4 alpha M).
  double fixed_limit = 0.0;
  Interval interval;
};

/// Region of |d p_omega / d p_uv| > M along p_vu, at fixed p_uv.
PlRegionBounds pl_region_uv(double m, const PlSensitivityContext& ctx, double p_uv);

/// Region of |d p_omega / d p_vu| > M along p_uv, at fixed p_vu.
PlRegionBounds pl_region_vu(double m, const PlSensitivityContext& ctx, double p_vu);

enum class PlAxis { uv, vu };

/// uv: beta^2 / (6 alpha M^2);  vu: beta^2 / (6 alpha^3 M^2).
AreaResult pl_region_area(double m, const PlSensitivityContext& ctx, PlAxis which);

struct Theorem2Check {
  double bt_area = 0.0;
  double pl_area = 0.0;
  double lower_bound = 0.0;  ///< 1 / (6 M^2)
  bool holds = false;        ///< bt_area > pl_area
  bool bound_holds = false;  ///< bt_area > 1 / (6 M^2)
};

/// Compares the BT and K-tuple PL sensitive areas at threshold M.
Theorem2Check theorem2_check(double m, const PlSensitivityContext& ctx);

struct Theorem1Witness {
  double p0 = 0.0;  ///< every p_ik in (p0, 1) on the witness curve is M-sensitive
  double p_ik = 0.0;
  double p_kj = 0.0;
  double derivative = 0.0;
  int steps = 0;
};

/// Constructs a point where d p_ij / d p_ik > M for an arbitrary link:
/// p_kj = g(g^{-1}(1 - p_ik) + delta) pins g'(...) at g'(delta), and p_ik is
/// pushed towards 1 (1 - p_ik halves per step from 0.9) until
/// g'(g^{-1}(p_ik)) < g'(delta) / M. Throws WitnessNotFound when p_ik would
/// pass 1 - 1e-12.
Theorem1Witness theorem1_witness(const LinkFunction& link, double m, double delta = 1.0);

}  // namespace prefsense
