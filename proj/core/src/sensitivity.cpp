#include "prefsense/sensitivity.hpp"

#include <cmath>
#include <string>

namespace prefsense {
namespace {

void require_open_unit(double p, const char* name) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError(std::string(name) + " must lie strictly inside (0,1), got " +
                      std::to_string(p));
  }
}

void require_area_threshold(double m) {
  if (!(m > 1.0) || !std::isfinite(m)) throw UnsupportedThreshold(m);
}

double gamma0_expression(double m, double p_kj) {
  const double inv = 1.0 / p_kj;
  return 1.0 - (std::sqrt((inv - 1.0) / m) - 1.0) / (inv - 2.0);
}

}  // namespace

double bt_partial(double p_ik, double p_kj) {
  require_open_unit(p_ik, "p_ik");
  require_open_unit(p_kj, "p_kj");
  const double d = (1.0 - p_ik) * (1.0 - p_kj) + p_ik * p_kj;
  const double d2 = d * d;
  if (!(d2 > 0.0)) throw SingularityError("bt_partial: vanishing denominator", p_ik, p_kj);
  return p_kj * (1.0 - p_kj) / d2;
}

double general_partial(const LinkFunction& link, double p_ik, double p_kj) {
  require_open_unit(p_ik, "p_ik");
  require_open_unit(p_kj, "p_kj");
  const double x_ik = link.inverse(p_ik);
  const double x_kj = link.inverse(p_kj);
  const double inner = link.derivative(x_ik);
  if (!(inner > 0.0)) {
    throw SingularityError("general_partial: g'(g^-1(p_ik)) vanishes", p_ik, p_kj);
  }
  return link.derivative(x_ik + x_kj) / inner;
}

std::string_view to_string(BtRegionCase c) {
  switch (c) {
    case BtRegionCase::case1:
      return "case1";
    case BtRegionCase::case2:
      return "case2";
    case BtRegionCase::empty:
      return "empty";
  }
  return "unknown";
}

BtRegionSlice bt_region_slice(double m, double p_kj) {
  require_area_threshold(m);
  require_open_unit(p_kj, "p_kj");

  BtRegionSlice slice;
  slice.threshold = m;
  slice.p_kj = p_kj;
  if (std::abs(1.0 / p_kj - 2.0) >= 1e-6) slice.gamma0 = gamma0_expression(m, p_kj);

  if (p_kj < 1.0 / (1.0 + m)) {
    slice.region_case = BtRegionCase::case1;
    slice.p_ik_interval = {*slice.gamma0, 1.0};
  } else if (p_kj > m / (1.0 + m)) {
    slice.region_case = BtRegionCase::case2;
    slice.p_ik_interval = {0.0, *slice.gamma0};
  }
  return slice;
}

AreaResult bt_region_area(double m) {
  require_area_threshold(m);
  const double root = std::sqrt(m);
  const double area =
      0.5 * std::log((m - 1.0) / (m + 1.0)) + std::log((root + 1.0) / (root - 1.0)) / (2.0 * root);
  return {area, AreaMethod::proposition1};
}

PlSensitivityContext pl_context(const RatioMatrix& ratios, std::size_t u, std::size_t v) {
  const std::size_t k = ratios.size();
  if (!(u < v && v < k)) {
    throw DomainError("pl_context needs tuple positions u < v < K (0-based)");
  }
  ratios.validate();

  PlSensitivityContext ctx;
  ctx.k = k;
  ctx.u = u;
  ctx.v = v;
  ctx.ratios = ratios;

  ctx.alpha = 1.0;
  for (std::size_t t = u + 1; t < k; ++t) {
    if (t != v) ctx.alpha += ratios(u, t);
  }
  ctx.beta = 1.0;
  for (std::size_t l = 0; l + 1 < k; ++l) {
    if (l == u) continue;
    double denom = 1.0;
    for (std::size_t m = l + 1; m < k; ++m) denom += ratios(l, m);
    ctx.beta /= denom;
  }
  return ctx;
}

PlSensitivityContext pl_context(const ScoredOptionSet& options, const KTuplePreference& omega,
                                std::size_t u, std::size_t v) {
  return pl_context(pl_ratios(omega, options), u, v);
}

PlSensitivityContext pl_context(double alpha, double beta) {
  if (!(alpha >= 1.0) || !std::isfinite(alpha)) throw DomainError("alpha must be >= 1");
  if (!(beta > 0.0 && beta <= 1.0)) throw DomainError("beta must lie in (0,1]");
  PlSensitivityContext ctx;
  ctx.k = 0;
  ctx.alpha = alpha;
  ctx.beta = beta;
  return ctx;
}

PlPartials pl_partials(double p_uv, double p_vu, const PlSensitivityContext& ctx) {
  require_open_unit(p_uv, "p_uv");
  require_open_unit(p_vu, "p_vu");
  const double q = ctx.alpha * p_uv + p_vu;
  const double q2 = q * q;
  if (!(q2 > 0.0)) throw SingularityError("pl_partials: vanishing denominator", p_uv, p_vu);
  return {ctx.beta * p_vu / q2, -ctx.beta * p_uv / q2};
}

PlRegionBounds pl_region_uv(double m, const PlSensitivityContext& ctx, double p_uv) {
  require_area_threshold(m);
  require_open_unit(p_uv, "p_uv");
  const double a = ctx.alpha;
  const double b = ctx.beta;

  PlRegionBounds out;
  out.fixed_limit = b / (4.0 * a * m);
  out.center = (b - 2.0 * a * m * p_uv) / (2.0 * m);
  const double disc = b * (b - 4.0 * a * m * p_uv);
  if (p_uv < out.fixed_limit && disc > 0.0) {
    out.half_width = std::sqrt(disc) / (2.0 * m);
    const double hi = out.center + out.half_width;
    // The roots multiply to (alpha p_uv)^2; dividing avoids cancellation in
    // center - half_width for small p_uv.
    const double lo = (a * p_uv) * (a * p_uv) / hi;
    out.interval = {lo, hi};
  }
  return out;
}

PlRegionBounds pl_region_vu(double m, const PlSensitivityContext& ctx, double p_vu) {
  require_area_threshold(m);
  require_open_unit(p_vu, "p_vu");
  const double a = ctx.alpha;
  const double b = ctx.beta;

  PlRegionBounds out;
  out.fixed_limit = b / (4.0 * a * m);
  out.center = (b - 2.0 * a * m * p_vu) / (2.0 * a * a * m);
  const double disc = b * (b - 4.0 * a * m * p_vu);
  if (p_vu < out.fixed_limit && disc > 0.0) {
    out.half_width = std::sqrt(disc) / (2.0 * a * a * m);
    const double hi = out.center + out.half_width;
    const double lo = p_vu * p_vu / (a * a * hi);
    out.interval = {lo, hi};
  }
  return out;
}

AreaResult pl_region_area(double m, const PlSensitivityContext& ctx, PlAxis which) {
  require_area_threshold(m);
  const double a = ctx.alpha;
  const double b2 = ctx.beta * ctx.beta;
  if (which == PlAxis::uv) return {b2 / (6.0 * a * m * m), AreaMethod::proposition2_uv};
  return {b2 / (6.0 * a * a * a * m * m), AreaMethod::proposition2_vu};
}

Theorem2Check theorem2_check(double m, const PlSensitivityContext& ctx) {
  Theorem2Check out;
  out.bt_area = bt_region_area(m).closed_form;
  out.pl_area = pl_region_area(m, ctx, PlAxis::uv).closed_form;
  out.lower_bound = 1.0 / (6.0 * m * m);
  out.holds = out.bt_area > out.pl_area;
  out.bound_holds = out.bt_area > out.lower_bound;
  return out;
}

Theorem1Witness theorem1_witness(const LinkFunction& link, double m, double delta) {
  if (!(m > 0.0) || !std::isfinite(m)) throw DomainError("witness needs M > 0");
  if (!(delta > 0.0) || !std::isfinite(delta)) throw DomainError("witness needs delta > 0");
  const double slope_at_delta = link.derivative(delta);
  if (!(slope_at_delta > 0.0)) throw DomainError("witness needs g'(delta) > 0");
  const double eps = slope_at_delta / m;

  // x0 with g'(x) < eps for every x > x0. Both supported links have g'
  // decreasing on [0, inf), so x0 is the positive root of g'(x) = eps (or 0
  // when eps already exceeds g'(0)).
  double x0 = 0.0;
  if (link.derivative(0.0) >= eps) {
    double hi = 1.0;
    while (link.derivative(hi) >= eps && hi < 1e3) hi *= 2.0;
    double lo = 0.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (link.derivative(mid) >= eps ? lo : hi) = mid;
    }
    x0 = hi;
  }

  constexpr int kMaxSteps = 200;
  constexpr double kCeiling = 1.0 - 1e-12;
  double p_ik = 0.9;
  for (int step = 0; step < kMaxSteps && p_ik <= kCeiling; ++step) {
    const double x_ik = link.inverse(p_ik);
    if (link.derivative(x_ik) < eps) {
      const double p_kj = link.value(link.inverse(1.0 - p_ik) + delta);
      if (p_kj > 0.0 && p_kj < 1.0) {
        const double deriv = general_partial(link, p_ik, p_kj);
        if (deriv > m) return {link.value(x0), p_ik, p_kj, deriv, step};
      }
    }
    p_ik = 1.0 - (1.0 - p_ik) / 2.0;
  }
  throw WitnessNotFound("no witness for M = " + std::to_string(m) + " before p_ik reached 1 - 1e-12 (" +
                        std::string(to_string(link.family())) + " link)");
}

}  // namespace prefsense
