#include "prefsense/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "prefsense/dataset.hpp"
#include "prefsense/fitting.hpp"
#include "prefsense/oracles.hpp"

namespace prefsense::verify {
namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail = what;
      pass = false;
    }
  }
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

Probability P(double p) { return Probability::checked(p); }

Outcome composition_examples(const SuiteOptions&) {
  Outcome o;
  const double a = bt_compose(P(0.9801), P(0.02)).value();
  const double b = bt_compose(P(0.9999), P(0.02)).value();
  o.require(std::abs(a - 0.5013) <= 1e-4, fmt("bt_compose(0.9801,0.02) = %.6f", a));
  o.require(std::abs(a - 0.50) <= 0.005, fmt("bt_compose(0.9801,0.02) = %.6f not ~0.50", a));
  o.require(std::abs(b - 0.9951) <= 1e-4, fmt("bt_compose(0.9999,0.02) = %.6f", b));
  o.detail = o.pass ? fmt("%.6f, %.6f", a, b) : o.detail;
  return o;
}

Outcome sensitivity_example(const SuiteOptions&) {
  Outcome o;
  const double d = bt_partial(0.99, 0.02);
  const BtRegionSlice s = bt_region_slice(20.0, 0.02);
  o.require(std::abs(d - 22.37) <= 0.01 && d > 20.0, fmt("bt_partial(0.99,0.02) = %.6f", d));
  o.require(s.gamma0 && std::abs(*s.gamma0 - 0.98823) <= 1e-5,
            fmt("gamma0 = %.8f", s.gamma0.value_or(NAN)));
  o.require(s.p_ik_interval.contains(0.99), "(0.99,0.02) not inside the M=20 region");
  o.detail = o.pass ? fmt("derivative %.6f, gamma0 %.8f", d, *s.gamma0) : o.detail;
  return o;
}

Outcome bt_area_vs_monte_carlo(const SuiteOptions& opt) {
  Outcome o;
  std::string detail;
  for (double m : {1.5, 2.0, 5.0, 10.0}) {
    const auto t0 = std::chrono::steady_clock::now();
    const double exact = bt_region_area(m).closed_form;
    const auto est = oracles::mc_area_bt(m, 1000000, opt.seed);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double rel = std::abs(est.value / exact - 1.0);
    o.require(rel <= 0.02, fmt("M=%g: relative error %.4f", m, rel));
    o.require(secs <= 5.0, fmt("M=%g took %.2f s", m, secs));
    detail += fmt(detail.empty() ? "M=%g %.3f%%" : ", M=%g %.3f%%", m, 100 * rel);
  }
  o.require(std::abs(bt_region_area(2.0).closed_form - 0.073919) <= 1e-6, "area(2) != 0.073919");
  if (o.pass) o.detail = detail;
  return o;
}

Outcome pl_area_exponent(const SuiteOptions&) {
  Outcome o;
  double worst = 0.0, closest_variant = INFINITY;
  for (double alpha : {1.01, 1.5}) {
    for (double beta : {0.99, 0.5}) {
      for (double m : {2.0, 5.0}) {
        const double q = oracles::quad_area_pl(m, alpha, beta, PlAxis::uv, 100000);
        const double closed = pl_region_area(m, pl_context(alpha, beta), PlAxis::uv).closed_form;
        const double variant = beta * beta / (6.0 * alpha * m);
        worst = std::max(worst, std::abs(q - closed));
        closest_variant = std::min(closest_variant, std::abs(q - variant));
        o.require(std::abs(q - closed) <= 1e-4,
                  fmt("alpha=%g beta=%g: quadrature off by %.3g", alpha, beta, std::abs(q - closed)));
        o.require(std::abs(q - variant) > 1e-3,
                  fmt("alpha=%g beta=%g: 1/M variant within %.3g", alpha, beta, std::abs(q - variant)));
      }
    }
  }
  if (o.pass) o.detail = fmt("max |quad - closed| %.2e, min |quad - 1/M variant| %.2e", worst, closest_variant);
  return o;
}

Outcome derivative_oracles(const SuiteOptions&) {
  Outcome o;
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  std::uniform_real_distribution<double> ua(1.0, 3.0);
  const auto logistic = LinkFunction::logistic();
  const auto probit = LinkFunction::probit();
  double worst = 0.0;
  const auto track = [&](double analytic, double fd, const char* name, double x, double y) {
    const double rel = std::abs(analytic / fd - 1.0);
    worst = std::max(worst, rel);
    o.require(rel <= 1e-5, std::string(name) + fmt(" at (%.6f, %.6f): rel %.3g", x, y, rel));
  };
  for (int n = 0; n < 1000; ++n) {
    const double x = u(gen), y = u(gen);
    track(bt_partial(x, y),
          oracles::finite_diff([y](double p) { return bt_compose(P(p), P(y)).value(); }, x),
          "bt_partial", x, y);
    for (const auto* link : {&logistic, &probit}) {
      track(general_partial(*link, x, y),
            oracles::finite_diff(
                [&](double p) { return compose_pairwise(*link, P(p), P(y)).value(); }, x),
            link == &logistic ? "general_partial[logistic]" : "general_partial[probit]", x, y);
    }
    const auto ctx = pl_context(ua(gen), u(gen));
    const auto f = [&](double a, double b) { return ctx.beta * a / (ctx.alpha * a + b); };
    const auto d = pl_partials(x, y, ctx);
    track(d.d_uv, oracles::finite_diff(f, x, y, 0), "pl_partials.d_uv", x, y);
    track(d.d_vu, oracles::finite_diff(f, x, y, 1), "pl_partials.d_vu", x, y);
  }
  if (o.pass) o.detail = fmt("worst relative error %.2e over 1000 points", worst);
  return o;
}

Outcome region_coherence(const SuiteOptions&) {
  Outcome o;
  std::mt19937_64 gen(6);
  std::uniform_real_distribution<double> u(1e-9, 1.0 - 1e-9);
  const auto ctx = pl_context(1.01, 0.99);
  const auto dist = [](double z, const Interval& iv) {
    return std::min(std::abs(z - iv.lo), std::abs(z - iv.hi));
  };
  // Region membership and |derivative| for each family; `gap` is the
  // distance from the region boundary along the scan coordinate.
  struct Probe {
    const char* name;
    std::function<void(double m, double x, double y, bool& inside, double& gap, double& d)> eval;
  };
  const std::vector<Probe> probes{
      {"bt", [&](double m, double x, double y, bool& in, double& gap, double& d) {
         const auto s = bt_region_slice(m, y);
         in = s.p_ik_interval.contains(x);
         gap = s.p_ik_interval.empty() ? INFINITY : dist(x, s.p_ik_interval);
         d = bt_partial(x, y);
       }},
      {"pl_uv", [&](double m, double x, double y, bool& in, double& gap, double& d) {
         const auto r = pl_region_uv(m, ctx, x);
         in = r.interval.contains(y);
         gap = r.interval.empty() ? INFINITY : dist(y, r.interval);
         d = std::abs(pl_partials(x, y, ctx).d_uv);
       }},
      {"pl_vu", [&](double m, double x, double y, bool& in, double& gap, double& d) {
         const auto r = pl_region_vu(m, ctx, y);
         in = r.interval.contains(x);
         gap = r.interval.empty() ? INFINITY : dist(x, r.interval);
         d = std::abs(pl_partials(x, y, ctx).d_vu);
       }},
  };
  for (double m : {1.01, 2.0, 3.0, 5.0, 10.0}) {
    for (const auto& probe : probes) {
      int inside = 0, outside = 0;
      for (long n = 0; n < 10000000 && (inside < 1000 || outside < 1000); ++n) {
        const double x = u(gen), y = u(gen);
        bool in = false;
        double gap = 0.0, d = 0.0;
        probe.eval(m, x, y, in, gap, d);
        if (in && inside < 1000) {
          ++inside;
          o.require(d > m, std::string(probe.name) + fmt(" M=%g: inside point (%.6f,%.6f) not sensitive", m, x, y));
        } else if (!in && gap >= 1e-3 && outside < 1000) {
          ++outside;
          o.require(d <= m, std::string(probe.name) + fmt(" M=%g: outside point (%.6f,%.6f) sensitive", m, x, y));
        }
      }
      o.require(inside == 1000 && outside == 1000,
                std::string(probe.name) + fmt(" M=%g: only %g inside / %g outside samples", m, inside, outside));
    }
  }
  if (o.pass) o.detail = "1000 inside + 1000 outside points per (family, M)";
  return o;
}

Outcome raster_transitions(const SuiteOptions& opt) {
  const std::size_t res = opt.quick ? 256 : 512;
  Outcome o;
  const auto thresholds = default_thresholds();
  const auto bt_ctx = pl_context(1.0, 1.0);
  const auto pl_ctx = pl_context(1.01, 0.99);
  std::size_t checked = 0;
  struct Job {
    const char* name;
    RasterGrid grid;
    RasterKind kind;
    const PlSensitivityContext* ctx;
  };
  const std::vector<Job> jobs{
      {"bt d/dp_ik", raster_bt(BtField::d_pik, thresholds, res), RasterKind::bt_d_pik, &bt_ctx},
      {"bt d/dp_kj", raster_bt(BtField::d_pkj, thresholds, res), RasterKind::bt_d_pkj, &bt_ctx},
      {"pl d/dp_uv", raster_pl(PlField::d_uv, 1.01, 0.99, thresholds, res), RasterKind::pl_d_uv, &pl_ctx},
      {"pl d/dp_vu", raster_pl(PlField::d_vu, 1.01, 0.99, thresholds, res), RasterKind::pl_d_vu, &pl_ctx},
  };
  for (const auto& job : jobs) {
    const auto report = check_transitions(job.grid, job.kind, *job.ctx);
    checked += report.checked;
    o.require(report.mismatches == 0, std::string(job.name) + ": " + std::to_string(report.mismatches) +
                                          " misplaced cells, first " + report.first_mismatch);
  }
  if (o.pass) o.detail = std::to_string(checked) + " cell/threshold pairs agree with the analytic boundaries";
  return o;
}

Outcome area_dominance(const SuiteOptions&) {
  Outcome o;
  int n = 0;
  for (double m : {1.01, 1.1, 2.0, 5.0, 10.0, 100.0}) {
    for (double alpha : {1.001, 1.5, 3.0}) {
      for (double beta : {0.999, 0.5, 0.1}) {
        const auto c = theorem2_check(m, pl_context(alpha, beta));
        o.require(c.holds, fmt("M=%g alpha=%g beta=%g: BT area <= PL area", m, alpha, beta));
        o.require(c.bound_holds, fmt("M=%g: BT area %.6g <= 1/(6M^2)", m, c.bt_area));
        ++n;
      }
    }
  }
  if (o.pass) o.detail = std::to_string(n) + " grid points";
  return o;
}

Outcome witness(const SuiteOptions&) {
  Outcome o;
  std::string detail;
  for (const auto& link : {LinkFunction::logistic(), LinkFunction::probit()}) {
    for (double m : {10.0, 100.0}) {
      const auto w = theorem1_witness(link, m);
      const double fd = oracles::finite_diff(
          [&](double p) { return compose_pairwise(link, P(p), P(w.p_kj)).value(); }, w.p_ik);
      o.require(fd > m, std::string(to_string(link.family())) + fmt(" M=%g: finite difference %.4g", m, fd));
      detail += (detail.empty() ? "" : ", ") + std::string(to_string(link.family())) + fmt(" M=%g: %.4g", m, fd);
    }
  }
  if (o.pass) o.detail = detail;
  return o;
}

Outcome measured_cross_check(const SuiteOptions&) {
  Outcome o;
  const double a = bt_compose(P(0.9993), P(0.0141)).value();
  const double b = bt_compose(P(0.9820), P(0.0141)).value();
  o.require(std::abs(a - 0.9533) <= 1e-4 && std::abs(a - 0.9526) <= 0.002, fmt("%.6f vs 0.9526", a));
  o.require(std::abs(b - 0.4382) <= 1e-4 && std::abs(b - 0.4378) <= 0.001, fmt("%.6f vs 0.4378", b));
  if (o.pass) o.detail = fmt("%.6f, %.6f", a, b);
  return o;
}

Outcome dataset_protocol(const SuiteOptions& opt) {
  Outcome o;
  dataset::DatasetSpec base;
  base.permutation = {"dog", "cat", "bird"};
  base.n_samples = 10000;
  base.seed = opt.seed;
  double worst = 0.0;
  auto specs = dataset::sweep(base);
  if (opt.quick) specs = {specs.front(), specs[10], specs.back()};
  for (const auto& spec : specs) {
    const auto samples = dataset::generate(spec);
    const auto report = dataset::empirical_check(samples, spec);
    for (int p = 0; p < 2; ++p) {
      worst = std::max(worst, std::abs(report.pairs[p].z));
      o.require(std::abs(report.pairs[p].z) <= 3.0,
                fmt("p23=%.2f pair %g: z = %.3f", spec.p23, p, report.pairs[p].z));
    }
    o.require(report.pairs[2].count == 0, fmt("p23=%.2f: %g top/bottom samples", spec.p23, report.pairs[2].count));
    o.require(samples.size() == spec.n_samples, "wrong sample count");
    o.require(dataset::to_jsonl(dataset::generate(spec)) == dataset::to_jsonl(samples),
              fmt("p23=%.2f: regeneration differs", spec.p23));
  }
  if (o.pass) o.detail = fmt("%g datasets, max |z| %.3f", static_cast<double>(specs.size()), worst);
  return o;
}

Outcome fitting_round_trip(const SuiteOptions& opt) {
  Outcome o;
  const std::vector<double> truth{1.0, 0.0, -1.0};
  std::mt19937_64 gen(opt.seed);
  PairwiseCounts counts(3);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = i + 1; j < 3; ++j) {
      std::binomial_distribution<std::uint64_t> draw(100000, bt_prob(truth[i], truth[j]).value());
      counts(i, j) = draw(gen);
      counts(j, i) = 100000 - counts(i, j);
    }
  }
  const auto fit = fit_bt(counts);
  double worst = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      worst = std::max(worst, std::abs(predict(fit, i, j).value() - bt_prob(truth[i], truth[j]).value()));
    }
  }
  o.require(fit.converged, "three-option fit did not converge");
  o.require(worst <= 0.01, fmt("pairwise error %.4f", worst));
  const auto two = fit_bt(PairwiseCounts(2, {0, 75, 25, 0}));
  const double gap = two.scores[0] - two.scores[1];
  o.require(std::abs(gap - std::log(3.0)) <= 1e-4, fmt("two-option gap %.8f", gap));
  if (o.pass) o.detail = fmt("max pairwise error %.5f, ln 3 error %.2e", worst, std::abs(gap - std::log(3.0)));
  return o;
}

Outcome bimodality(const SuiteOptions&) {
  Outcome o;
  for (double s2 : {0.5, 0.999}) {
    const int n = oracles::mode_count(s2, 10000);
    o.require(n == 1, fmt("sigma2=%g: %g modes", s2, n));
  }
  for (double s2 : {1.1, 2.0}) {
    const int n = oracles::mode_count(s2, 10000);
    o.require(n == 2, fmt("sigma2=%g: %g modes", s2, n));
  }
  if (o.pass) o.detail = "1,1,2,2 modes";
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  Outcome (*run)(const SuiteOptions&);
};

// Analytic M-sensitive interval along the scan line through the cell
// (i, j). Returns the interval and whether the scan runs along x.
Interval analytic_interval(RasterKind kind, double m, const PlSensitivityContext& ctx,
                                  double x, double y, bool& along_x) {
  switch (kind) {
    case RasterKind::bt_d_pik:
      along_x = true;
      return bt_region_slice(m, y).p_ik_interval;
    case RasterKind::bt_d_pkj:
      along_x = false;
      return bt_region_slice(m, x).p_ik_interval;
    case RasterKind::pl_d_uv:
      along_x = false;
      return pl_region_uv(m, ctx, x).interval;
    case RasterKind::pl_d_vu:
      along_x = true;
      return pl_region_vu(m, ctx, y).interval;
  }
  return {};
}

// Every cell whose center lies more than one cell width from the analytic
// boundary must carry the class implied by the region: class > t inside the
// region of threshold t, class <= t outside.
TransitionReport check_transitions_impl(const RasterGrid& grid, RasterKind kind,
                                          const PlSensitivityContext& ctx) {
  TransitionReport report;
  const double cell = 1.0 / static_cast<double>(grid.resolution);
  for (std::size_t t = 0; t < grid.thresholds.size(); ++t) {
    const double m = grid.thresholds[t];
    for (std::size_t j = 0; j < grid.resolution; ++j) {
      for (std::size_t i = 0; i < grid.resolution; ++i) {
        const double x = grid.x_center(i), y = grid.y_center(j);
        bool along_x = true;
        const Interval iv = analytic_interval(kind, m, ctx, x, y, along_x);
        const double z = along_x ? x : y;
        bool expected_above = false;
        if (!iv.empty()) {
          const double gap = std::min(std::abs(z - iv.lo), std::abs(z - iv.hi));
          if (gap <= cell) continue;
          expected_above = iv.contains(z);
        }
        ++report.checked;
        const bool above = grid.cell_class(i, j) > static_cast<int>(t);
        if (above != expected_above) {
          if (report.mismatches == 0) {
            report.first_mismatch = "M=" + std::to_string(m) + " cell (" + std::to_string(i) + "," +
                                    std::to_string(j) + ")";
          }
          ++report.mismatches;
        }
      }
    }
  }
  return report;
}

}  // namespace

TransitionReport check_transitions(const RasterGrid& grid, RasterKind kind,
                                   const PlSensitivityContext& ctx) {
  return check_transitions_impl(grid, kind, ctx);
}

std::vector<CriterionResult> run_suite(const SuiteOptions& options) {
  static const Criterion criteria[] = {
      {1, "composition examples", 1.0, composition_examples},
      {2, "sensitivity example", 1.0, sensitivity_example},
      {3, "BT area vs Monte Carlo", 20.0, bt_area_vs_monte_carlo},
      {4, "PL area exponent", 2.0, pl_area_exponent},
      {5, "derivative oracles", 1.0, derivative_oracles},
      {6, "region/derivative coherence", 2.0, region_coherence},
      {7, "raster transitions", 10.0, raster_transitions},
      {8, "BT area dominates PL area", 1.0, area_dominance},
      {9, "sensitivity witness", 1.0, witness},
      {10, "measured composition cross-check", 1.0, measured_cross_check},
      {11, "dataset protocol", 10.0, dataset_protocol},
      {12, "fitting round trip", 5.0, fitting_round_trip},
      {13, "logit-normal bimodality", 1.0, bimodality},
  };
  std::vector<CriterionResult> results;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run(options);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    CriterionResult r;
    r.id = c.id;
    r.name = c.name;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.budget_seconds = c.budget_s;
    r.pass = o.pass;
    r.detail = o.detail;
    if (r.pass && r.seconds > r.budget_seconds) {
      r.pass = false;
      r.detail = fmt("took %.2f s, budget %.0f s", r.seconds, r.budget_seconds);
    }
    results.push_back(std::move(r));
  }
  return results;
}

std::string format_result(const CriterionResult& r) {
  char head[96];
  std::snprintf(head, sizeof head, "%s [%2d] %-34s %7.3f s  ", r.pass ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.seconds);
  return head + r.detail;
}

}  // namespace prefsense::verify
