#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "prefsense/oracles.hpp"
#include "prefsense/sensitivity.hpp"

namespace prefsense {
namespace {

TEST(BtPartial, Examples) {
  EXPECT_NEAR(bt_partial(0.5, 0.5), 1.0, 1e-15);
  EXPECT_NEAR(bt_partial(0.99, 0.02), 22.3703433162893, 1e-10);
  EXPECT_GT(bt_partial(0.99, 0.02), 20.0);
  EXPECT_THROW(bt_partial(0.0, 0.3), DomainError);
  EXPECT_THROW(bt_partial(0.3, 1.0), DomainError);
}

TEST(BtPartial, MatchesCompositionFiniteDifference) {
  std::mt19937_64 gen(21);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  for (int n = 0; n < 1000; ++n) {
    const double x = u(gen), y = u(gen);
    const double fd = oracles::finite_diff(
        [y](double p) { return bt_compose(Probability::checked(p), Probability::checked(y)).value(); },
        x);
    ASSERT_NEAR(bt_partial(x, y) / fd, 1.0, 1e-5) << x << ", " << y;
  }
}

TEST(GeneralPartial, LogisticAgreesWithClosedForm) {
  const auto logistic = LinkFunction::logistic();
  std::mt19937_64 gen(22);
  std::uniform_real_distribution<double> u(0.001, 0.999);
  for (int n = 0; n < 1000; ++n) {
    const double x = u(gen), y = u(gen);
    ASSERT_NEAR(general_partial(logistic, x, y) / bt_partial(x, y), 1.0, 1e-9);
  }
}

TEST(GeneralPartial, Probit) {
  EXPECT_NEAR(general_partial(LinkFunction::probit(), 0.99, 0.02), 14.4225379449613, 1e-8);
  EXPECT_NEAR(general_partial(LinkFunction::probit(), 0.5, 0.5), 1.0, 1e-12);
  const auto probit = LinkFunction::probit();
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  for (int n = 0; n < 500; ++n) {
    const double x = u(gen), y = u(gen);
    const double fd = oracles::finite_diff(
        [&](double p) { return compose_pairwise(probit, Probability::checked(p), Probability::checked(y)).value(); },
        x);
    ASSERT_NEAR(general_partial(probit, x, y) / fd, 1.0, 1e-5);
  }
}

TEST(BtRegion, WorkedExample) {
  const BtRegionSlice s = bt_region_slice(20.0, 0.02);
  EXPECT_EQ(s.region_case, BtRegionCase::case1);
  ASSERT_TRUE(s.gamma0.has_value());
  EXPECT_NEAR(*s.gamma0, 0.988224008661, 1e-11);
  EXPECT_TRUE(s.p_ik_interval.contains(0.99));
  EXPECT_FALSE(s.p_ik_interval.contains(0.98));
}

TEST(BtRegion, CaseTwo) {
  const BtRegionSlice s = bt_region_slice(2.0, 0.9);
  EXPECT_EQ(s.region_case, BtRegionCase::case2);
  EXPECT_NEAR(*s.gamma0, 0.140165042945, 1e-11);
  EXPECT_DOUBLE_EQ(s.p_ik_interval.lo, 0.0);
  EXPECT_GT(bt_partial(0.1, 0.9), 2.0);
  EXPECT_LT(bt_partial(0.2, 0.9), 2.0);
}

TEST(BtRegion, EmptyBandAndPole) {
  for (double y : {0.34, 0.4, 0.5, 0.6, 0.66}) {
    const BtRegionSlice s = bt_region_slice(2.0, y);
    EXPECT_EQ(s.region_case, BtRegionCase::empty);
    EXPECT_TRUE(s.p_ik_interval.empty());
  }
  EXPECT_FALSE(bt_region_slice(2.0, 0.5).gamma0.has_value());
  EXPECT_THROW(bt_region_slice(1.0, 0.2), UnsupportedThreshold);
  EXPECT_THROW(bt_region_slice(0.5, 0.2), UnsupportedThreshold);
  EXPECT_THROW(bt_region_slice(2.0, 1.0), DomainError);
}

TEST(BtRegion, BoundaryIsTheLevelSet) {
  for (double m : {1.01, 2.0, 3.0, 5.0, 10.0}) {
    for (double y : {0.001, 0.01, 0.05, 0.2, 0.8, 0.95, 0.999}) {
      const BtRegionSlice s = bt_region_slice(m, y);
      if (s.region_case == BtRegionCase::empty) continue;
      EXPECT_NEAR(bt_partial(*s.gamma0, y), m, 1e-7 * m) << "M=" << m << " y=" << y;
    }
  }
}

TEST(BtRegion, Coherence) {
  std::mt19937_64 gen(31);
  std::uniform_real_distribution<double> u(1e-6, 1.0 - 1e-6);
  for (double m : {1.01, 2.0, 3.0, 5.0, 10.0}) {
    int inside = 0, outside = 0;
    while (inside < 1000 || outside < 1000) {
      const double x = u(gen), y = u(gen);
      const BtRegionSlice s = bt_region_slice(m, y);
      if (s.p_ik_interval.contains(x)) {
        ASSERT_GT(bt_partial(x, y), m);
        ++inside;
      } else if (s.region_case == BtRegionCase::empty || std::abs(x - *s.gamma0) >= 1e-3) {
        ASSERT_LE(bt_partial(x, y), m);
        ++outside;
      }
    }
  }
}

TEST(BtArea, ClosedFormValues) {
  EXPECT_NEAR(bt_region_area(2.0).closed_form, 0.0739190958062, 1e-12);
  EXPECT_NEAR(bt_region_area(1.5).closed_form, 0.131162353887, 1e-11);
  EXPECT_NEAR(bt_region_area(5.0).closed_form, 0.0124719164279, 1e-12);
  EXPECT_NEAR(bt_region_area(10.0).closed_form, 0.00321348176033, 1e-13);
  EXPECT_NEAR(bt_region_area(100.0).closed_form, 3.32014197728e-5, 1e-14);
  EXPECT_NEAR(bt_region_area(1.0 + 1e-6).closed_form, 0.346569789831, 1e-9);
  EXPECT_EQ(bt_region_area(2.0).method, AreaMethod::proposition1);
  EXPECT_THROW(bt_region_area(1.0), UnsupportedThreshold);
}

TEST(BtArea, DecreasesWithThreshold) {
  double prev = bt_region_area(1.0 + 1e-9).closed_form;
  EXPECT_LT(prev, 0.5 * std::log(2.0) + 1e-6);
  for (double m = 1.01; m < 1000.0; m *= 1.07) {
    const double a = bt_region_area(m).closed_form;
    ASSERT_LT(a, prev);
    ASSERT_GT(a, 0.0);
    prev = a;
  }
}

TEST(BtArea, IntegralOfSlicesMatchesClosedForm) {
  for (double m : {1.5, 2.0, 5.0}) {
    const int n = 200000;
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      const double y = (i + 0.5) / n;
      total += bt_region_slice(m, y).p_ik_interval.width() / n;
    }
    EXPECT_NEAR(total, bt_region_area(m).closed_form, 1e-5) << "M = " << m;
  }
}

TEST(PlContext, ThreeTupleConstants) {
  const auto options = ScoredOptionSet::from_scores({1.0, 0.0, -1.0});
  const KTuplePreference omega({0, 1, 2}, 3);
  const auto ctx = pl_context(options, omega, 1, 2);
  // u = 1, v = 2: no other t beyond u, and beta is the first stage factor.
  EXPECT_DOUBLE_EQ(ctx.alpha, 1.0);
  EXPECT_NEAR(ctx.beta, 1.0 / (1.0 + std::exp(-1.0) + std::exp(-2.0)), 1e-15);

  const auto ctx01 = pl_context(options, omega, 0, 1);
  EXPECT_NEAR(ctx01.alpha, 1.0 + std::exp(-2.0), 1e-15);
  EXPECT_NEAR(ctx01.beta, 1.0 / (1.0 + std::exp(-1.0)), 1e-15);
  EXPECT_GT(ctx01.alpha, 1.0);
  EXPECT_THROW(pl_context(options, omega, 2, 1), DomainError);
}

// p_omega = beta p_uv / (alpha p_uv + p_vu) with p_uv, p_vu the
// probabilities of omega and its (u,v)-swap, for every choice of (u,v).
TEST(PlContext, ReconstructsProbability) {
  std::mt19937_64 gen(41);
  std::normal_distribution<double> score(0.0, 1.0);
  for (std::size_t k : {3u, 4u, 5u}) {
    std::vector<double> s(k);
    for (auto& v : s) v = score(gen);
    const auto options = ScoredOptionSet::from_scores(s);
    std::vector<std::size_t> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), gen);
    const KTuplePreference omega(idx, k);
    const double p = pl_prob(omega, options).value();
    for (std::size_t u = 0; u < k; ++u) {
      for (std::size_t v = u + 1; v < k; ++v) {
        const auto ctx = pl_context(options, omega, u, v);
        EXPECT_GE(ctx.alpha, 1.0);
        EXPECT_GT(ctx.beta, 0.0);
        EXPECT_LE(ctx.beta, 1.0);
        // Only the stage at u depends on the (u,v) pair: its factor is
        // 1 / (alpha + ratio(u,v)) = p_uv / (alpha p_uv + p_vu) when
        // p_uv and p_vu are normalized to sum to 1.
        const double r = ctx.ratios(u, v);
        const double p_uv = 1.0 / (1.0 + r), p_vu = r / (1.0 + r);
        EXPECT_NEAR(ctx.beta * p_uv / (ctx.alpha * p_uv + p_vu), p, 1e-13);
      }
    }
  }
}

TEST(PlPartials, Examples) {
  const auto ctx = pl_context(1.0, 1.0);
  const auto d = pl_partials(0.5, 0.5, ctx);
  EXPECT_NEAR(d.d_uv, 0.5, 1e-15);
  EXPECT_NEAR(d.d_vu, -0.5, 1e-15);
  EXPECT_THROW(pl_context(0.9, 0.5), DomainError);
  EXPECT_THROW(pl_context(1.1, 1.5), DomainError);
}

TEST(PlPartials, MatchFiniteDifferences) {
  std::mt19937_64 gen(43);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  std::uniform_real_distribution<double> a(1.0, 3.0);
  for (int n = 0; n < 1000; ++n) {
    const auto ctx = pl_context(a(gen), u(gen));
    const double x = u(gen), y = u(gen);
    const auto f = [&](double p_uv, double p_vu) {
      return ctx.beta * p_uv / (ctx.alpha * p_uv + p_vu);
    };
    const auto d = pl_partials(x, y, ctx);
    ASSERT_NEAR(d.d_uv / oracles::finite_diff(f, x, y, 0), 1.0, 1e-5);
    ASSERT_NEAR(d.d_vu / oracles::finite_diff(f, x, y, 1), 1.0, 1e-5);
  }
}

TEST(PlRegion, Bounds) {
  const auto ctx = pl_context(1.01, 0.99);
  const auto uv = pl_region_uv(2.0, ctx, 0.05);
  EXPECT_NEAR(uv.interval.lo, 0.00658269511413, 1e-12);
  EXPECT_NEAR(uv.interval.hi, 0.387417304886, 1e-11);
  EXPECT_NEAR(uv.fixed_limit, 0.99 / (4 * 1.01 * 2), 1e-15);
  const auto vu = pl_region_vu(2.0, ctx, 0.05);
  EXPECT_NEAR(vu.interval.lo, 0.00645299001483, 1e-12);
  EXPECT_NEAR(vu.interval.hi, 0.379783653451, 1e-11);
  EXPECT_TRUE(pl_region_uv(2.0, ctx, 0.2).interval.empty());
  EXPECT_THROW(pl_region_uv(1.0, ctx, 0.05), UnsupportedThreshold);
}

TEST(PlRegion, Coherence) {
  std::mt19937_64 gen(47);
  std::uniform_real_distribution<double> u(1e-6, 1.0 - 1e-6);
  for (double m : {1.01, 2.0, 3.0, 5.0, 10.0}) {
    for (const auto& ctx : {pl_context(1.01, 0.99), pl_context(1.5, 0.5)}) {
      int inside = 0, outside = 0;
      for (int n = 0; n < 200000 && (inside < 1000 || outside < 1000); ++n) {
        const double x = u(gen), y = u(gen);
        const auto r_uv = pl_region_uv(m, ctx, x);
        const double d_uv = std::abs(pl_partials(x, y, ctx).d_uv);
        if (r_uv.interval.contains(y)) {
          ASSERT_GT(d_uv, m);
          ++inside;
        } else if (r_uv.interval.empty() ||
                   std::min(std::abs(y - r_uv.interval.lo), std::abs(y - r_uv.interval.hi)) >= 1e-3) {
          ASSERT_LE(d_uv, m);
          ++outside;
        }
        const auto r_vu = pl_region_vu(m, ctx, y);
        const double d_vu = std::abs(pl_partials(x, y, ctx).d_vu);
        if (r_vu.interval.contains(x)) {
          ASSERT_GT(d_vu, m);
        } else if (r_vu.interval.empty() ||
                   std::min(std::abs(x - r_vu.interval.lo), std::abs(x - r_vu.interval.hi)) >= 1e-3) {
          ASSERT_LE(d_vu, m);
        }
      }
      EXPECT_GE(outside, 1000);
    }
  }
}

TEST(PlArea, ClosedFormAndQuadrature) {
  const auto ctx = pl_context(1.01, 0.99);
  EXPECT_NEAR(pl_region_area(2.0, ctx, PlAxis::uv).closed_form, 0.0404331683168, 1e-12);
  for (double alpha : {1.01, 1.5}) {
    for (double beta : {0.99, 0.5}) {
      for (double m : {2.0, 5.0}) {
        const auto c = pl_context(alpha, beta);
        EXPECT_NEAR(oracles::quad_area_pl(m, alpha, beta, PlAxis::uv, 20000),
                    pl_region_area(m, c, PlAxis::uv).closed_form, 1e-4);
        EXPECT_NEAR(oracles::quad_area_pl(m, alpha, beta, PlAxis::vu, 20000),
                    pl_region_area(m, c, PlAxis::vu).closed_form, 1e-4);
      }
    }
  }
}

TEST(PlArea, ScalesWithContext) {
  const double base = pl_region_area(3.0, pl_context(1.2, 0.8), PlAxis::uv).closed_form;
  EXPECT_NEAR(pl_region_area(3.0, pl_context(2.4, 0.8), PlAxis::uv).closed_form, base / 2, 1e-15);
  EXPECT_NEAR(pl_region_area(3.0, pl_context(1.2, 0.4), PlAxis::uv).closed_form, base / 4, 1e-15);
  EXPECT_NEAR(pl_region_area(6.0, pl_context(1.2, 0.8), PlAxis::uv).closed_form, base / 4, 1e-15);
}

TEST(AreaDominance, BradleyTerryExceedsPlackettLuce) {
  for (double m : {1.01, 1.1, 2.0, 5.0, 10.0, 100.0}) {
    for (double alpha : {1.001, 1.5, 3.0}) {
      for (double beta : {0.999, 0.5, 0.1}) {
        const auto check = theorem2_check(m, pl_context(alpha, beta));
        EXPECT_TRUE(check.holds) << m << " " << alpha << " " << beta;
        EXPECT_TRUE(check.bound_holds);
        EXPECT_GT(check.lower_bound, check.pl_area - 1e-300);
      }
    }
  }
}

TEST(SensitivityWitness, ExceedsThreshold) {
  for (const auto& link : {LinkFunction::logistic(), LinkFunction::probit()}) {
    for (double m : {2.0, 10.0, 100.0}) {
      const auto w = theorem1_witness(link, m);
      EXPECT_GT(w.derivative, m);
      EXPECT_GT(w.p_ik, w.p0);
      EXPECT_LT(w.p_ik, 1.0);
      const double fd = oracles::finite_diff(
          [&](double p) {
            return compose_pairwise(link, Probability::checked(p), Probability::checked(w.p_kj)).value();
          },
          w.p_ik);
      EXPECT_GT(fd, m);
    }
  }
  EXPECT_THROW(theorem1_witness(LinkFunction::logistic(), 1e30), WitnessNotFound);
  EXPECT_THROW(theorem1_witness(LinkFunction::logistic(), -1.0), DomainError);
}

}  // namespace
}  // namespace prefsense
