#include <cmath>

#include <gtest/gtest.h>

#include "prefsense/oracles.hpp"
#include "prefsense/rng.hpp"

namespace prefsense {
namespace {

using oracles::finite_diff;

TEST(FiniteDiff, Polynomials) {
  EXPECT_NEAR(finite_diff([](double x) { return x * x; }, 0.3), 0.6, 1e-9);
  EXPECT_NEAR(finite_diff([](double x) { return x * x * x; }, 0.5, 1e-4), 0.75, 1e-8);
  const auto f = [](double a, double b) { return a * a * b; };
  EXPECT_NEAR(finite_diff(f, 0.4, 0.7, 0), 2 * 0.4 * 0.7, 1e-9);
  EXPECT_NEAR(finite_diff(f, 0.4, 0.7, 1), 0.16, 1e-9);
  EXPECT_THROW(finite_diff(f, 0.4, 0.7, 2), DomainError);
}

TEST(FiniteDiff, StepStaysInsideUnitInterval) {
  for (double x : {1e-8, 0.5, 1.0 - 1e-8}) {
    const double h = oracles::default_step(x);
    EXPECT_GT(h, 0.0);
    EXPECT_GT(x - h, 0.0);
    EXPECT_LT(x + h, 1.0);
  }
}

TEST(CounterRng, DeterministicAndStreamed) {
  CounterRng a(42), b(42), c(42, 1);
  for (int i = 0; i < 100; ++i) {
    const auto va = a.next();
    EXPECT_EQ(va, b.next());
    EXPECT_NE(va, c.next());
  }
  CounterRng d(9);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = d.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 100000, 0.5, 0.005);
  CounterRng e(3);
  for (int i = 0; i < 10000; ++i) ASSERT_LT(e.below(7), 7u);
}

TEST(MonteCarlo, AgreesWithClosedForm) {
  for (double m : {1.5, 2.0, 5.0, 10.0}) {
    const auto est = oracles::mc_area_bt(m, 1000000, 2024);
    const double exact = bt_region_area(m).closed_form;
    EXPECT_NEAR(est.value, exact, 4 * est.std_error) << "M = " << m;
    EXPECT_NEAR(est.value / exact, 1.0, 0.02);
    EXPECT_EQ(est.n_samples, 1000000u);
    EXPECT_EQ(est.seed, 2024u);
  }
}

TEST(MonteCarlo, Deterministic) {
  const auto a = oracles::mc_area_bt(2.0, 300000, 5);
  const auto b = oracles::mc_area_bt(2.0, 300000, 5);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.std_error, b.std_error);
  EXPECT_NE(a.value, oracles::mc_area_bt(2.0, 300000, 6).value);
}

TEST(MonteCarlo, StandardErrorScalesAsInverseRootN) {
  const auto small = oracles::mc_area_bt(2.0, 40000, 1);
  const auto large = oracles::mc_area_bt(2.0, 4000000, 1);
  EXPECT_NEAR(small.std_error / large.std_error, 10.0, 0.5);
}

TEST(MonteCarlo, RejectsBadArguments) {
  EXPECT_THROW(oracles::mc_area_bt(1.0, 100, 0), UnsupportedThreshold);
  EXPECT_THROW(oracles::mc_area_bt(2.0, 0, 0), DomainError);
}

TEST(Quadrature, SeparatesExponentVariants) {
  // The width integral scales as 1/M^2; a 1/M scaling would be off by a
  // factor M and fail by far more than the tolerance.
  for (double m : {2.0, 5.0}) {
    const double q = oracles::quad_area_pl(m, 1.01, 0.99, PlAxis::uv, 100000);
    EXPECT_NEAR(q, 0.99 * 0.99 / (6 * 1.01 * m * m), 1e-6);
    EXPECT_GT(std::abs(q - 0.99 * 0.99 / (6 * 1.01 * m)), 1e-3);
  }
  EXPECT_THROW(oracles::quad_area_pl(2.0, 1.0, 0.5, PlAxis::uv, 1), DomainError);
}

TEST(BruteForce, SizeGuard) {
  const auto options = ScoredOptionSet::from_scores({0, 1, 2, 3, 4, 5, 6});
  EXPECT_THROW(oracles::brute_force_pl(options, 7), SizeGuardError);
  EXPECT_EQ(oracles::brute_force_pl(options, 2).size(), 42u);
}

TEST(ModeCount, Bimodality) {
  EXPECT_EQ(oracles::mode_count(0.5, 10000), 1);
  EXPECT_EQ(oracles::mode_count(0.999, 10000), 1);
  EXPECT_EQ(oracles::mode_count(1.1, 10000), 2);
  EXPECT_EQ(oracles::mode_count(2.0, 10000), 2);
  // At sigma2 = 5 the modes sit near x = 4.5e-5, inside the first cell of a
  // 1e4 grid; only a finer grid resolves them.
  EXPECT_EQ(oracles::mode_count(5.0, 10000), 0);
  EXPECT_EQ(oracles::mode_count(5.0, 200000), 2);
}

}  // namespace
}  // namespace prefsense
