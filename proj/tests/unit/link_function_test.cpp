#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "prefsense/link_function.hpp"

namespace prefsense {
namespace {

const LinkFunction kLogistic = LinkFunction::logistic();
const LinkFunction kProbit = LinkFunction::probit();

TEST(LinkFunction, LogisticValues) {
  EXPECT_DOUBLE_EQ(kLogistic.value(0.0), 0.5);
  EXPECT_NEAR(kLogistic.value(std::log(3.0)), 0.75, 1e-15);
  EXPECT_GT(kLogistic.value(-800.0), -1.0);  // no overflow on the negative branch
  EXPECT_EQ(kLogistic.value(-800.0), 0.0);
  EXPECT_TRUE(kLogistic.evaluate(-800.0).saturated());
  EXPECT_FALSE(kLogistic.evaluate(3.0).saturated());
}

TEST(LinkFunction, ProbitValues) {
  EXPECT_DOUBLE_EQ(kProbit.value(0.0), 0.5);
  EXPECT_NEAR(kProbit.derivative(0.0), 0.3989422804014327, 1e-15);
}

TEST(LinkFunction, Derivatives) {
  EXPECT_DOUBLE_EQ(kLogistic.derivative(0.0), 0.25);
  EXPECT_LT(kLogistic.derivative(50.0), 1e-20);
  EXPECT_GE(kLogistic.derivative(-50.0), 0.0);
  for (const auto& link : {kLogistic, kProbit}) {
    EXPECT_LT(link.derivative(40.0), 1e-12);
    EXPECT_LT(link.derivative(-40.0), 1e-12);
  }
}

TEST(LinkFunction, Inverses) {
  EXPECT_DOUBLE_EQ(kLogistic.inverse(0.5), 0.0);
  EXPECT_NEAR(kLogistic.inverse(0.75), std::log(3.0), 1e-15);
  // 97.5% normal quantile, frozen from a 30-digit root solve.
  EXPECT_NEAR(kProbit.inverse(0.975), 1.959963984540054, 1e-12);
  EXPECT_NEAR(kProbit.inverse(0.5), 0.0, 1e-15);
}

TEST(LinkFunction, RejectsBadArguments) {
  for (const auto& link : {kLogistic, kProbit}) {
    EXPECT_THROW(link.value(std::numeric_limits<double>::quiet_NaN()), DomainError);
    EXPECT_THROW(link.value(std::numeric_limits<double>::infinity()), DomainError);
    EXPECT_THROW(link.derivative(std::numeric_limits<double>::infinity()), DomainError);
    EXPECT_THROW(link.inverse(0.0), DomainError);
    EXPECT_THROW(link.inverse(1.0), DomainError);
    EXPECT_THROW(link.inverse(-0.1), DomainError);
    EXPECT_THROW(link.inverse(std::numeric_limits<double>::quiet_NaN()), DomainError);
  }
  EXPECT_THROW(parse_link_family("gumbel"), DomainError);
  EXPECT_EQ(parse_link_family("probit"), LinkFamily::probit);
}

class LinkProperties : public ::testing::TestWithParam<LinkFamily> {
 protected:
  LinkFunction link{GetParam()};
  std::mt19937_64 gen{20240917};
};

TEST_P(LinkProperties, Symmetry) {
  std::uniform_real_distribution<double> dist(-30.0, 30.0);
  for (int n = 0; n < 10000; ++n) {
    const double x = dist(gen);
    ASSERT_NEAR(link.value(x) + link.value(-x), 1.0, 1e-12) << "x = " << x;
  }
}

TEST_P(LinkProperties, InverseAntisymmetry) {
  std::uniform_real_distribution<double> dist(1e-6, 1.0 - 1e-6);
  for (int n = 0; n < 10000; ++n) {
    const double p = dist(gen);
    ASSERT_NEAR(link.inverse(p) + link.inverse(1.0 - p), 0.0, 1e-9) << "p = " << p;
  }
}

TEST_P(LinkProperties, RoundTrip) {
  std::uniform_real_distribution<double> log_dist(std::log(1e-9), std::log(0.5));
  for (int n = 0; n < 5000; ++n) {
    const double q = std::exp(log_dist(gen));
    for (double p : {q, 1.0 - q}) {
      ASSERT_NEAR(link.value(link.inverse(p)), p, 1e-10) << "p = " << p;
    }
  }
  for (double p : {1e-9, 1.0 - 1e-9, 0.5, 0.25}) {
    EXPECT_NEAR(link.value(link.inverse(p)), p, 1e-10);
  }
}

TEST_P(LinkProperties, Monotone) {
  std::uniform_real_distribution<double> xs(-30.0, 30.0);
  std::uniform_real_distribution<double> ps(1e-6, 1.0 - 1e-6);
  std::vector<double> x(2000), p(2000);
  for (auto& v : x) v = xs(gen);
  for (auto& v : p) v = ps(gen);
  std::sort(x.begin(), x.end());
  std::sort(p.begin(), p.end());
  for (std::size_t k = 1; k < x.size(); ++k) {
    if (x[k] > x[k - 1]) ASSERT_GE(link.value(x[k]), link.value(x[k - 1]));
    if (p[k] > p[k - 1]) ASSERT_GT(link.inverse(p[k]), link.inverse(p[k - 1]));
  }
  // Strict where the value is not saturated.
  EXPECT_LT(link.value(-3.0), link.value(-2.999));
}

TEST_P(LinkProperties, DerivativeMatchesCentralDifference) {
  // For x > 0 the difference is taken on the lower tail through
  // g(x) = 1 - g(-x), where both evaluations keep full relative precision.
  const auto central = [&](double x) {
    const double h = 1e-6 * std::max(1.0, std::abs(x));
    if (x > 0.0) return (link.value(-(x - h)) - link.value(-(x + h))) / (2.0 * h);
    return (link.value(x + h) - link.value(x - h)) / (2.0 * h);
  };
  std::uniform_real_distribution<double> dist(-15.0, 15.0);
  for (int n = 0; n < 2000; ++n) {
    const double x = dist(gen);
    ASSERT_NEAR(central(x) / link.derivative(x), 1.0, 1e-5) << "x = " << x;
  }
  for (double x : {-15.0, -1.0, 0.0, 0.5, 3.0, 15.0}) {
    EXPECT_NEAR(central(x) / link.derivative(x), 1.0, 1e-5) << "x = " << x;
  }
}

INSTANTIATE_TEST_SUITE_P(Families, LinkProperties,
                         ::testing::Values(LinkFamily::logistic, LinkFamily::probit),
                         [](const auto& info) { return std::string(to_string(info.param)); });

}  // namespace
}  // namespace prefsense
