#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "prefsense/dataset.hpp"
#include "prefsense/fitting.hpp"

namespace prefsense {
namespace {

PairwiseCounts sample_counts(const std::vector<double>& scores, std::uint64_t per_pair,
                             std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  PairwiseCounts counts(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    for (std::size_t j = i + 1; j < scores.size(); ++j) {
      std::binomial_distribution<std::uint64_t> draw(per_pair, bt_prob(scores[i], scores[j]).value());
      const auto w = draw(gen);
      counts(i, j) = w;
      counts(j, i) = per_pair - w;
    }
  }
  return counts;
}

TEST(FitBt, SymmetricCountsGiveEqualScores) {
  PairwiseCounts counts(3, {0, 5, 5, 5, 0, 5, 5, 5, 0});
  const auto fit = fit_bt(counts);
  EXPECT_TRUE(fit.converged);
  for (double s : fit.scores) EXPECT_NEAR(s, 0.0, 1e-8);
  EXPECT_NEAR(predict(fit, 0, 1).value(), 0.5, 1e-8);
}

TEST(FitBt, TwoOptionsRecoverLogOdds) {
  PairwiseCounts counts(2, {0, 75, 25, 0});
  const auto fit = fit_bt(counts);
  EXPECT_TRUE(fit.converged);
  EXPECT_EQ(fit.scores[0], 0.0);
  EXPECT_NEAR(fit.scores[0] - fit.scores[1], std::log(3.0), 1e-4);
  EXPECT_NEAR(fit.log_likelihood, 75 * std::log(0.75) + 25 * std::log(0.25), 1e-8);
}

TEST(FitBt, RecoversKnownScores) {
  const std::vector<double> truth{1.0, 0.0, -1.0};
  const auto fit = fit_bt(sample_counts(truth, 100000, 99));
  EXPECT_TRUE(fit.converged);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      EXPECT_NEAR(predict(fit, i, j).value(), bt_prob(truth[i], truth[j]).value(), 0.01);
    }
  }
}

TEST(FitBt, TranslationInvariantAndPermutationEquivariant) {
  const auto counts = sample_counts({0.4, -0.3, 1.2, 0.0}, 2000, 5);
  const auto fit = fit_bt(counts);
  // Reorder options 0 <-> 2 and refit.
  const std::size_t perm[4] = {2, 1, 0, 3};
  PairwiseCounts swapped(4);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) swapped(perm[i], perm[j]) = counts(i, j);
  }
  const auto refit = fit_bt(swapped);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      EXPECT_NEAR(predict(fit, i, j).value(), predict(refit, perm[i], perm[j]).value(), 1e-7);
    }
  }
}

TEST(FitBt, TraceIsNonDecreasing) {
  FitOptions opt;
  opt.record_trace = true;
  const auto fit = fit_bt(sample_counts({2.0, 0.0, -1.0, 0.5, 3.0}, 300, 8), opt);
  ASSERT_GE(fit.trace.size(), 2u);
  for (std::size_t k = 1; k < fit.trace.size(); ++k) ASSERT_GE(fit.trace[k], fit.trace[k - 1]);
  EXPECT_NEAR(fit.trace.back(), fit.log_likelihood, 1e-12);
}

TEST(FitBt, OneSidedPairDivergesWithWarning) {
  PairwiseCounts counts(2, {0, 10, 0, 0});
  const auto fit = fit_bt(counts);
  EXPECT_TRUE(fit.diverged);
  EXPECT_FALSE(fit.converged);
  EXPECT_FALSE(fit.warnings.empty());
  EXPECT_NEAR(fit.scores[1], -30.0, 1e-12);
}

TEST(FitBt, StructuralErrors) {
  PairwiseCounts disconnected(4, {0, 3, 0, 0, 2, 0, 0, 0, 0, 0, 0, 4, 0, 0, 1, 0});
  EXPECT_THROW(fit_bt(disconnected), StructuralError);
  EXPECT_THROW(PairwiseCounts(2, {1, 1, 1, 0}), ValidationError);
  EXPECT_THROW(PairwiseCounts(1), DomainError);
}

TEST(FitBt, PredictExamples) {
  FitResult fit;
  fit.scores = {0.0, -std::log(0.9999 / 0.0001), -std::log(0.9999 / 0.0001) - std::log(0.02 / 0.98)};
  EXPECT_NEAR(predict(fit, 1, 1).value(), 0.5, 1e-15);
  // Chained scores reproduce the composition examples.
  fit.scores = {0.0, std::log(0.0001 / 0.9999)};
  fit.scores.push_back(fit.scores[1] - std::log(0.02 / 0.98));
  EXPECT_NEAR(predict(fit, 0, 2).value(), 0.9951, 1e-4);
  fit.scores = {0.0, std::log(0.0199 / 0.9801)};
  fit.scores.push_back(fit.scores[1] - std::log(0.02 / 0.98));
  EXPECT_NEAR(predict(fit, 0, 2).value(), 0.5013, 1e-4);
  EXPECT_THROW(predict(fit, 0, 3), DomainError);
}

TEST(FitPl, TwoOptionRankingsMatchBradleyTerry) {
  std::vector<RankingCount> rankings{{KTuplePreference({0, 1}, 3), 40},
                                     {KTuplePreference({1, 0}, 3), 15},
                                     {KTuplePreference({1, 2}, 3), 30},
                                     {KTuplePreference({2, 1}, 3), 22},
                                     {KTuplePreference({0, 2}, 3), 9},
                                     {KTuplePreference({2, 0}, 3), 4}};
  PairwiseCounts counts(3, {0, 40, 9, 15, 0, 30, 4, 22, 0});
  const auto pl = fit_pl(rankings, 3);
  const auto bt = fit_bt(counts);
  ASSERT_TRUE(pl.converged);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(pl.scores[i], bt.scores[i], 1e-6);
}

TEST(FitPl, RecoversScoresFromFullRankings) {
  const std::vector<double> truth{0.0, 0.8, -0.5, 0.3};
  const auto options = ScoredOptionSet::from_scores(truth);
  std::vector<std::size_t> perm{0, 1, 2, 3};
  std::vector<RankingCount> rankings;
  do {
    // Expected counts of 1e6 draws, rounded.
    const KTuplePreference omega(perm, 4);
    const auto mult = static_cast<std::uint64_t>(std::llround(1e6 * pl_prob(omega, options).value()));
    rankings.push_back({omega, mult});
  } while (std::next_permutation(perm.begin(), perm.end()));
  const auto fit = fit_pl(rankings, 4);
  EXPECT_TRUE(fit.converged);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(fit.scores[i], truth[i], 0.05);
}

TEST(FitPl, RejectsDisconnectedRankings) {
  std::vector<RankingCount> rankings{{KTuplePreference({0, 1}, 4), 3},
                                     {KTuplePreference({3, 2}, 4), 3}};
  EXPECT_THROW(fit_pl(rankings, 4), StructuralError);
  EXPECT_THROW(fit_pl({}, 4), DomainError);
}

TEST(Counts, Parse) {
  const auto c = parse_counts("2\n0 75\n25 0\n");
  EXPECT_EQ(c.size(), 2u);
  EXPECT_EQ(c(0, 1), 75u);
  EXPECT_EQ(c.total(), 100u);
  EXPECT_THROW(parse_counts("3\n0 1 2"), ValidationError);
  EXPECT_THROW(parse_counts("2\n0 -1 1 0"), ValidationError);
  EXPECT_THROW(parse_counts("2\n0 1 1 0 9"), ValidationError);
  EXPECT_THROW(read_counts("/nonexistent/counts.txt"), IoError);
}

TEST(Counts, FromSamples) {
  dataset::DatasetSpec spec;
  spec.permutation = {"dog", "cat", "bird"};
  spec.p12 = 0.8;
  spec.p23 = 0.6;
  spec.n_samples = 4000;
  spec.seed = 4;
  const auto samples = dataset::generate(spec);
  const auto counts = counts_from_samples(samples, {"dog", "cat", "bird"});
  EXPECT_EQ(counts.total(), 4000u);
  EXPECT_EQ(counts(0, 2) + counts(2, 0), 0u);
  const auto report = dataset::empirical_check(samples, spec);
  EXPECT_EQ(counts(0, 1), report.pairs[0].first_wins);
  EXPECT_EQ(counts(1, 2), report.pairs[1].first_wins);
  EXPECT_THROW(counts_from_samples(samples, {"dog", "cat"}), ValidationError);
  const auto fit = fit_bt(counts);
  EXPECT_NEAR(predict(fit, 0, 1).value(), 0.8, 0.03);
}

}  // namespace
}  // namespace prefsense
