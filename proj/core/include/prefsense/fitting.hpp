#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "prefsense/dataset.hpp"
#include "prefsense/preference_models.hpp"
#include "prefsense/probability.hpp"

namespace prefsense {

/// wins(i,j) = number of times option i was chosen over option j.
class PairwiseCounts {
 public:
  explicit PairwiseCounts(std::size_t n);
  PairwiseCounts(std::size_t n, std::vector<std::uint64_t> wins);

  std::size_t size() const { return n_; }
  std::uint64_t operator()(std::size_t i, std::size_t j) const { return wins_[i * n_ + j]; }
  std::uint64_t& operator()(std::size_t i, std::size_t j) { return wins_[i * n_ + j]; }
  std::uint64_t total() const;

  /// Optional option names, parallel to the indices.
  std::vector<std::string> labels;

 private:
  std::size_t n_;
  std::vector<std::uint64_t> wins_;
};

struct RankingCount {
  KTuplePreference ranking;
  std::uint64_t multiplicity = 1;
};

struct FitOptions {
  int max_iterations = 10000;
  double gradient_tolerance = 1e-8;  ///< max-norm of the mean log-likelihood gradient
  double score_cap = 30.0;
  bool record_trace = false;
};

struct FitResult {
  std::vector<double> scores;  ///< scores[0] == 0 anchors the translation
  double log_likelihood = 0.0;  ///< total (not averaged) log-likelihood
  int iterations = 0;
  bool converged = false;       ///< implies gradient max-norm <= tolerance
  bool diverged = false;        ///< some score is pinned at the cap
  double gradient_norm = 0.0;
  std::vector<std::string> warnings;
  std::vector<double> trace;    ///< total log-likelihood per iteration (if requested)
  std::vector<std::string> labels;
};

/// Bradley-Terry MLE by Jacobi-scaled gradient ascent with Armijo
/// backtracking, projected onto |s| <= cap. Throws StructuralError when the
/// comparison graph is disconnected.
FitResult fit_bt(const PairwiseCounts& counts, const FitOptions& options = {});

/// Plackett-Luce MLE over K-tuple rankings (K may vary per ranking).
FitResult fit_pl(const std::vector<RankingCount>& rankings, std::size_t n_options,
                 const FitOptions& options = {});

/// bt_prob(scores[i], scores[j]).
Probability predict(const FitResult& fit, std::size_t i, std::size_t j);

/// Parses "N" followed by N*N whitespace-separated non-negative integers.
PairwiseCounts parse_counts(std::string_view text);
PairwiseCounts read_counts(const std::filesystem::path& path);

/// Aggregates preference samples into win counts. Option order follows
/// `labels` if given, otherwise first appearance.
PairwiseCounts counts_from_samples(const std::vector<dataset::PreferenceSample>& samples,
                                   std::vector<std::string> labels = {},
                                   const dataset::TemplateBank& bank =
                                       dataset::TemplateBank::standard());

}  // namespace prefsense
