#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "prefsense/link_function.hpp"
#include "prefsense/probability.hpp"

namespace prefsense {

/// N labeled options with latent real scores.
class ScoredOptionSet {
 public:
  /// Requires N >= 2, finite scores, and unique labels.
  ScoredOptionSet(std::vector<std::string> labels, std::vector<double> scores);

  /// Labels default to "o0", "o1", ...
  static ScoredOptionSet from_scores(std::vector<double> scores);

  std::size_t size() const { return scores_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::span<const double> scores() const { return scores_; }
  double score(std::size_t i) const { return scores_.at(i); }
  const std::string& label(std::size_t i) const { return labels_.at(i); }

 private:
  std::vector<std::string> labels_;
  std::vector<double> scores_;
};

/// An ordered K-tuple of distinct option indices, most preferred first.
class KTuplePreference {
 public:
  /// Requires 2 <= K <= n_options, distinct entries, all < n_options.
  KTuplePreference(std::vector<std::size_t> indices, std::size_t n_options);

  std::size_t size() const { return indices_.size(); }
  std::span<const std::size_t> indices() const { return indices_; }
  std::size_t operator[](std::size_t pos) const { return indices_[pos]; }

  friend bool operator==(const KTuplePreference&, const KTuplePreference&) = default;

 private:
  std::vector<std::size_t> indices_;
};

/// K x K matrix of suffix-swap ratios, ratio(u,v) = p(omega_vu) / p(omega_uv)
/// = exp(s_{omega_v} - s_{omega_u}) for tuple positions u, v. Only the strict
/// upper triangle enters the probability; the lower triangle must hold the
/// reciprocals. The diagonal is ignored.
class RatioMatrix {
 public:
  explicit RatioMatrix(std::size_t k);

  std::size_t size() const { return k_; }
  double operator()(std::size_t u, std::size_t v) const { return data_[u * k_ + v]; }
  double& operator()(std::size_t u, std::size_t v) { return data_[u * k_ + v]; }

  /// Sets ratio(u,v) = r and ratio(v,u) = 1/r.
  void set_pair(std::size_t u, std::size_t v, double r);

  /// Throws ValidationError unless all off-diagonal entries are positive and
  /// |ratio(u,v) * ratio(v,u) - 1| <= tol.
  void validate(double tol = 1e-9) const;

 private:
  std::size_t k_;
  std::vector<double> data_;
};

/// Bradley-Terry pairwise probability 1 / (1 + exp(-(s_i - s_j))).
Probability bt_prob(double s_i, double s_j);

/// Probability of (i,j) composed from (i,k) and (k,j) under a general link:
/// g(g^{-1}(p_ik) + g^{-1}(p_kj)).
Probability compose_pairwise(const LinkFunction& link, Probability p_ik, Probability p_kj);

/// Bradley-Terry composition in closed form:
/// 1 / (1 + (1 - p_ik)(1 - p_kj) / (p_ik p_kj)).
Probability bt_compose(Probability p_ik, Probability p_kj);

/// Plackett-Luce probability of the ranking omega. Uses the score-difference
/// form with a per-stage log-sum-exp, so large score gaps saturate instead of
/// overflowing.
Probability pl_prob(const KTuplePreference& omega, const ScoredOptionSet& options);

/// exp(-(s_u - s_v)) for option indices u != v.
double pl_ratio(const ScoredOptionSet& options, std::size_t u, std::size_t v);

/// Ratio matrix of tuple positions for omega.
RatioMatrix pl_ratios(const KTuplePreference& omega, const ScoredOptionSet& options);

/// Plackett-Luce probability written purely in terms of suffix-swap ratios:
/// prod_u 1 / (1 + sum_{v>u} ratio(u,v)). Validates reciprocity first.
Probability pl_prob_from_ratios(const RatioMatrix& ratios);

/// Density at x of the logit-normal law whose underlying normal has mean 0
/// and variance 2 * sigma2 (the law of a BT probability when both scores are
/// i.i.d. N(0, sigma2)).
double logit_normal_density(double x, double sigma2);

}  // namespace prefsense
