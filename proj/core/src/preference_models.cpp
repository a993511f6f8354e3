#include "prefsense/preference_models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>

namespace prefsense {

ScoredOptionSet::ScoredOptionSet(std::vector<std::string> labels, std::vector<double> scores)
    : labels_(std::move(labels)), scores_(std::move(scores)) {
  if (labels_.size() != scores_.size()) {
    throw DomainError("option set needs one label per score");
  }
  if (scores_.size() < 2) throw DomainError("option set needs at least two options");
  for (double s : scores_) {
    if (!std::isfinite(s)) throw DomainError("option scores must be finite");
  }
  std::set<std::string> seen(labels_.begin(), labels_.end());
  if (seen.size() != labels_.size()) throw DomainError("option labels must be unique");
}

ScoredOptionSet ScoredOptionSet::from_scores(std::vector<double> scores) {
  std::vector<std::string> labels;
  labels.reserve(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) labels.push_back("o" + std::to_string(i));
  return ScoredOptionSet(std::move(labels), std::move(scores));
}

KTuplePreference::KTuplePreference(std::vector<std::size_t> indices, std::size_t n_options)
    : indices_(std::move(indices)) {
  if (indices_.size() < 2 || indices_.size() > n_options) {
    throw DomainError("K-tuple length must satisfy 2 <= K <= N");
  }
  std::vector<bool> used(n_options, false);
  for (std::size_t idx : indices_) {
    if (idx >= n_options) throw DomainError("K-tuple index out of range");
    if (used[idx]) throw DomainError("K-tuple indices must be distinct");
    used[idx] = true;
  }
}

RatioMatrix::RatioMatrix(std::size_t k) : k_(k), data_(k * k, 1.0) {
  if (k < 2) throw DomainError("ratio matrix needs K >= 2");
}

void RatioMatrix::set_pair(std::size_t u, std::size_t v, double r) {
  if (u >= k_ || v >= k_ || u == v) throw DomainError("ratio slot out of range");
  (*this)(u, v) = r;
  (*this)(v, u) = 1.0 / r;
}

void RatioMatrix::validate(double tol) const {
  for (std::size_t u = 0; u < k_; ++u) {
    for (std::size_t v = u + 1; v < k_; ++v) {
      const double a = (*this)(u, v);
      const double b = (*this)(v, u);
      if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
        throw ValidationError("ratio (" + std::to_string(u) + "," + std::to_string(v) +
                              ") must be positive and finite");
      }
      if (std::abs(a * b - 1.0) > tol) {
        throw ValidationError("ratios (" + std::to_string(u) + "," + std::to_string(v) +
                              ") and its reciprocal slot are inconsistent");
      }
    }
  }
}

Probability bt_prob(double s_i, double s_j) {
  if (!std::isfinite(s_i) || !std::isfinite(s_j)) throw DomainError("scores must be finite");
  return LinkFunction::logistic().evaluate(s_i - s_j);
}

Probability compose_pairwise(const LinkFunction& link, Probability p_ik, Probability p_kj) {
  return link.evaluate(link.inverse(p_ik) + link.inverse(p_kj));
}

Probability bt_compose(Probability p_ik, Probability p_kj) {
  const double a = Probability::checked(p_ik.value(), "p_ik").value();
  const double b = Probability::checked(p_kj.value(), "p_kj").value();
  const double win = a * b;
  const double lose = (1.0 - a) * (1.0 - b);
  return Probability::from_model(win / (win + lose));
}

Probability pl_prob(const KTuplePreference& omega, const ScoredOptionSet& options) {
  const std::size_t k = omega.size();
  for (std::size_t idx : omega.indices()) {
    if (idx >= options.size()) throw DomainError("K-tuple does not fit the option set");
  }
  double log_p = 0.0;
  for (std::size_t u = 0; u + 1 < k; ++u) {
    const double s_u = options.score(omega[u]);
    // Stage factor 1 / (1 + sum_{v>u} exp(s_v - s_u)) in log-sum-exp form.
    double top = 0.0;
    for (std::size_t v = u + 1; v < k; ++v) top = std::max(top, options.score(omega[v]) - s_u);
    double acc = std::exp(-top);
    for (std::size_t v = u + 1; v < k; ++v) acc += std::exp(options.score(omega[v]) - s_u - top);
    log_p -= top + std::log(acc);
  }
  return Probability::from_model(std::exp(log_p));
}

double pl_ratio(const ScoredOptionSet& options, std::size_t u, std::size_t v) {
  if (u >= options.size() || v >= options.size()) throw DomainError("option index out of range");
  if (u == v) throw DomainError("pl_ratio needs two distinct options");
  return std::exp(-(options.score(u) - options.score(v)));
}

RatioMatrix pl_ratios(const KTuplePreference& omega, const ScoredOptionSet& options) {
  RatioMatrix ratios(omega.size());
  for (std::size_t u = 0; u < omega.size(); ++u) {
    for (std::size_t v = 0; v < omega.size(); ++v) {
      if (u != v) ratios(u, v) = pl_ratio(options, omega[u], omega[v]);
    }
  }
  return ratios;
}

Probability pl_prob_from_ratios(const RatioMatrix& ratios) {
  ratios.validate();
  double p = 1.0;
  for (std::size_t u = 0; u + 1 < ratios.size(); ++u) {
    double denom = 1.0;
    for (std::size_t v = u + 1; v < ratios.size(); ++v) denom += ratios(u, v);
    p /= denom;
  }
  return Probability::from_model(p);
}

double logit_normal_density(double x, double sigma2) {
  if (!(x > 0.0 && x < 1.0)) throw DomainError("logit-normal density needs x in (0,1)");
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) throw DomainError("sigma2 must be > 0");
  const double variance = 2.0 * sigma2;
  const double y = std::log(x) - std::log1p(-x);
  const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi * variance);
  return norm / (x * (1.0 - x)) * std::exp(-y * y / (2.0 * variance));
}

}  // namespace prefsense
