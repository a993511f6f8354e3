#include "prefsense/fitting.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstring>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>

#include "prefsense/errors.hpp"

namespace prefsense {
namespace {

struct Evaluation {
  double value = 0.0;          // total log-likelihood
  std::vector<double> grad;    // d value / d s
  std::vector<double> curv;    // diagonal of the observed information
};

using Objective = std::function<Evaluation(const std::vector<double>&)>;

double log_sigmoid(double x) { return x >= 0.0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x)); }

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

 private:
  std::vector<std::size_t> parent_;
};

void require_connected(DisjointSets& sets, std::size_t n) {
  std::vector<std::vector<std::size_t>> groups(n);
  for (std::size_t i = 0; i < n; ++i) groups[sets.find(i)].push_back(i);
  std::erase_if(groups, [](const auto& g) { return g.empty(); });
  if (groups.size() <= 1) return;
  std::string msg = "comparison graph is disconnected; components:";
  for (const auto& g : groups) {
    msg += " {";
    for (std::size_t k = 0; k < g.size(); ++k) msg += (k ? "," : "") + std::to_string(g[k]);
    msg += "}";
  }
  throw StructuralError(msg);
}

// Relative rounding noise of a summed log-likelihood.
constexpr double kValueResolution = 1e-12;

// Projected, Jacobi-scaled gradient ascent on the mean log-likelihood.
// scores[0] stays at 0; the others live in [-cap, cap].
FitResult ascend(std::size_t n, double weight, const Objective& objective, const FitOptions& opt) {
  FitResult fit;
  std::vector<double> s(n, 0.0);
  const double cap = opt.score_cap;
  const auto at_cap = [cap](double x) { return std::abs(x) >= cap; };

  Evaluation cur = objective(s);
  double step = 1.0;
  int it = 0;
  for (;; ++it) {
    if (opt.record_trace) fit.trace.push_back(cur.value);

    std::vector<double> dir(n, 0.0);
    double pg_norm = 0.0;
    double slope = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
      double g = cur.grad[i] / weight;
      if ((s[i] >= cap && g > 0.0) || (s[i] <= -cap && g < 0.0)) g = 0.0;
      pg_norm = std::max(pg_norm, std::abs(g));
      dir[i] = g / std::max(cur.curv[i] / weight, 1e-12);
    }
    fit.gradient_norm = pg_norm;
    if (pg_norm <= opt.gradient_tolerance || it >= opt.max_iterations) break;

    // Armijo backtracking on the projected step.
    bool accepted = false;
    double trial = std::min(step * 2.0, 1e6);
    while (trial > 1e-20) {
      std::vector<double> next = s;
      for (std::size_t i = 1; i < n; ++i) next[i] = std::clamp(s[i] + trial * dir[i], -cap, cap);
      slope = 0.0;
      for (std::size_t i = 1; i < n; ++i) slope += cur.grad[i] / weight * (next[i] - s[i]);
      Evaluation cand = objective(next);
      bool ok = cand.value / weight >= cur.value / weight + 1e-4 * slope;
      if (!ok && std::abs(cand.value - cur.value) <= kValueResolution * std::abs(cur.value)) {
        // Near the optimum the predicted gain drops below the resolution of
        // the summed log-likelihood. Fall back to the curvature condition:
        // the step must not overshoot the 1-D maximum along the path.
        double end_slope = 0.0;
        for (std::size_t i = 1; i < n; ++i) end_slope += cand.grad[i] / weight * (next[i] - s[i]);
        ok = end_slope >= -0.5 * slope;
      }
      if (ok) {
        s = std::move(next);
        cur = std::move(cand);
        step = trial;
        accepted = true;
        break;
      }
      trial *= 0.5;
    }
    if (!accepted) break;  // no representable ascent left
  }

  fit.iterations = it;
  fit.scores = s;
  fit.log_likelihood = cur.value;
  fit.diverged = std::any_of(s.begin() + 1, s.end(), at_cap);
  fit.converged = !fit.diverged && fit.gradient_norm <= opt.gradient_tolerance;
  if (fit.diverged) fit.warnings.push_back("scores reached the cap |s| = " + std::to_string(cap) +
                                           "; the MLE diverges (dominant preference)");
  return fit;
}

}  // namespace

PairwiseCounts::PairwiseCounts(std::size_t n) : n_(n), wins_(n * n, 0) {
  if (n < 2) throw DomainError("pairwise counts need at least two options");
}

PairwiseCounts::PairwiseCounts(std::size_t n, std::vector<std::uint64_t> wins)
    : n_(n), wins_(std::move(wins)) {
  if (n < 2) throw DomainError("pairwise counts need at least two options");
  if (wins_.size() != n * n) throw ValidationError("win matrix must hold N*N entries");
  for (std::size_t i = 0; i < n; ++i) {
    if (wins_[i * n + i] != 0) throw ValidationError("win matrix diagonal must be zero");
  }
}

std::uint64_t PairwiseCounts::total() const {
  return std::accumulate(wins_.begin(), wins_.end(), std::uint64_t{0});
}

FitResult fit_bt(const PairwiseCounts& counts, const FitOptions& options) {
  const std::size_t n = counts.size();
  DisjointSets sets(n);
  std::vector<std::string> one_sided;
  for (std::size_t i = 0; i < n; ++i) {
    if (counts(i, i) != 0) throw ValidationError("win matrix diagonal must be zero");
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto a = counts(i, j);
      const auto b = counts(j, i);
      if (a + b > 0) sets.unite(i, j);
      if ((a == 0) != (b == 0)) {
        one_sided.push_back("pair (" + std::to_string(i) + "," + std::to_string(j) +
                            ") is one-sided; its MLE gap is infinite");
      }
    }
  }
  require_connected(sets, n);

  const Objective objective = [&](const std::vector<double>& s) {
    Evaluation e;
    e.grad.assign(n, 0.0);
    e.curv.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double wij = static_cast<double>(counts(i, j));
        const double wji = static_cast<double>(counts(j, i));
        if (wij + wji == 0.0) continue;
        const double d = s[i] - s[j];
        const double p = sigmoid(d);
        e.value += wij * log_sigmoid(d) + wji * log_sigmoid(-d);
        const double g = wij * (1.0 - p) - wji * p;
        e.grad[i] += g;
        e.grad[j] -= g;
        const double c = (wij + wji) * p * (1.0 - p);
        e.curv[i] += c;
        e.curv[j] += c;
      }
    }
    return e;
  };

  FitResult fit = ascend(n, static_cast<double>(counts.total()), objective, options);
  fit.warnings.insert(fit.warnings.begin(), one_sided.begin(), one_sided.end());
  fit.labels = counts.labels;
  return fit;
}

FitResult fit_pl(const std::vector<RankingCount>& rankings, std::size_t n_options,
                 const FitOptions& options) {
  if (n_options < 2) throw DomainError("fit_pl needs at least two options");
  if (rankings.empty()) throw DomainError("fit_pl needs at least one ranking");
  DisjointSets sets(n_options);
  double weight = 0.0;
  for (const auto& r : rankings) {
    for (std::size_t idx : r.ranking.indices()) {
      if (idx >= n_options) throw DomainError("ranking index out of range");
      sets.unite(idx, r.ranking[0]);
    }
    weight += static_cast<double>(r.multiplicity);
  }
  require_connected(sets, n_options);
  if (!(weight > 0.0)) throw DomainError("rankings carry zero total multiplicity");

  const Objective objective = [&](const std::vector<double>& s) {
    Evaluation e;
    e.grad.assign(n_options, 0.0);
    e.curv.assign(n_options, 0.0);
    std::vector<double> share;
    for (const auto& r : rankings) {
      const double m = static_cast<double>(r.multiplicity);
      if (m == 0.0) continue;
      const std::size_t k = r.ranking.size();
      for (std::size_t u = 0; u + 1 < k; ++u) {
        double top = -std::numeric_limits<double>::infinity();
        for (std::size_t v = u; v < k; ++v) top = std::max(top, s[r.ranking[v]]);
        share.assign(k - u, 0.0);
        double total = 0.0;
        for (std::size_t v = u; v < k; ++v) total += share[v - u] = std::exp(s[r.ranking[v]] - top);
        e.value += m * (s[r.ranking[u]] - top - std::log(total));
        e.grad[r.ranking[u]] += m;
        for (std::size_t v = u; v < k; ++v) {
          const double pi = share[v - u] / total;
          e.grad[r.ranking[v]] -= m * pi;
          e.curv[r.ranking[v]] += m * pi * (1.0 - pi);
        }
      }
    }
    return e;
  };
  return ascend(n_options, weight, objective, options);
}

Probability predict(const FitResult& fit, std::size_t i, std::size_t j) {
  if (i >= fit.scores.size() || j >= fit.scores.size()) throw DomainError("option index out of range");
  return bt_prob(fit.scores[i], fit.scores[j]);
}

PairwiseCounts parse_counts(std::string_view text) {
  std::istringstream in{std::string(text)};
  long long n = 0;
  if (!(in >> n) || n < 2) throw ValidationError("count file must start with N >= 2");
  std::vector<std::uint64_t> wins;
  wins.reserve(static_cast<std::size_t>(n * n));
  for (long long k = 0; k < n * n; ++k) {
    long long w = 0;
    if (!(in >> w)) throw ValidationError("count file ended after " + std::to_string(k) + " of " +
                                          std::to_string(n * n) + " entries");
    if (w < 0) throw ValidationError("win counts must be non-negative");
    wins.push_back(static_cast<std::uint64_t>(w));
  }
  std::string extra;
  if (in >> extra) throw ValidationError("trailing data in count file: '" + extra + "'");
  return PairwiseCounts(static_cast<std::size_t>(n), std::move(wins));
}

PairwiseCounts read_counts(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "': " + std::strerror(errno));
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_counts(buf.str());
}

PairwiseCounts counts_from_samples(const std::vector<dataset::PreferenceSample>& samples,
                                   std::vector<std::string> labels,
                                   const dataset::TemplateBank& bank) {
  const bool fixed = !labels.empty();
  std::vector<std::pair<std::size_t, std::size_t>> outcomes;
  outcomes.reserve(samples.size());
  const auto index_of = [&](const std::string& name) {
    const auto it = std::find(labels.begin(), labels.end(), name);
    if (it != labels.end()) return static_cast<std::size_t>(it - labels.begin());
    if (fixed) throw ValidationError("sample references unknown option '" + name + "'");
    labels.push_back(name);
    return labels.size() - 1;
  };
  for (const auto& sample : samples) {
    const auto d = dataset::decode(sample, bank);
    const std::size_t w = index_of(d.winner);
    const std::size_t l = index_of(d.loser);
    outcomes.emplace_back(w, l);
  }
  PairwiseCounts counts(std::max<std::size_t>(labels.size(), 2));
  for (const auto& [w, l] : outcomes) ++counts(w, l);
  counts.labels = std::move(labels);
  return counts;
}

}  // namespace prefsense
