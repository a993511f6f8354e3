#include "prefsense/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "prefsense/rng.hpp"

namespace prefsense::oracles {
namespace {

constexpr double kBoundaryGap = 1e-9;

void require_inside(double x, double h) {
  if (!(h > 0.0)) throw DomainError("finite-difference step must be positive");
  if (!(x - h > 0.0 && x + h < 1.0)) {
    throw DomainError("finite-difference stencil leaves (0,1) at x = " + std::to_string(x));
  }
}

}  // namespace

double default_step(double x) {
  double h = 1e-6 * std::max(1.0, std::abs(x));
  h = std::min(h, x - kBoundaryGap);
  h = std::min(h, 1.0 - kBoundaryGap - x);
  if (!(h > 0.0)) throw DomainError("point too close to the boundary for a central difference");
  return h;
}

double finite_diff(const ScalarFn& fn, double x, double h) {
  require_inside(x, h);
  return (fn(x + h) - fn(x - h)) / (2.0 * h);
}

double finite_diff(const ScalarFn& fn, double x) { return finite_diff(fn, x, default_step(x)); }

double finite_diff(const PairFn& fn, double a, double b, int slot, double h) {
  if (slot == 0) return finite_diff([&](double t) { return fn(t, b); }, a, h);
  if (slot == 1) return finite_diff([&](double t) { return fn(a, t); }, b, h);
  throw DomainError("slot must be 0 or 1");
}

double finite_diff(const PairFn& fn, double a, double b, int slot) {
  return finite_diff(fn, a, b, slot, default_step(slot == 0 ? a : b));
}

MonteCarloEstimate mc_area_bt(double m, std::uint64_t n, std::uint64_t seed) {
  if (!(m > 1.0)) throw UnsupportedThreshold(m);
  if (n == 0) throw DomainError("Monte-Carlo estimate needs n > 0");

  constexpr std::uint64_t kChunk = 1 << 16;
  std::uint64_t hits = 0;
  for (std::uint64_t start = 0, chunk = 0; start < n; start += kChunk, ++chunk) {
    CounterRng rng(seed, chunk);
    const std::uint64_t end = std::min(n, start + kChunk);
    for (std::uint64_t i = start; i < end; ++i) {
      // Shift off 0 so both coordinates are strictly inside (0,1).
      const double p_ik = rng.uniform() + 0x1.0p-54;
      const double p_kj = rng.uniform() + 0x1.0p-54;
      const double num = p_kj * (1.0 - p_kj);
      const double den = p_ik + p_kj - 2.0 * p_ik * p_kj - 1.0;
      if (num > m * den * den) ++hits;
    }
  }
  MonteCarloEstimate est;
  est.n_samples = n;
  est.seed = seed;
  est.value = static_cast<double>(hits) / static_cast<double>(n);
  est.std_error = std::sqrt(est.value * (1.0 - est.value) / static_cast<double>(n));
  return est;
}

double quad_area_pl(double m, double alpha, double beta, PlAxis which, std::size_t grid_n) {
  if (!(m > 1.0)) throw UnsupportedThreshold(m);
  if (!(alpha >= 1.0) || !(beta > 0.0)) throw DomainError("need alpha >= 1 and beta > 0");
  if (grid_n < 2) throw DomainError("quadrature grid needs at least two intervals");

  // |partial| > M as a quadratic A t^2 + B t + C < 0 in the free coordinate t.
  const auto width = [&](double fixed) {
    double a = 0.0, b = 0.0, c = 0.0;
    if (which == PlAxis::uv) {
      a = m;
      b = 2.0 * alpha * m * fixed - beta;
      c = m * alpha * alpha * fixed * fixed;
    } else {
      a = m * alpha * alpha;
      b = 2.0 * alpha * m * fixed - beta;
      c = m * fixed * fixed;
    }
    const double disc = b * b - 4.0 * a * c;
    return disc > 0.0 ? std::sqrt(disc) / a : 0.0;
  };

  const double upper = beta / (4.0 * alpha * m);
  const double h = upper / static_cast<double>(grid_n);
  double sum = 0.5 * (width(0.0) + width(upper));
  for (std::size_t i = 1; i < grid_n; ++i) sum += width(h * static_cast<double>(i));
  return sum * h;
}

std::map<std::vector<std::size_t>, double> brute_force_pl(const ScoredOptionSet& options,
                                                          std::size_t k) {
  if (k > 6) throw SizeGuardError("brute-force enumeration limited to K <= 6");
  if (k < 2 || k > options.size()) throw DomainError("need 2 <= K <= N");

  std::map<std::vector<std::size_t>, double> out;
  std::vector<std::size_t> current;
  std::vector<bool> used(options.size(), false);

  const auto probability = [&](const std::vector<std::size_t>& omega) {
    double p = 1.0;
    for (std::size_t u = 0; u + 1 < omega.size(); ++u) {
      double total = 0.0;
      for (std::size_t v = u; v < omega.size(); ++v) total += std::exp(options.score(omega[v]));
      p *= std::exp(options.score(omega[u])) / total;
    }
    return p;
  };

  const std::function<void()> extend = [&]() {
    if (current.size() == k) {
      out.emplace(current, probability(current));
      return;
    }
    for (std::size_t i = 0; i < options.size(); ++i) {
      if (used[i]) continue;
      used[i] = true;
      current.push_back(i);
      extend();
      current.pop_back();
      used[i] = false;
    }
  };
  extend();
  return out;
}

int mode_count(double sigma2, std::size_t grid_n) {
  if (grid_n < 3) throw DomainError("mode counting needs at least three grid points");
  std::vector<double> f(grid_n);
  for (std::size_t i = 0; i < grid_n; ++i) {
    const double x = static_cast<double>(i + 1) / static_cast<double>(grid_n + 1);
    f[i] = logit_normal_density(x, sigma2);
  }

  int modes = 0;
  std::size_t i = 0;
  while (i < grid_n) {
    std::size_t j = i;
    while (j + 1 < grid_n && f[j + 1] == f[i]) ++j;
    const bool rises_in = i > 0 && f[i - 1] < f[i];
    const bool falls_out = j + 1 < grid_n && f[j + 1] < f[i];
    if (rises_in && falls_out) ++modes;
    i = j + 1;
  }
  return modes;
}

}  // namespace prefsense::oracles
