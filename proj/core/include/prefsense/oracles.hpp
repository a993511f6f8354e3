#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "prefsense/preference_models.hpp"
#include "prefsense/sensitivity.hpp"

namespace prefsense::oracles {

// Independent numerical checks for the closed forms in prefsense. Nothing in
// here is used by the production code paths it verifies.

using ScalarFn = std::function<double(double)>;
using PairFn = std::function<double(double, double)>;

/// Central difference (f(x+h) - f(x-h)) / (2h). x +/- h must stay in (0,1).
double finite_diff(const ScalarFn& fn, double x, double h);

/// Same with the default step: h = 1e-6 * max(1, |x|), shrunk so both
/// evaluation points stay at least 1e-9 from 0 and 1.
double finite_diff(const ScalarFn& fn, double x);

/// Central difference of a two-slot function in slot 0 or 1.
double finite_diff(const PairFn& fn, double a, double b, int slot, double h);
double finite_diff(const PairFn& fn, double a, double b, int slot);

/// Step actually used by the default-step overloads.
double default_step(double x);

struct MonteCarloEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
};

/// Hit-or-miss estimate of the area of {(p_ik, p_kj) in (0,1)^2 :
/// |d p_ij / d p_ik| > M} for the Bradley-Terry composition. Sampling is
/// split into fixed chunks with independent counter streams; the result is
/// bit-identical for a given (M, n, seed) regardless of thread count.
MonteCarloEstimate mc_area_bt(double m, std::uint64_t n, std::uint64_t seed);

/// Trapezoid integral over the fixed coordinate in (0, beta/(4 alpha M)) of
/// the width of the PL sensitive interval. The width is obtained from the
/// discriminant of the quadratic inequality |partial| > M, not from the
/// region helpers.
double quad_area_pl(double m, double alpha, double beta, PlAxis which, std::size_t grid_n);

/// Probabilities of every K-permutation of the option set, computed with the
/// raw-exponential form prod_u exp(s_u) / sum_{v>=u} exp(s_v). K <= 6.
std::map<std::vector<std::size_t>, double> brute_force_pl(const ScoredOptionSet& options,
                                                          std::size_t k);

/// Number of strict local maxima of the logit-normal density on the interior
/// grid x_i = (i + 1) / (grid_n + 1). Runs of equal values count once.
int mode_count(double sigma2, std::size_t grid_n);

}  // namespace prefsense::oracles
