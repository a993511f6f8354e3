#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "prefsense/raster.hpp"
#include "prefsense/sensitivity.hpp"

namespace prefsense::verify {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  double budget_seconds = 0.0;
  std::string detail;
};

struct SuiteOptions {
  /// Quick mode runs the dataset sweep on 3 of its 21 grid points and the
  /// raster check at resolution 256. Tolerances are unchanged.
  bool quick = false;
  /// Seeds for the Monte-Carlo, dataset and fitting checks.
  std::uint64_t seed = 0;
};

/// Runs the 13 numerical acceptance checks. Self-contained: no files, no
/// network, deterministic for a given SuiteOptions.
std::vector<CriterionResult> run_suite(const SuiteOptions& options = {});

/// One line per criterion: "PASS [ n] name  seconds  detail".
std::string format_result(const CriterionResult& result);

enum class RasterKind { bt_d_pik, bt_d_pkj, pl_d_uv, pl_d_vu };

struct TransitionReport {
  std::size_t checked = 0;     ///< cell/threshold pairs compared
  std::size_t mismatches = 0;  ///< pairs more than one cell from a boundary with the wrong class
  std::string first_mismatch;
};

/// Compares raster classes with the analytic sensitive regions: every cell
/// whose center lies more than one cell width from the region boundary must
/// have class > t inside the threshold-t region and class <= t outside.
/// `ctx` supplies alpha/beta for the PL kinds and is ignored for BT.
TransitionReport check_transitions(const RasterGrid& grid, RasterKind kind,
                                   const PlSensitivityContext& ctx);

}  // namespace prefsense::verify
