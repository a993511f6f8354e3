// Runs every acceptance criterion at full size and prints one PASS/FAIL
// line each. Exit status is nonzero if any criterion fails.

#include <cstdio>

#include "prefsense/verify.hpp"

int main() {
  const auto results = prefsense::verify::run_suite();
  int failures = 0;
  for (const auto& r : results) {
    std::printf("%s\n", prefsense::verify::format_result(r).c_str());
    if (!r.pass) ++failures;
  }
  std::printf("%zu/%zu criteria passed\n", results.size() - failures, results.size());
  return failures == 0 ? 0 : 1;
}
