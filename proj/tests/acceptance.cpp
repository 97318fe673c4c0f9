// Acceptance gate: runs every registered verification check once at the
// standard thresholds and prints one pass/fail line per check. Exits 0 only
// if all of them hold.
#include <cstdio>

#include "ptlz/checks.hpp"

int main() {
  const std::vector<ptlz::CheckResult> results = ptlz::run_checks(1.0);
  int failed = 0;
  for (const ptlz::CheckResult& r : results) {
    std::printf("%s %-26s %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                r.detail.c_str());
    if (!r.pass) ++failed;
  }
  std::printf("%zu/%zu acceptance checks passed\n", results.size() - failed,
              results.size());
  return failed == 0 ? 0 : 1;
}
