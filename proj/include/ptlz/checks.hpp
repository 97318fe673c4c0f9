#pragma once

#include <functional>
#include <string>
#include <vector>

namespace ptlz {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;  // worst measured margin vs limit; expected/actual on
                       // golden-value mismatches
};

struct CheckCase {
  std::string name;
  std::string summary;  // one line: what the check verifies
  std::function<CheckResult(double tol_scale)> fn;
};

// The built-in verification suite: golden coefficient tables, analytic
// identities probed numerically, conserved-quantity drifts, cross-module
// consistency, convergence-rate fits, and output determinism. Deterministic
// order and content (fixed RNG seeds).
const std::vector<CheckCase>& check_suite();

// Run every check with all pass/fail thresholds multiplied by tol_scale
// (scale < 1 tightens every margin). Exceptions inside a check are caught
// and reported as failures.
std::vector<CheckResult> run_checks(double tol_scale = 1.0);

}  // namespace ptlz
