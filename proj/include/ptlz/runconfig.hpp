#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ptlz/model.hpp"

namespace ptlz {

inline constexpr const char* kVersionString = "0.1.0";

// Parse or validation failure. Messages from the file parser carry
// "file:line:" prefixes; messages from validate() name the offending
// section.key.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// What a run produces besides the trajectory and spectrum tables:
//   oracle         integrate the four-level system only
//   airy           also compare the expansion against the pair oracle
//                  in the linearized turning-point window
//   quartic_bessel same, in the far quartic window
//   all            both comparison windows
enum class RegimeSelection { oracle, airy, quartic_bessel, all };

const char* to_string(RegimeSelection r);
RegimeSelection parse_regime_selection(const std::string& s);  // throws

// Settings for one invocation, read from an INI-style file:
//
//   [model]  omega1 omega2 gamma0 gamma kappa eta
//   [sweep]  alpha beta
//   [time]   start stop samples
//   [series] order power_cap
//   [run]    regime tol out jobs
//   [grid]   alpha beta kappa eta     (whitespace-separated value lists)
//
// '#' or ';' starts a comment; blank lines are ignored. Unknown sections or
// keys are errors. A [grid] key turns the run into a sweep over the
// cartesian product of the listed values (absent keys keep their scalar).
struct RunConfig {
  ModelParams model;
  SweepParams sweep;

  double t_start = -2.0;
  double t_stop = 2.0;
  int samples = 81;  // evaluation grid points, endpoints included

  int order = 4;      // truncation order of the coupling expansion
  int power_cap = 40;  // highest retained polynomial power

  RegimeSelection regime = RegimeSelection::oracle;
  double tol = 1e-10;  // integrator error budget per unit step
  std::string out_dir = "out";
  int jobs = 1;  // sweep points integrated concurrently

  std::vector<double> grid_alpha, grid_beta, grid_kappa, grid_eta;

  // Throws ConfigError on the first violated invariant: ordered time span,
  // samples >= 2, tol within the integrator's accepted range [1e-13, 1e-3],
  // order in [0, 16], power_cap in [order + 8, 200], jobs >= 1, finite
  // parameter values, and matched linewidths plus beta != 0 whenever a
  // comparison regime is selected.
  void validate() const;

  bool has_grid() const;

  // Resolved per-point configurations for the sweep: cartesian product in
  // the fixed order alpha, beta, kappa, eta (eta fastest), each with grids
  // cleared and out_dir pointing at "<out_dir>/point_NNN". Without a grid,
  // returns a single copy of *this.
  std::vector<RunConfig> sweep_points() const;
};

// Parse from a stream; `filename` only labels error messages.
RunConfig parse_config(std::istream& in, const std::string& filename);
RunConfig load_config(const std::string& path);

// Command-line values that take precedence over the file.
struct FlagOverrides {
  std::optional<std::string> out_dir;
  std::optional<std::string> regime;
  std::optional<int> order;
  std::optional<double> tol;
  std::optional<int> jobs;
};

void apply_overrides(RunConfig& cfg, const FlagOverrides& flags);

// Pretty-printed JSON object echoing every resolved setting; embedded
// verbatim in run manifests.
std::string config_to_json(const RunConfig& cfg);

}  // namespace ptlz
