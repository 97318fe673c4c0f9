#pragma once

#include <string>
#include <vector>

#include "ptlz/runconfig.hpp"

namespace ptlz {

// Process exit codes shared by the pipeline and the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailure = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitNumericFailure = 3;

struct RunResult {
  int exit_code = kExitOk;
  std::vector<std::string> artifacts;  // paths relative to the output root
  std::string message;                 // failure detail, empty on success
};

// Execute one resolved parameter point. Writes into cfg.out_dir:
//   trajectory.csv   four-level amplitudes on the sampling grid,
//                    starting from a = (1,0,0,0) at time.start
//   spectrum.csv     instantaneous eigenvalue branches on the same grid
//   comparison.csv   expansion-vs-oracle deviation per truncation order
//                    (comparison regimes only)
//   manifest.json    config echo, versions, artifact list, invariant drift
// Data files carry no timestamps, so identical configs produce byte-identical
// CSV output; the manifest records the generation time. A failure mid-way
// still writes a manifest with status "error" and the artifacts completed.
RunResult run_point(const RunConfig& cfg);

// Execute the whole configuration: a single point without a [grid] section,
// otherwise every sweep point (at most cfg.jobs concurrently, each writing
// only its own point_NNN directory) plus a top-level manifest indexing them.
// The exit code is the worst point's.
RunResult run(const RunConfig& cfg);

}  // namespace ptlz
