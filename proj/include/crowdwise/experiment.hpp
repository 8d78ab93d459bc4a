#pragma once

#include <string>
#include <vector>

#include "crowdwise/config.hpp"
#include "crowdwise/learning.hpp"

namespace crowdwise {

// Process exit codes shared by the commands and the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitValidation = 3;
inline constexpr int kExitNotConverged = 4;

// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

// analyze: writes <output_dir>/analysis.json with pi, mu*, V_min, alpha*,
// the segment direction, and (when z0 is given) the Nash classification.
int cmd_analyze(const ExperimentConfig& cfg);

// simulate: writes <output_dir>/trajectory.csv (columns
// t,active_agent,z_1..z_n,V,M; V and M empty while a stubborn agent exists)
// and <output_dir>/summary.json. Returns kExitNotConverged when max_steps
// ran out.
int cmd_simulate(const ExperimentConfig& cfg);

// sweep: one learning run per seed (parallel workers, capped by
// CROWDWISE_THREADS), per-seed summary files plus aggregate.json.
int cmd_sweep(const ExperimentConfig& cfg);

// opinions: writes <output_dir>/opinions.csv (columns t,x_1..x_n).
// With replicates > 0 also writes opinions_summary.json containing the
// empirical variance of x(t_max) across replicate streams next to the
// predicted values.
int cmd_opinions(const ExperimentConfig& cfg);

// Argument-vector entry point ("analyze --config path ..."); returns the
// process exit code. The binary's main() forwards here.
int run_cli(const std::vector<std::string>& args);

}  // namespace crowdwise
