#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "crowdwise/dynamics.hpp"

namespace crowdwise {

// How the initial profile is specified: an explicit vector, "uniform:c",
// or "zstar:alpha" (resolved against the network once pi is known).
struct Z0Spec {
  enum class Kind { None, Explicit, Uniform, ZStar };

  Kind kind = Kind::None;
  Vector values;       // Explicit
  double param = 0.0;  // Uniform / ZStar
};

// One experiment, fully specified by a single JSON file.
struct ExperimentConfig {
  Matrix P;
  Vector sigma2;
  double theta = 0.0;
  Z0Spec z0;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> seeds;  // sweep only
  long max_steps = 1'000'000;
  double tol_fp = 1e-10;
  long record_every = 1;
  std::string output_dir = "out";
  NoiseKind noise = NoiseKind::Gaussian;
  long t_max = 200;      // opinions
  long replicates = 0;   // opinions; 0 = single trajectory
};

// Throws ConfigError with the offending field path.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

// Materializes z0 (presets need pi); ConfigError if z0 is missing or the
// zstar alpha falls outside (0, alpha*].
SelfConfidenceProfile resolve_z0(const ExperimentConfig& cfg,
                                 const InfluenceNetwork& net,
                                 const NoiseModel& noise);

}  // namespace crowdwise
