#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "crowdwise/equilibrium.hpp"

namespace crowdwise {

struct RunConfig {
  std::uint64_t seed = 0;
  SelfConfidenceProfile z0;
  long max_steps = 1'000'000;
  double tol_fp = 1e-10;     // fixed-point detection tolerance
  long record_every = 1;     // trajectory sampling stride
};

// One recorded state of the learning dynamics. V and the diagnostic
// M = max_j pi_j sigma_j^2 / (1 - z_j) are only defined without stubborn
// agents; M carries +inf as the sentinel, V is absent.
struct TrajectoryRecord {
  long t;
  int active_agent;  // -1 on the initial row
  Vector z;
  std::optional<double> v;
  double m;
};

struct RunSummary {
  bool converged = false;
  long steps = 0;
  std::optional<long> entry_time;   // first step with no stubborn agent
  std::optional<double> alpha_hat;  // recovered alpha, present iff converged
  Vector final_z;
  bool apriori_bound_ok = false;
};

struct RunResult {
  RunSummary summary;
  std::vector<TrajectoryRecord> trajectory;
};

// One asynchronous update: an agent drawn uniformly at random replaces her
// self-confidence with a value drawn uniformly from her best-response set
// (the point for Point/{1}, a uniform unit draw for the interval kinds; the
// closed interval's endpoint has probability zero). Stream order: activation
// draw first, then the value draw (interval kinds only).
std::pair<SelfConfidenceProfile, int> br_step(const InfluenceNetwork& net,
                                              const NoiseModel& noise,
                                              const SelfConfidenceProfile& z,
                                              SplitMix64& rng);

// Runs the dynamics until every agent's best response is point-valued and
// matched within tol_fp, or max_steps is exhausted (converged = false,
// reported rather than thrown). The trajectory records the initial row,
// every record_every-th step, and the final step. The a-priori bound flag
// checks z_j(t) <= 1 - pi_j sigma_j^2 / M(entry) on all recorded rows from
// the entry time on.
RunResult run(const InfluenceNetwork& net, const NoiseModel& noise,
              const RunConfig& cfg);

struct DiagnosticsReport {
  long entry_index = -1;  // first recorded row with no stubborn agent
  long rows_checked = 0;
  double max_m_increase = 0.0;
  double max_v_increase = 0.0;
};

// Replays a recorded trajectory and verifies: M non-increasing and V
// non-increasing (within 1e-12) from the entry row on, and that stubborn
// agents never reappear after the profile first becomes fully regular.
// Throws DiagnosticViolation naming the first failing step.
DiagnosticsReport diagnostics(const InfluenceNetwork& net,
                              const NoiseModel& noise,
                              const std::vector<TrajectoryRecord>& trajectory);

}  // namespace crowdwise
