#include "crowdwise/learning.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace crowdwise {

namespace {

constexpr double kMonotoneSlack = 1e-12;
constexpr double kBoundSlack = 1e-12;

bool interior(const Vector& z) { return (z.array() < 1.0).all(); }

double m_diagnostic(const InfluenceNetwork& net, const NoiseModel& noise,
                    const Vector& z) {
  if (!interior(z)) return std::numeric_limits<double>::infinity();
  const Vector& pi = net.centrality();
  double m = 0.0;
  for (int j = 0; j < net.n(); ++j)
    m = std::max(m, pi(j) * noise.sigma2(j) / (1.0 - z(j)));
  return m;
}

TrajectoryRecord make_record(const InfluenceNetwork& net,
                             const NoiseModel& noise, long t, int active,
                             const Vector& z) {
  TrajectoryRecord rec{t, active, z, std::nullopt,
                       m_diagnostic(net, noise, z)};
  if (interior(z))
    rec.v = common_cost(net, SelfConfidenceProfile(z), noise);
  return rec;
}

// Fixed point: every best response is point-valued and matched within tol.
// Any stubborn agent forces an interval-valued response somewhere, so the
// detailed scan is skipped in that regime.
bool at_fixed_point(const InfluenceNetwork& net, const NoiseModel& noise,
                    const Vector& z, double tol) {
  if (!interior(z)) return false;
  SelfConfidenceProfile profile(z);
  for (int i = 0; i < net.n(); ++i) {
    BestResponseSet br = best_response(net, noise, profile, i);
    if (br.kind != BestResponseSet::Kind::Point) return false;
    if (std::abs(z(i) - br.value) > tol) return false;
  }
  return true;
}

}  // namespace

std::pair<SelfConfidenceProfile, int> br_step(const InfluenceNetwork& net,
                                              const NoiseModel& noise,
                                              const SelfConfidenceProfile& z,
                                              SplitMix64& rng) {
  int k = rng.next_below(net.n());
  BestResponseSet br = best_response(net, noise, z, k);
  Vector next = z.z;
  switch (br.kind) {
    case BestResponseSet::Kind::Point:
      next(k) = br.value;
      break;
    case BestResponseSet::Kind::One:
      next(k) = 1.0;
      break;
    case BestResponseSet::Kind::HalfOpen01:
    case BestResponseSet::Kind::Closed01:
      next(k) = rng.next_unit();
      break;
  }
  return {SelfConfidenceProfile(std::move(next)), k};
}

RunResult run(const InfluenceNetwork& net, const NoiseModel& noise,
              const RunConfig& cfg) {
  if (cfg.z0.size() != net.n())
    throw std::invalid_argument("z0 length does not match network size");
  if (cfg.max_steps < 1) throw std::invalid_argument("max_steps must be >= 1");
  if (!(cfg.tol_fp > 0.0)) throw std::invalid_argument("tol_fp must be > 0");
  if (cfg.record_every < 1)
    throw std::invalid_argument("record_every must be >= 1");

  SplitMix64 rng(cfg.seed);
  SelfConfidenceProfile z = cfg.z0;

  RunResult result;
  result.trajectory.push_back(make_record(net, noise, 0, -1, z.z));

  std::optional<long> entry;
  double m_entry = std::numeric_limits<double>::infinity();
  if (interior(z.z)) {
    entry = 0;
    m_entry = result.trajectory.front().m;
  }

  long t = 0;
  bool converged = at_fixed_point(net, noise, z.z, cfg.tol_fp);
  while (!converged && t < cfg.max_steps) {
    auto [next, active] = br_step(net, noise, z, rng);
    z = std::move(next);
    ++t;
    if (!entry && interior(z.z)) {
      entry = t;
      m_entry = m_diagnostic(net, noise, z.z);
    } else if (entry && !interior(z.z)) {
      // Cannot happen: point responses stay below 1 once everyone is
      // regular.
      throw DiagnosticViolation(t, "re-entered stubbornness after step " +
                                       std::to_string(*entry));
    }
    if (t % cfg.record_every == 0 || t == cfg.max_steps)
      result.trajectory.push_back(make_record(net, noise, t, active, z.z));
    converged = at_fixed_point(net, noise, z.z, cfg.tol_fp);
    if (converged && result.trajectory.back().t != t)
      result.trajectory.push_back(make_record(net, noise, t, active, z.z));
  }

  RunSummary& summary = result.summary;
  summary.converged = converged;
  summary.steps = t;
  summary.entry_time = entry;
  summary.final_z = z.z;
  if (converged)
    summary.alpha_hat = zstar_membership(net, noise, z).alpha_hat;

  summary.apriori_bound_ok = entry.has_value();
  if (entry) {
    const Vector& pi = net.centrality();
    for (const TrajectoryRecord& rec : result.trajectory) {
      if (rec.t < *entry) continue;
      for (int j = 0; j < net.n(); ++j) {
        double bound = 1.0 - pi(j) * noise.sigma2(j) / m_entry + kBoundSlack;
        if (rec.z(j) > bound) summary.apriori_bound_ok = false;
      }
    }
  }
  return result;
}

DiagnosticsReport diagnostics(const InfluenceNetwork& net,
                              const NoiseModel& noise,
                              const std::vector<TrajectoryRecord>& trajectory) {
  if (trajectory.empty())
    throw std::invalid_argument("diagnostics need a nonempty trajectory");

  DiagnosticsReport report;
  bool entered = false;
  double prev_m = 0.0, prev_v = 0.0;
  for (std::size_t idx = 0; idx < trajectory.size(); ++idx) {
    const TrajectoryRecord& rec = trajectory[idx];
    bool is_interior = interior(rec.z);
    if (entered && !is_interior)
      throw DiagnosticViolation(
          rec.t, "stubborn indicator re-activated at step " +
                     std::to_string(rec.t));
    if (!entered && is_interior) {
      entered = true;
      report.entry_index = static_cast<long>(idx);
      prev_m = m_diagnostic(net, noise, rec.z);
      prev_v = common_cost(net, SelfConfidenceProfile(rec.z), noise);
      ++report.rows_checked;
      continue;
    }
    if (!entered) continue;

    double m = m_diagnostic(net, noise, rec.z);
    double v = common_cost(net, SelfConfidenceProfile(rec.z), noise);
    report.max_m_increase = std::max(report.max_m_increase, m - prev_m);
    report.max_v_increase = std::max(report.max_v_increase, v - prev_v);
    if (m > prev_m + kMonotoneSlack)
      throw DiagnosticViolation(rec.t, "M increased at step " +
                                           std::to_string(rec.t));
    if (v > prev_v + kMonotoneSlack)
      throw DiagnosticViolation(rec.t, "V increased at step " +
                                           std::to_string(rec.t));
    prev_m = m;
    prev_v = v;
    ++report.rows_checked;
  }
  return report;
}

}  // namespace crowdwise
