#include "crowdwise/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace crowdwise {

namespace {

constexpr double kTieTolRel = 1e-12;     // variance tie tolerance, relative
constexpr double kPointTol = 1e-9;       // point-response membership
constexpr double kMembershipTol = 1e-9;  // Z* per-entry residual
constexpr double kEndpointSlack = 1e-12;

void check_agent(const InfluenceNetwork& net, int k) {
  if (k < 0 || k >= net.n())
    throw std::invalid_argument("agent index " + std::to_string(k) +
                                " out of range");
}

// Estimation variance of agent i on the flat stretch z_i in [0,1), given
// that someone else is stubborn.
double plateau_variance(const InfluenceNetwork& net, const NoiseModel& noise,
                        const SelfConfidenceProfile& z, int i) {
  Vector zz = z.z;
  zz(i) = 0.0;
  SelfConfidenceProfile regular(std::move(zz));
  return estimation_variances(net, regular, noise)(i);
}

}  // namespace

Aggregates aggregates(const InfluenceNetwork& net, const NoiseModel& noise,
                      const SelfConfidenceProfile& z, int k) {
  check_agent(net, k);
  const Vector& pi = net.centrality();
  Aggregates agg{0.0, 0.0};
  for (int j = 0; j < net.n(); ++j) {
    if (j == k) continue;
    if (z.z(j) == 1.0)
      throw StubbornPresent("aggregates need z_j < 1 for all j != " +
                            std::to_string(k));
    double w = pi(j) / (1.0 - z.z(j));
    agg.a += w;
    agg.b += w * w * noise.sigma2(j);
  }
  return agg;
}

bool BestResponseSet::contains(double x, double point_tol) const {
  switch (kind) {
    case Kind::Point:
      return std::abs(x - value) <= point_tol;
    case Kind::HalfOpen01:
      return x >= 0.0 && x < 1.0;
    case Kind::Closed01:
      return x >= 0.0 && x <= 1.0;
    case Kind::One:
      return x == 1.0;
  }
  return false;
}

NodeSet stubborn_reachable(const InfluenceNetwork& net,
                           const SelfConfidenceProfile& z, int i) {
  check_agent(net, i);
  const Digraph& g = net.graph();
  std::vector<char> stubborn(net.n(), 0);
  for (int j = 0; j < net.n(); ++j)
    if (j != i && z.z(j) == 1.0) stubborn[j] = 1;

  std::vector<char> seen(net.n(), 0);
  std::vector<int> stack{i};
  seen[i] = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    if (stubborn[u]) continue;  // absorbing, do not expand
    for (int v : g.out[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        stack.push_back(v);
      }
    }
  }

  NodeSet out;
  for (int j = 0; j < net.n(); ++j)
    if (stubborn[j] && seen[j]) out.members.push_back(j);
  return out;
}

bool closed01_certified(const InfluenceNetwork& net, const NoiseModel& noise,
                        const SelfConfidenceProfile& z, int i) {
  NodeSet reachable = stubborn_reachable(net, z, i);
  return reachable.size() == 1 &&
         noise.sigma2(reachable.members[0]) == noise.sigma2(i);
}

BestResponseSet best_response(const InfluenceNetwork& net,
                              const NoiseModel& noise,
                              const SelfConfidenceProfile& z, int i) {
  check_agent(net, i);

  bool others_regular = true;
  for (int j = 0; j < net.n(); ++j)
    if (j != i && z.z(j) == 1.0) others_regular = false;

  if (others_regular) {
    Aggregates agg = aggregates(net, noise, z, i);
    double b = 1.0 - agg.a * net.centrality()(i) * noise.sigma2(i) / agg.b;
    return BestResponseSet{BestResponseSet::Kind::Point, std::max(0.0, b)};
  }

  if (closed01_certified(net, noise, z, i))
    return BestResponseSet{BestResponseSet::Kind::Closed01};

  double v_reg = plateau_variance(net, noise, z, i);
  double v_stub = noise.sigma2(i);
  double tol = kTieTolRel * std::max(v_reg, v_stub);
  if (v_reg < v_stub - tol)
    return BestResponseSet{BestResponseSet::Kind::HalfOpen01};
  if (v_reg > v_stub + tol) return BestResponseSet{BestResponseSet::Kind::One};
  return BestResponseSet{BestResponseSet::Kind::Closed01};
}

SelfConfidenceProfile ParetoSegment::profile_at(double alpha) const {
  if (!(alpha > 0.0 && alpha <= alpha_star))
    throw std::invalid_argument("alpha " + std::to_string(alpha) +
                                " outside (0, alpha*]");
  Vector z = Vector::Ones(direction.size()) - alpha * direction;
  for (int i = 0; i < z.size(); ++i) {
    if (z(i) < 0.0) {
      if (z(i) < -1e-12)
        throw std::invalid_argument("alpha " + std::to_string(alpha) +
                                    " leaves the hypercube");
      z(i) = 0.0;
    }
  }
  return SelfConfidenceProfile(std::move(z));
}

ParetoSegment pareto_segment(const InfluenceNetwork& net,
                             const NoiseModel& noise) {
  ParetoSegment seg;
  Vector inv = noise.sigma2.cwiseInverse();
  seg.mu_star = inv / inv.sum();
  seg.v_min = 1.0 / inv.sum();
  seg.direction = net.centrality().cwiseProduct(noise.sigma2);
  seg.alpha_star = 1.0 / seg.direction.maxCoeff();
  return seg;
}

ZstarMembership zstar_membership(const InfluenceNetwork& net,
                                 const NoiseModel& noise,
                                 const SelfConfidenceProfile& z) {
  const int n = net.n();
  Vector d = net.centrality().cwiseProduct(noise.sigma2);
  double alpha_hat = 0.0;
  for (int i = 0; i < n; ++i) alpha_hat += (1.0 - z.z(i)) / d(i);
  alpha_hat /= n;

  double alpha_star = 1.0 / d.maxCoeff();
  double residual = 0.0;
  for (int i = 0; i < n; ++i)
    residual = std::max(residual,
                        std::abs((1.0 - z.z(i)) - alpha_hat * d(i)));
  bool member = residual <= kMembershipTol && alpha_hat > 0.0 &&
                alpha_hat <= alpha_star + kEndpointSlack;
  return ZstarMembership{member, alpha_hat, residual};
}

const char* to_string(NashReport::Verdict v) {
  switch (v) {
    case NashReport::Verdict::StrictNashInterior:
      return "StrictNashInterior";
    case NashReport::Verdict::NonStrictBoundaryCertified:
      return "NonStrictBoundaryCertified";
    case NashReport::Verdict::NashNumericOnly:
      return "NashNumericOnly";
    case NashReport::Verdict::NotNash:
      return "NotNash";
  }
  return "?";
}

namespace {

// Largest utility improvement any single agent can reach by deviating.
// Exact on both branches: the interior branch uses the closed-form point
// response, the stubborn branch compares the [0,1) plateau with sigma_i^2.
double max_deviation_gain(const InfluenceNetwork& net, const NoiseModel& noise,
                          const SelfConfidenceProfile& z) {
  Vector upsilon = estimation_variances(net, z, noise);
  double best = 0.0;
  for (int i = 0; i < net.n(); ++i) {
    bool others_regular = true;
    for (int j = 0; j < net.n(); ++j)
      if (j != i && z.z(j) == 1.0) others_regular = false;

    double alternative;
    if (others_regular) {
      BestResponseSet br = best_response(net, noise, z, i);
      Vector zz = z.z;
      zz(i) = br.value;
      alternative = common_cost(net, SelfConfidenceProfile(std::move(zz)),
                                noise);
    } else {
      alternative = std::min(plateau_variance(net, noise, z, i),
                             noise.sigma2(i));
    }
    best = std::max(best, upsilon(i) - alternative);
  }
  return best;
}

}  // namespace

NashReport classify_profile(const InfluenceNetwork& net,
                            const NoiseModel& noise,
                            const SelfConfidenceProfile& z) {
  NashReport report;
  NodeSet s = stubborn_set(z);

  if (s.empty()) {
    ZstarMembership m = zstar_membership(net, noise, z);
    report.certificate.push_back({"no stubborn agents", true});
    report.certificate.push_back({"pareto segment membership", m.is_member});
    if (m.is_member) {
      report.verdict = NashReport::Verdict::StrictNashInterior;
      report.alpha_hat = m.alpha_hat;
    } else {
      report.verdict = NashReport::Verdict::NotNash;
      report.max_deviation_gain = max_deviation_gain(net, noise, z);
    }
    return report;
  }

  // Necessary conditions for a boundary equilibrium.
  bool size_ok = s.size() >= 2;
  report.certificate.push_back({"stubborn set size >= 2", size_ok});

  bool tied = true;
  for (int j : s.members)
    if (noise.sigma2(j) != noise.sigma2(s.members[0])) tied = false;
  report.certificate.push_back({"equal variances across stubborn set", tied});

  bool ring = size_ok && is_directed_ring(restricted_graph(net, s).graph);
  report.certificate.push_back(
      {"restricted graph on stubborn set is a directed ring", ring});

  if (!size_ok || !tied || !ring) {
    report.verdict = NashReport::Verdict::NotNash;
    report.max_deviation_gain = max_deviation_gain(net, noise, z);
    return report;
  }

  bool minimal = tied && noise.sigma2(s.members[0]) <= noise.sigma2.minCoeff();
  if (s.size() == 2 && minimal) {
    report.certificate.push_back(
        {"two stubborn agents with globally minimal variance", true});
    report.verdict = NashReport::Verdict::NonStrictBoundaryCertified;
    return report;
  }

  // Numeric fallback: membership of every coordinate in its best response.
  bool all_member = true;
  for (int i = 0; i < net.n() && all_member; ++i)
    all_member = best_response(net, noise, z, i).contains(z.z(i), kPointTol);
  report.certificate.push_back(
      {"every agent plays inside her best-response set", all_member});
  if (all_member) {
    report.verdict = NashReport::Verdict::NashNumericOnly;
    report.max_deviation_gain = 0.0;
  } else {
    report.verdict = NashReport::Verdict::NotNash;
    report.max_deviation_gain = max_deviation_gain(net, noise, z);
  }
  return report;
}

}  // namespace crowdwise
