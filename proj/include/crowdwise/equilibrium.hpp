#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crowdwise/dynamics.hpp"

namespace crowdwise {

// Leave-one-out aggregates for agent k:
//   a = sum_{j != k} pi_j / (1 - z_j)
//   b = sum_{j != k} pi_j^2 sigma_j^2 / (1 - z_j)^2
struct Aggregates {
  double a;
  double b;
};

// StubbornPresent if some z_j = 1 with j != k.
Aggregates aggregates(const InfluenceNetwork& net, const NoiseModel& noise,
                      const SelfConfidenceProfile& z, int k);

// Set-valued best response. The four kinds encode exactly
// {value}, [0,1), [0,1], {1}.
struct BestResponseSet {
  enum class Kind { Point, HalfOpen01, Closed01, One };

  Kind kind;
  double value = 0.0;  // meaningful iff kind == Point, always in [0,1)

  // Membership; Point membership is exact unless point_tol is given.
  bool contains(double x, double point_tol = 0.0) const;
};

// Best response of agent i against z_{-i}. All others regular: the single
// interior minimizer [1 - A_i pi_i sigma_i^2 / B_i]_+. Some other agent
// stubborn: the estimation variance is flat on [0,1), so the response is
// one of [0,1), [0,1], {1} decided by comparing that plateau against
// sigma_i^2 (relative tie tolerance 1e-12), with an exact combinatorial
// shortcut for the certified [0,1] case.
BestResponseSet best_response(const InfluenceNetwork& net,
                              const NoiseModel& noise,
                              const SelfConfidenceProfile& z, int i);

// Stubborn agents of z_{-i} reachable from i when i plays any z_i < 1
// (search along P-edges that does not expand stubborn nodes).
NodeSet stubborn_reachable(const InfluenceNetwork& net,
                           const SelfConfidenceProfile& z, int i);

// Exact certificate that the best response of i is [0,1]: exactly one
// stubborn agent j is reachable from i and sigma_j^2 equals sigma_i^2
// bit-for-bit. Requires S(z_{-i}) nonempty.
bool closed01_certified(const InfluenceNetwork& net, const NoiseModel& noise,
                        const SelfConfidenceProfile& z, int i);

// The efficient frontier data: inverse-variance weights mu*, the
// centralized optimum V_min, the segment endpoint alpha*, and the segment
// direction [pi]sigma^2 so that z(alpha) = 1 - alpha * direction.
struct ParetoSegment {
  Vector mu_star;
  double v_min;
  double alpha_star;
  Vector direction;

  // z(alpha) for alpha in (0, alpha*]; round-off below zero is clamped.
  SelfConfidenceProfile profile_at(double alpha) const;
};

ParetoSegment pareto_segment(const InfluenceNetwork& net,
                             const NoiseModel& noise);

struct ZstarMembership {
  bool is_member;
  double alpha_hat;  // mean over agents of (1 - z_i) / (pi_i sigma_i^2)
  double residual;   // max_i |(1 - z_i) - alpha_hat pi_i sigma_i^2|
};

// Tests z = 1 - alpha [pi]sigma^2 for some alpha in (0, alpha*]:
// per-entry residual tolerance 1e-9, endpoint slack 1e-12.
ZstarMembership zstar_membership(const InfluenceNetwork& net,
                                 const NoiseModel& noise,
                                 const SelfConfidenceProfile& z);

struct CertificateCheck {
  std::string name;
  bool pass;
};

// Classification outcome. The verdict states its own epistemic strength:
// interior and boundary-certified verdicts rest on exact conditions, while
// NashNumericOnly records that only the numeric per-agent membership check
// passed.
struct NashReport {
  enum class Verdict {
    StrictNashInterior,
    NonStrictBoundaryCertified,
    NashNumericOnly,
    NotNash
  };

  Verdict verdict;
  std::optional<double> alpha_hat;           // interior verdicts
  std::vector<CertificateCheck> certificate;
  std::optional<double> max_deviation_gain;  // numeric verdicts
};

const char* to_string(NashReport::Verdict v);

// Decision procedure. Interior profiles: membership in the Pareto segment
// is exhaustive. Boundary profiles: necessary conditions (stubborn set size
// >= 2, exactly tied stubborn variances, restricted graph a directed ring),
// then the sufficient two-agent minimal-variance certificate, then the
// numeric per-agent best-response membership fallback.
NashReport classify_profile(const InfluenceNetwork& net,
                            const NoiseModel& noise,
                            const SelfConfidenceProfile& z);

}  // namespace crowdwise
