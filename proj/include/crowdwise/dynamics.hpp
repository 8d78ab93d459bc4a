#pragma once

#include <cstdint>
#include <vector>

#include "crowdwise/network.hpp"
#include "crowdwise/rng.hpp"

namespace crowdwise {

// Self-confidence profile z in [0,1]^n. An agent with z_i == 1 (exact
// floating-point equality) is stubborn.
struct SelfConfidenceProfile {
  Vector z;

  explicit SelfConfidenceProfile(Vector values);
  int size() const { return static_cast<int>(z.size()); }
};

// Measurement model: every agent observes theta + noise with her own
// variance sigma2_i > 0.
struct NoiseModel {
  double theta;
  Vector sigma2;

  NoiseModel(double theta_value, Vector variances);
  int size() const { return static_cast<int>(sigma2.size()); }
};

enum class LimitBranch { Consensus, Absorption };

// Limit of W(z)^t. Consensus branch: rank one, all rows equal the social
// power vector. Absorption branch: column j is zero for regular j and row i
// is the i-th unit vector for stubborn i.
struct LimitMatrix {
  Matrix H;
  LimitBranch branch;
  NodeSet stubborn;
};

struct OpinionState {
  Vector x;
  long t = 0;
};

enum class NoiseKind { Gaussian, Uniform };

// Agents with z_i == 1, exactly. Values that merely round to 1 in floating
// point are therefore stubborn.
NodeSet stubborn_set(const SelfConfidenceProfile& z);

// W(z) = (I - [z])P + [z]: row i blends self weight z_i with the P-row.
Matrix interaction_matrix(const InfluenceNetwork& net,
                          const SelfConfidenceProfile& z);

// One synchronous averaging step x <- W(z)x.
OpinionState step(const InfluenceNetwork& net, const SelfConfidenceProfile& z,
                  const OpinionState& state);

// lim W(z)^t. No stubborn agents: rank-one matrix of social powers.
// Otherwise: absorption probabilities from the dense solve
// (I - Q)X = B on the regular block. Throws SolverFailure when the result
// fails its stochasticity or fixed-point contract.
LimitMatrix limit_matrix(const InfluenceNetwork& net,
                         const SelfConfidenceProfile& z);

// p(z): normalized weights pi_i / (1 - z_i). Requires no stubborn agents
// (StubbornPresent otherwise).
Vector social_power(const InfluenceNetwork& net,
                    const SelfConfidenceProfile& z);

// Asymptotic estimation variances: upsilon_i = sum_j H_ij^2 sigma_j^2.
Vector estimation_variances(const InfluenceNetwork& net,
                            const SelfConfidenceProfile& z,
                            const NoiseModel& noise);

// The cost shared by all agents when nobody is stubborn:
// V(z) = B(z) / A(z)^2 with A = sum pi_j/(1-z_j),
// B = sum pi_j^2 sigma_j^2/(1-z_j)^2. StubbornPresent otherwise.
double common_cost(const InfluenceNetwork& net, const SelfConfidenceProfile& z,
                   const NoiseModel& noise);

// Draws one noise realization from the seeded generator (one Gaussian draw
// per agent in index order; uniform alternative is variance-matched) and
// iterates the averaging dynamics. Returns states for t = 0..t_max.
std::vector<OpinionState> simulate_opinions(const InfluenceNetwork& net,
                                            const SelfConfidenceProfile& z,
                                            const NoiseModel& noise,
                                            std::uint64_t seed, long t_max,
                                            NoiseKind kind =
                                                NoiseKind::Gaussian);

}  // namespace crowdwise
