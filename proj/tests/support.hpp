#pragma once

// Shared fixtures for the test suites: the 4-agent running example and
// seeded random instances.

#include <vector>

#include "crowdwise/dynamics.hpp"
#include "crowdwise/network.hpp"
#include "crowdwise/rng.hpp"

namespace testsupport {

using crowdwise::Matrix;
using crowdwise::Vector;

inline Matrix example4_matrix() {
  Matrix p(4, 4);
  p << 0.0, 0.1, 0.2, 0.7,
      0.25, 0.0, 0.25, 0.5,
      0.5, 0.5, 0.0, 0.0,
      0.2, 0.0, 0.8, 0.0;
  return p;
}

inline crowdwise::InfluenceNetwork example4_network() {
  return crowdwise::validate_network(example4_matrix());
}

inline Vector example4_sigma2() {
  Vector s(4);
  s << 0.32 * 0.32, 0.35 * 0.35, 0.38 * 0.38, 0.29 * 0.29;
  return s;
}

inline crowdwise::NoiseModel example4_noise() {
  return crowdwise::NoiseModel(0.0, example4_sigma2());
}

// Symmetric two-agent instance: pi = (1/2, 1/2), unit variances.
inline crowdwise::InfluenceNetwork symmetric2_network() {
  Matrix p(2, 2);
  p << 0.5, 0.5, 0.5, 0.5;
  return crowdwise::validate_network(p);
}

inline crowdwise::NoiseModel symmetric2_noise() {
  Vector s(2);
  s << 1.0, 1.0;
  return crowdwise::NoiseModel(0.0, s);
}

// Random row-stochastic matrix whose graph is strongly connected (a ring is
// always included) and aperiodic (node 0 keeps a self-loop).
inline Matrix random_stochastic(int n, crowdwise::SplitMix64& rng,
                                double density = 0.6) {
  Matrix p = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    p(i, (i + 1) % n) = 0.2 + rng.next_unit();
    for (int j = 0; j < n; ++j)
      if (j != (i + 1) % n && rng.next_unit() < density)
        p(i, j) = rng.next_unit();
  }
  p(0, 0) = 0.3 + rng.next_unit();
  for (int i = 0; i < n; ++i) p.row(i) /= p.row(i).sum();
  return p;
}

inline Vector random_variances(int n, crowdwise::SplitMix64& rng) {
  Vector s(n);
  for (int i = 0; i < n; ++i) s(i) = 0.1 + 1.9 * rng.next_unit();
  return s;
}

inline crowdwise::SelfConfidenceProfile random_interior_profile(
    int n, crowdwise::SplitMix64& rng, double z_max = 0.99) {
  Vector z(n);
  for (int i = 0; i < n; ++i) z(i) = z_max * rng.next_unit();
  return crowdwise::SelfConfidenceProfile(std::move(z));
}

// Interior profile with a random nonempty subset pinned to 1.
inline crowdwise::SelfConfidenceProfile random_stubborn_profile(
    int n, crowdwise::SplitMix64& rng) {
  Vector z(n);
  for (int i = 0; i < n; ++i) z(i) = 0.9 * rng.next_unit();
  int stubborn = 1 + rng.next_below(n - 1);
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  for (int i = n - 1; i > 0; --i)
    std::swap(order[i], order[rng.next_below(i + 1)]);
  for (int k = 0; k < stubborn; ++k) z(order[k]) = 1.0;
  return crowdwise::SelfConfidenceProfile(std::move(z));
}

}  // namespace testsupport
