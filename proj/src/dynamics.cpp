#include "crowdwise/dynamics.hpp"

#include <cmath>
#include <string>

namespace crowdwise {

namespace {

constexpr double kEntryClamp = 1e-12;
constexpr double kFixedPointTol = 1e-9;

void check_dims(const InfluenceNetwork& net, const SelfConfidenceProfile& z) {
  if (z.size() != net.n())
    throw std::invalid_argument("profile length " + std::to_string(z.size()) +
                                " does not match network size " +
                                std::to_string(net.n()));
}

// Clamp round-off escapees into [0,1] and renormalize each row.
void tidy_rows(Matrix& h) {
  const int n = static_cast<int>(h.rows());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double v = h(i, j);
      if (v < 0.0) {
        if (v < -kEntryClamp)
          throw SolverFailure("limit matrix entry " + std::to_string(v) +
                              " below clamp range");
        h(i, j) = 0.0;
      } else if (v > 1.0) {
        if (v > 1.0 + kEntryClamp)
          throw SolverFailure("limit matrix entry " + std::to_string(v) +
                              " above clamp range");
        h(i, j) = 1.0;
      }
    }
    double sum = h.row(i).sum();
    if (std::abs(sum - 1.0) > 1e-8)
      throw SolverFailure("limit matrix row " + std::to_string(i) +
                          " sums to " + std::to_string(sum));
    h.row(i) /= sum;
  }
}

}  // namespace

SelfConfidenceProfile::SelfConfidenceProfile(Vector values) : z(std::move(values)) {
  for (int i = 0; i < size(); ++i) {
    if (!(z(i) >= 0.0 && z(i) <= 1.0))
      throw std::invalid_argument("self-confidence z[" + std::to_string(i) +
                                  "] = " + std::to_string(z(i)) +
                                  " outside [0,1]");
  }
}

NoiseModel::NoiseModel(double theta_value, Vector variances)
    : theta(theta_value), sigma2(std::move(variances)) {
  if (!std::isfinite(theta))
    throw std::invalid_argument("theta must be finite");
  for (int i = 0; i < size(); ++i) {
    if (!(sigma2(i) > 0.0) || !std::isfinite(sigma2(i)))
      throw std::invalid_argument("sigma2[" + std::to_string(i) +
                                  "] must be positive and finite");
  }
}

NodeSet stubborn_set(const SelfConfidenceProfile& z) {
  NodeSet s;
  for (int i = 0; i < z.size(); ++i)
    if (z.z(i) == 1.0) s.members.push_back(i);
  return s;
}

Matrix interaction_matrix(const InfluenceNetwork& net,
                          const SelfConfidenceProfile& z) {
  check_dims(net, z);
  const int n = net.n();
  Matrix w = net.P();
  for (int i = 0; i < n; ++i) {
    w.row(i) *= (1.0 - z.z(i));
    w(i, i) += z.z(i);
  }
  return w;
}

OpinionState step(const InfluenceNetwork& net, const SelfConfidenceProfile& z,
                  const OpinionState& state) {
  return OpinionState{interaction_matrix(net, z) * state.x, state.t + 1};
}

LimitMatrix limit_matrix(const InfluenceNetwork& net,
                         const SelfConfidenceProfile& z) {
  check_dims(net, z);
  const int n = net.n();
  NodeSet s = stubborn_set(z);
  Matrix h(n, n);

  if (s.empty()) {
    // Unnormalized weights first; gamma never formed on its own.
    Vector w = net.centrality().array() / (1.0 - z.z.array());
    Vector p = w / w.sum();
    h = Vector::Ones(n) * p.transpose();
  } else {
    std::vector<int> regular;
    for (int i = 0; i < n; ++i)
      if (!s.contains(i)) regular.push_back(i);
    const int nr = static_cast<int>(regular.size());
    const int ns = s.size();

    h.setZero();
    for (int j : s.members) h(j, j) = 1.0;

    if (nr > 0) {
      Matrix w = interaction_matrix(net, z);
      Matrix q(nr, nr), b(nr, ns);
      for (int a = 0; a < nr; ++a) {
        for (int c = 0; c < nr; ++c) q(a, c) = w(regular[a], regular[c]);
        for (int c = 0; c < ns; ++c) b(a, c) = w(regular[a], s.members[c]);
      }
      Matrix x = Eigen::PartialPivLU<Matrix>(Matrix::Identity(nr, nr) - q)
                     .solve(b);
      if (!x.allFinite())
        throw SolverFailure("absorption solve produced non-finite entries");
      for (int a = 0; a < nr; ++a)
        for (int c = 0; c < ns; ++c) h(regular[a], s.members[c]) = x(a, c);
    }
  }

  tidy_rows(h);
  double residual =
      (interaction_matrix(net, z) * h - h).cwiseAbs().maxCoeff();
  if (residual > kFixedPointTol)
    throw SolverFailure("limit matrix fixed-point residual " +
                        std::to_string(residual));
  return LimitMatrix{std::move(h),
                     s.empty() ? LimitBranch::Consensus
                               : LimitBranch::Absorption,
                     std::move(s)};
}

Vector social_power(const InfluenceNetwork& net,
                    const SelfConfidenceProfile& z) {
  check_dims(net, z);
  if (!stubborn_set(z).empty())
    throw StubbornPresent("social power is undefined with stubborn agents");
  Vector w = net.centrality().array() / (1.0 - z.z.array());
  return w / w.sum();
}

Vector estimation_variances(const InfluenceNetwork& net,
                            const SelfConfidenceProfile& z,
                            const NoiseModel& noise) {
  return limit_matrix(net, z).H.array().square().matrix() * noise.sigma2;
}

double common_cost(const InfluenceNetwork& net, const SelfConfidenceProfile& z,
                   const NoiseModel& noise) {
  check_dims(net, z);
  if (!stubborn_set(z).empty())
    throw StubbornPresent("common cost is undefined with stubborn agents");
  const Vector& pi = net.centrality();
  double a = 0.0, b = 0.0;
  for (int j = 0; j < net.n(); ++j) {
    double w = pi(j) / (1.0 - z.z(j));
    a += w;
    b += w * w * noise.sigma2(j);
  }
  return b / (a * a);
}

std::vector<OpinionState> simulate_opinions(const InfluenceNetwork& net,
                                            const SelfConfidenceProfile& z,
                                            const NoiseModel& noise,
                                            std::uint64_t seed, long t_max,
                                            NoiseKind kind) {
  check_dims(net, z);
  if (t_max < 0) throw std::invalid_argument("t_max must be >= 0");
  const int n = net.n();

  SplitMix64 rng(seed);
  Vector x0(n);
  for (int i = 0; i < n; ++i) {
    double sd = std::sqrt(noise.sigma2(i));
    double xi = kind == NoiseKind::Gaussian
                    ? sd * rng.next_gaussian()
                    // variance-matched uniform on [-sqrt(3)sd, sqrt(3)sd)
                    : sd * std::sqrt(3.0) * (2.0 * rng.next_unit() - 1.0);
    x0(i) = noise.theta + xi;
  }

  Matrix w = interaction_matrix(net, z);
  std::vector<OpinionState> trajectory;
  trajectory.reserve(static_cast<std::size_t>(t_max) + 1);
  trajectory.push_back(OpinionState{std::move(x0), 0});
  for (long t = 1; t <= t_max; ++t)
    trajectory.push_back(OpinionState{w * trajectory.back().x, t});
  return trajectory;
}

}  // namespace crowdwise
