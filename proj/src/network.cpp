#include "crowdwise/network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <string>

namespace crowdwise {

namespace {

constexpr double kRowSumTol = 1e-9;
constexpr double kResidualTol = 1e-12;

// Nodes reachable from the frontier `start` (which is included), following
// `adj`.
std::vector<char> reach(const std::vector<std::vector<int>>& adj, int n,
                        int start) {
  std::vector<char> seen(n, 0);
  std::vector<int> stack{start};
  seen[start] = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int v : adj[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        stack.push_back(v);
      }
    }
  }
  return seen;
}

std::vector<std::vector<int>> reversed(const Digraph& g) {
  std::vector<std::vector<int>> rev(g.n);
  for (int u = 0; u < g.n; ++u)
    for (int v : g.out[u]) rev[v].push_back(u);
  return rev;
}

}  // namespace

bool NodeSet::contains(int i) const {
  return std::binary_search(members.begin(), members.end(), i);
}

bool Digraph::has_edge(int i, int j) const {
  return std::binary_search(out[i].begin(), out[i].end(), j);
}

std::vector<std::pair<int, int>> Digraph::edges() const {
  std::vector<std::pair<int, int>> e;
  for (int u = 0; u < n; ++u)
    for (int v : out[u]) e.emplace_back(u, v);
  return e;
}

Digraph graph_of(const Matrix& m) {
  Digraph g;
  g.n = static_cast<int>(m.rows());
  g.out.resize(g.n);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      if (m(i, j) > 0.0) g.out[i].push_back(j);
  return g;
}

bool is_strongly_connected(const Digraph& g) {
  if (g.n == 0) return false;
  auto all = [](const std::vector<char>& seen) {
    return std::all_of(seen.begin(), seen.end(), [](char c) { return c; });
  };
  return all(reach(g.out, g.n, 0)) && all(reach(reversed(g), g.n, 0));
}

bool is_aperiodic(const Digraph& g) {
  if (g.n == 0) return false;
  std::vector<int> level(g.n, -1);
  std::queue<int> q;
  q.push(0);
  level[0] = 0;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int v : g.out[u]) {
      if (level[v] < 0) {
        level[v] = level[u] + 1;
        q.push(v);
      }
    }
  }
  long long d = 0;
  for (int u = 0; u < g.n; ++u) {
    if (level[u] < 0) continue;
    for (int v : g.out[u]) {
      if (level[v] < 0) continue;
      d = std::gcd(d, static_cast<long long>(level[u]) + 1 - level[v]);
    }
  }
  return d == 1;
}

bool is_directed_ring(const Digraph& g) {
  if (g.n == 0) return false;
  std::vector<int> indeg(g.n, 0);
  for (int u = 0; u < g.n; ++u) {
    if (g.out[u].size() != 1) return false;
    for (int v : g.out[u]) ++indeg[v];
  }
  for (int u = 0; u < g.n; ++u)
    if (indeg[u] != 1) return false;
  return is_strongly_connected(g);
}

InfluenceNetwork::InfluenceNetwork(Matrix p, Vector pi, Digraph g)
    : p_(std::move(p)), pi_(std::move(pi)), graph_(std::move(g)) {}

InfluenceNetwork validate_network(const Matrix& p) {
  const int n = static_cast<int>(p.rows());
  if (n < 2) throw TooSmall("network needs at least 2 agents, got " +
                            std::to_string(n));
  if (p.cols() != n)
    throw NotStochastic("matrix is not square: " + std::to_string(n) + "x" +
                        std::to_string(p.cols()));

  Matrix q = p;
  for (int i = 0; i < n; ++i) {
    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
      double v = q(i, j);
      if (!std::isfinite(v))
        throw NotStochastic("non-finite entry at (" + std::to_string(i) +
                            "," + std::to_string(j) + ")");
      if (v < 0.0)
        throw NotStochastic("negative entry at (" + std::to_string(i) + "," +
                            std::to_string(j) + ")");
      sum += v;
    }
    if (std::abs(sum - 1.0) > kRowSumTol)
      throw NotStochastic("row " + std::to_string(i) + " sums to " +
                          std::to_string(sum));
    q.row(i) /= sum;
  }

  Digraph g = graph_of(q);
  if (!is_strongly_connected(g))
    throw NotStronglyConnected("influence graph is not strongly connected");
  if (!is_aperiodic(g))
    throw NotAperiodic("influence graph is periodic");

  // pi solves (P' - I)pi = 0 with the first equation replaced by the
  // normalization sum(pi) = 1.
  Matrix a = q.transpose() - Matrix::Identity(n, n);
  a.row(0).setOnes();
  Vector rhs = Vector::Zero(n);
  rhs(0) = 1.0;
  Vector pi = Eigen::PartialPivLU<Matrix>(a).solve(rhs);

  double sum = pi.sum();
  if (!std::isfinite(sum) || std::abs(sum - 1.0) > 1e-6)
    throw SolverFailure("stationary solve produced sum " +
                        std::to_string(sum));
  pi /= sum;
  if ((pi.array() <= 0.0).any())
    throw SolverFailure("stationary vector has a nonpositive entry");
  double residual = (q.transpose() * pi - pi).cwiseAbs().maxCoeff();
  if (residual > kResidualTol)
    throw SolverFailure("stationary residual " + std::to_string(residual));

  return InfluenceNetwork(std::move(q), std::move(pi), std::move(g));
}

Vector stationary_distribution(const InfluenceNetwork& net) {
  return net.centrality();
}

bool RestrictedGraph::has_edge_original(int i, int j) const {
  auto it = std::lower_bound(members.begin(), members.end(), i);
  auto jt = std::lower_bound(members.begin(), members.end(), j);
  if (it == members.end() || *it != i) return false;
  if (jt == members.end() || *jt != j) return false;
  return graph.has_edge(static_cast<int>(it - members.begin()),
                        static_cast<int>(jt - members.begin()));
}

RestrictedGraph restricted_graph(const InfluenceNetwork& net,
                                 const NodeSet& s) {
  const Digraph& g = net.graph();
  RestrictedGraph r;
  r.members = s.members;
  const int k = static_cast<int>(r.members.size());
  r.graph.n = k;
  r.graph.out.resize(k);

  std::vector<int> pos(g.n, -1);
  for (int a = 0; a < k; ++a) pos[r.members[a]] = a;

  for (int a = 0; a < k; ++a) {
    int i = r.members[a];
    // Search from i's out-neighbors without expanding members of S.
    std::vector<char> seen(g.n, 0);
    std::vector<int> stack;
    for (int v : g.out[i]) {
      if (!seen[v]) {
        seen[v] = 1;
        stack.push_back(v);
      }
    }
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      if (pos[u] >= 0) continue;
      for (int v : g.out[u]) {
        if (!seen[v]) {
          seen[v] = 1;
          stack.push_back(v);
        }
      }
    }
    for (int b = 0; b < k; ++b) {
      int j = r.members[b];
      // Self-loops only arise in the singleton convention.
      if (j == i && k > 1) continue;
      if (seen[j]) r.graph.out[a].push_back(b);
    }
  }
  return r;
}

}  // namespace crowdwise
