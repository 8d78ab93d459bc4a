#pragma once

#include <Eigen/Dense>
#include <vector>

#include "crowdwise/errors.hpp"

namespace crowdwise {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Subset of the agent set {0, ..., n-1}, kept sorted ascending.
struct NodeSet {
  std::vector<int> members;

  bool empty() const { return members.empty(); }
  int size() const { return static_cast<int>(members.size()); }
  bool contains(int i) const;
};

// Plain directed graph with adjacency lists (sorted ascending).
struct Digraph {
  int n = 0;
  std::vector<std::vector<int>> out;

  bool has_edge(int i, int j) const;
  std::vector<std::pair<int, int>> edges() const;
};

// Graph of a nonnegative matrix: edge (i,j) iff m(i,j) > 0, exactly.
Digraph graph_of(const Matrix& m);

// True iff every node is reachable from node 0 and node 0 is reachable
// from every node (single strongly connected component).
bool is_strongly_connected(const Digraph& g);

// True iff the gcd of all cycle lengths is 1. Computed as the gcd of
// level(u) + 1 - level(v) over edges (u,v) in a BFS from node 0; only
// meaningful for strongly connected graphs.
bool is_aperiodic(const Digraph& g);

// A directed ring: every node has in-degree 1 and out-degree 1 and the
// graph is strongly connected. The 2-node graph with both directed edges
// counts.
bool is_directed_ring(const Digraph& g);

// Validated social network: row-stochastic P whose graph is strongly
// connected and aperiodic, with its centrality vector pi (unique positive
// left eigenvector of P with unit sum) computed up front.
class InfluenceNetwork {
 public:
  int n() const { return static_cast<int>(p_.rows()); }
  const Matrix& P() const { return p_; }
  const Vector& centrality() const { return pi_; }
  const Digraph& graph() const { return graph_; }

 private:
  InfluenceNetwork(Matrix p, Vector pi, Digraph g);
  friend InfluenceNetwork validate_network(const Matrix& p);

  Matrix p_;
  Vector pi_;
  Digraph graph_;
};

// Validates P and returns the network. Rows within 1e-9 of unit sum are
// renormalized so the stored matrix is stochastic to machine precision.
// Throws TooSmall, NotStochastic, NotStronglyConnected, NotAperiodic,
// SolverFailure.
InfluenceNetwork validate_network(const Matrix& p);

// The cached centrality vector pi with pi = P'pi, sum(pi) = 1, pi > 0.
Vector stationary_distribution(const InfluenceNetwork& net);

// Graph on the node subset `members` (original ids, ascending); graph node
// k corresponds to members[k].
struct RestrictedGraph {
  std::vector<int> members;
  Digraph graph;

  bool has_edge_original(int i, int j) const;
};

// Restriction of G_P to S: edge (i,j) for distinct i,j in S iff some path
// from i to j in G_P avoids intermediate nodes of S. A singleton S gets the
// self-loop (i,i), since strong connectivity always provides a return cycle.
RestrictedGraph restricted_graph(const InfluenceNetwork& net,
                                 const NodeSet& s);

}  // namespace crowdwise
