#pragma once

// Independent oracles used to cross-check the implementation. Everything
// here deliberately avoids the library's own computational paths: limits via
// repeated multiplication, graph predicates via transitive closure and cycle
// enumeration, minimizers via dense grids.

#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "crowdwise/network.hpp"

namespace oracles {

using crowdwise::Digraph;
using crowdwise::Matrix;
using crowdwise::Vector;

// Truncated power iteration of W^t; stops when successive powers differ by
// at most `tol` entrywise.
inline Matrix power_iteration_limit(const Matrix& w, double tol = 1e-13,
                                    long max_t = 1'000'000) {
  Matrix cur = w;
  for (long t = 0; t < max_t; ++t) {
    Matrix next = cur * w;
    if ((next - cur).cwiseAbs().maxCoeff() <= tol) return next;
    cur = std::move(next);
  }
  throw std::runtime_error("power iteration did not settle");
}

// Stationary vector by power iteration on the transpose.
inline Vector power_iteration_stationary(const Matrix& p, double tol = 1e-14,
                                         long max_t = 1'000'000) {
  const int n = static_cast<int>(p.rows());
  Vector v = Vector::Constant(n, 1.0 / n);
  for (long t = 0; t < max_t; ++t) {
    Vector next = p.transpose() * v;
    next /= next.sum();
    if ((next - v).cwiseAbs().maxCoeff() <= tol) return next;
    v = std::move(next);
  }
  throw std::runtime_error("stationary power iteration did not settle");
}

// Strong connectivity via boolean transitive closure (Floyd-Warshall).
inline bool strongly_connected_closure(const Digraph& g) {
  const int n = g.n;
  std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
  for (int i = 0; i < n; ++i)
    for (int j : g.out[i]) reach[i][j] = 1;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (reach[i][k] && reach[k][j]) reach[i][j] = 1;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && !reach[i][j]) return false;
  return true;
}

// All simple cycle lengths by DFS (intended for n <= 6).
inline void collect_cycles(const Digraph& g, int start, int u,
                           std::vector<char>& on_path, int depth,
                           std::vector<int>& lengths) {
  for (int v : g.out[u]) {
    if (v == start)
      lengths.push_back(depth + 1);
    else if (v > start && !on_path[v]) {
      on_path[v] = 1;
      collect_cycles(g, start, v, on_path, depth + 1, lengths);
      on_path[v] = 0;
    }
  }
}

inline bool aperiodic_by_cycles(const Digraph& g) {
  std::vector<int> lengths;
  for (int start = 0; start < g.n; ++start) {
    std::vector<char> on_path(g.n, 0);
    on_path[start] = 1;
    collect_cycles(g, start, start, on_path, 0, lengths);
  }
  long long d = 0;
  for (int len : lengths) d = std::gcd(d, static_cast<long long>(len));
  return d == 1;
}

// Edge (i,j) of the restricted graph by brute-force path enumeration: does
// some walk i -> j exist whose intermediate nodes all avoid S?
inline bool restricted_edge_brute(const Digraph& g,
                                  const std::vector<int>& s_members, int i,
                                  int j) {
  std::vector<char> in_s(g.n, 0);
  for (int m : s_members) in_s[m] = 1;
  std::vector<char> seen(g.n, 0);
  std::vector<int> stack;
  for (int v : g.out[i]) {
    if (v == j) return true;
    if (!in_s[v] && !seen[v]) {
      seen[v] = 1;
      stack.push_back(v);
    }
  }
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int v : g.out[u]) {
      if (v == j) return true;
      if (!in_s[v] && !seen[v]) {
        seen[v] = 1;
        stack.push_back(v);
      }
    }
  }
  return false;
}

// Dense 1-D grid minimizer of f over {lo, lo+step, ..., hi}.
template <typename F>
double grid_argmin(F&& f, double lo, double hi, double step) {
  double best_x = lo;
  double best = f(lo);
  for (double x = lo + step; x <= hi + step / 2; x += step) {
    double v = f(std::min(x, hi));
    if (v < best) {
      best = v;
      best_x = std::min(x, hi);
    }
  }
  return best_x;
}

}  // namespace oracles
