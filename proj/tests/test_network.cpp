#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "crowdwise/network.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace crowdwise;
using testsupport::example4_matrix;
using testsupport::example4_network;

TEST_CASE("validate_network accepts the 4-agent example") {
  InfluenceNetwork net = example4_network();
  CHECK(net.n() == 4);
  for (int i = 0; i < 4; ++i)
    CHECK(net.P().row(i).sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("validate_network accepts the doubly stochastic 2x2") {
  Matrix p(2, 2);
  p << 0.5, 0.5, 0.5, 0.5;
  CHECK(validate_network(p).n() == 2);
}

TEST_CASE("validate_network rejects the period-2 swap") {
  Matrix p(2, 2);
  p << 0.0, 1.0, 1.0, 0.0;
  CHECK_THROWS_AS(validate_network(p), NotAperiodic);
}

TEST_CASE("validate_network rejects bad inputs") {
  CHECK_THROWS_AS(validate_network(Matrix::Identity(1, 1)), TooSmall);

  Matrix negative(2, 2);
  negative << 1.5, -0.5, 0.5, 0.5;
  CHECK_THROWS_AS(validate_network(negative), NotStochastic);

  Matrix off(2, 2);
  off << 0.6, 0.5, 0.5, 0.5;
  CHECK_THROWS_AS(validate_network(off), NotStochastic);

  Matrix nan(2, 2);
  nan << 0.5, 0.5, std::nan(""), 0.5;
  CHECK_THROWS_AS(validate_network(nan), NotStochastic);

  // Block diagonal: two components.
  Matrix disconnected = Matrix::Zero(4, 4);
  disconnected.block(0, 0, 2, 2) << 0.5, 0.5, 0.5, 0.5;
  disconnected.block(2, 2, 2, 2) << 0.5, 0.5, 0.5, 0.5;
  CHECK_THROWS_AS(validate_network(disconnected), NotStronglyConnected);
}

TEST_CASE("stationary distribution matches the published centrality") {
  Vector pi = stationary_distribution(example4_network());
  Vector expected(4);
  expected << 0.2507, 0.1783, 0.3064, 0.2646;
  for (int i = 0; i < 4; ++i) CHECK(std::abs(pi(i) - expected(i)) <= 1e-3);
}

TEST_CASE("stationary distribution symmetric case") {
  Vector pi = stationary_distribution(testsupport::symmetric2_network());
  CHECK(pi(0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(pi(1) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("stationary distribution: residual and power-iteration oracle") {
  SplitMix64 rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 5;
    InfluenceNetwork net =
        validate_network(testsupport::random_stochastic(n, rng));
    Vector pi = stationary_distribution(net);
    CHECK(pi.minCoeff() > 0.0);
    CHECK(std::abs(pi.sum() - 1.0) <= 1e-12);
    CHECK((net.P().transpose() * pi - pi).cwiseAbs().maxCoeff() <= 1e-12);
    Vector oracle = oracles::power_iteration_stationary(net.P());
    CHECK((pi - oracle).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("connectivity check agrees with transitive closure on small graphs") {
  SplitMix64 rng(7);
  int connected_seen = 0, disconnected_seen = 0;
  for (int trial = 0; trial < 400; ++trial) {
    int n = 2 + rng.next_below(5);
    Matrix m = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (rng.next_unit() < 0.35) m(i, j) = 1.0;
    Digraph g = graph_of(m);
    bool expected = oracles::strongly_connected_closure(g);
    CHECK(is_strongly_connected(g) == expected);
    (expected ? connected_seen : disconnected_seen)++;
  }
  CHECK(connected_seen > 20);
  CHECK(disconnected_seen > 20);
}

TEST_CASE("aperiodicity check agrees with cycle enumeration on small graphs") {
  SplitMix64 rng(11);
  int aperiodic_seen = 0, periodic_seen = 0;
  for (int trial = 0; trial < 400; ++trial) {
    int n = 2 + rng.next_below(5);
    Matrix m = Matrix::Zero(n, n);
    // Ring plus sparse chords keeps the graph strongly connected while
    // letting the period vary.
    for (int i = 0; i < n; ++i) m(i, (i + 1) % n) = 1.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (rng.next_unit() < 0.15) m(i, j) = 1.0;
    Digraph g = graph_of(m);
    REQUIRE(is_strongly_connected(g));
    bool expected = oracles::aperiodic_by_cycles(g);
    CHECK(is_aperiodic(g) == expected);
    (expected ? aperiodic_seen : periodic_seen)++;
  }
  CHECK(aperiodic_seen > 20);
  CHECK(periodic_seen > 20);
}

TEST_CASE("restricted graph on the example, S = {1,3} (1-based)") {
  InfluenceNetwork net = example4_network();
  NodeSet s{{0, 2}};
  RestrictedGraph r = restricted_graph(net, s);
  CHECK(r.members == std::vector<int>{0, 2});
  CHECK(r.has_edge_original(0, 2));
  CHECK(r.has_edge_original(2, 0));
  CHECK_FALSE(r.has_edge_original(0, 0));
  CHECK_FALSE(r.has_edge_original(2, 2));

  // Cross-check every pair against brute-force path enumeration.
  for (int i : s.members)
    for (int j : s.members) {
      if (i == j) continue;
      CHECK(r.has_edge_original(i, j) ==
            oracles::restricted_edge_brute(net.graph(), s.members, i, j));
    }
}

TEST_CASE("restricted graph singleton convention") {
  InfluenceNetwork net = example4_network();
  for (int i = 0; i < 4; ++i) {
    RestrictedGraph r = restricted_graph(net, NodeSet{{i}});
    CHECK(r.graph.n == 1);
    CHECK(r.has_edge_original(i, i));
  }
}

TEST_CASE("restricted graph on all nodes collapses to direct edges") {
  InfluenceNetwork net = example4_network();
  RestrictedGraph r = restricted_graph(net, NodeSet{{0, 1, 2, 3}});
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      if (i == j) continue;
      CHECK(r.has_edge_original(i, j) == net.graph().has_edge(i, j));
    }
}

TEST_CASE("directed ring recognition") {
  Matrix ring3 = Matrix::Zero(3, 3);
  ring3(0, 1) = ring3(1, 2) = ring3(2, 0) = 1.0;
  CHECK(is_directed_ring(graph_of(ring3)));

  Matrix two = Matrix::Zero(2, 2);
  two(0, 1) = two(1, 0) = 1.0;
  CHECK(is_directed_ring(graph_of(two)));

  Matrix chord = ring3;
  chord(0, 2) = 1.0;
  CHECK_FALSE(is_directed_ring(graph_of(chord)));

  Matrix split = Matrix::Zero(4, 4);  // two disjoint 2-cycles: 1-regular
  split(0, 1) = split(1, 0) = split(2, 3) = split(3, 2) = 1.0;
  CHECK_FALSE(is_directed_ring(graph_of(split)));
}

TEST_CASE("centrality is strictly positive on random valid networks") {
  SplitMix64 rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 2 + rng.next_below(7);
    InfluenceNetwork net =
        validate_network(testsupport::random_stochastic(n, rng));
    CHECK(stationary_distribution(net).minCoeff() > 0.0);
  }
}
