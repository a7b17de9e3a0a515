#include <doctest.h>

#include "../oracles.hpp"
#include "../support.hpp"
#include "pcn/centrality.hpp"

using namespace pcn;
using testing_support::from_edges;

TEST_CASE("betweenness on a path and a star") {
  auto bc = betweenness(build_fee_graph(from_edges(3, {{0, 1}, {1, 2}}), 1000));
  CHECK(bc[0] == 0.0);
  CHECK(bc[1] == doctest::Approx(2.0));
  CHECK(bc[2] == 0.0);
  bc = betweenness(build_fee_graph(from_edges(4, {{0, 1}, {0, 2}, {0, 3}}), 1000));
  CHECK(bc[0] == doctest::Approx(6.0));
  CHECK(bc[1] == 0.0);
}

TEST_CASE("zero-fee edges are counted once") {
  NetworkGraph g = testing_support::with_nodes(4);
  const ChannelPolicy free{0, 0, 0, true};
  for (auto [a, b] : std::vector<std::pair<int, int>>{{0, 1}, {1, 2}, {2, 3}}) testing_support::link(g, a, b, 2000, free, free);
  const auto bc = betweenness(build_fee_graph(g, 1000));
  // path of 4: inner nodes lie on 4 ordered pairs each
  CHECK(bc[1] == doctest::Approx(4.0));
  CHECK(bc[2] == doctest::Approx(4.0));
}

TEST_CASE("Brandes matches path enumeration") {
  std::mt19937_64 rng(99);
  testing_support::RandomGraphOptions o;
  o.min_base = 1;
  o.max_base = 4;  // few distinct weights, many equal-cost paths
  o.max_ppm = 0;
  o.disabled_prob = 0.3;
  o.parallel_prob = 0.2;
  for (int t = 0; t < 40; ++t) {
    o.n = 3 + t % 6;
    o.edge_prob = 0.5;
    const NetworkGraph g = testing_support::random_graph(rng, o);
    const auto expected = oracle::naive_betweenness(oracle::weight_matrix(g, 1000));
    const auto got = betweenness(build_fee_graph(g, 1000));
    for (std::size_t v = 0; v < expected.size(); ++v) CHECK(std::abs(got[v] - expected[v]) <= 1e-9);
  }
}

TEST_CASE("all_pairs matches Floyd-Warshall counts") {
  std::mt19937_64 rng(3);
  testing_support::RandomGraphOptions o;
  o.min_base = 1;
  o.max_base = 3;
  o.max_ppm = 0;
  o.disabled_prob = 0.2;
  for (int t = 0; t < 20; ++t) {
    o.n = 4 + t % 12;
    o.edge_prob = 0.35;
    const NetworkGraph g = testing_support::random_graph(rng, o);
    const FeeGraph fg = build_fee_graph(g, 1000);
    const AllPairs ap = all_pairs(fg);
    const auto cd = oracle::floyd_warshall(oracle::weight_matrix(g, 1000));
    for (NodeIndex s = 0; s < g.node_count(); ++s)
      for (NodeIndex u = 0; u < g.node_count(); ++u) {
        if (cd.dist[s][u] >= oracle::kInf) {
          CHECK(ap.d(s, u) == kInfiniteDistance);
          continue;
        }
        CHECK(ap.d(s, u) == cd.dist[s][u]);
        CHECK(ap.count(s, u) == doctest::Approx(cd.sigma[s][u]));
      }
    const auto bc = betweenness(fg);
    for (NodeIndex v = 0; v < g.node_count(); ++v) CHECK(bc[v] == doctest::Approx(oracle::betweenness_of(cd, v)));
  }
}
