// Graph builders shared by the test programs.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "pcn/graph.hpp"

namespace testing_support {

using pcn::ChannelPolicy;
using pcn::Msat;
using pcn::NetworkGraph;
using pcn::NodeId;

inline std::string name(int i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "v%02d", i);
  return buf;
}

inline NetworkGraph with_nodes(int n) {
  NetworkGraph g;
  for (int i = 0; i < n; ++i) g.add_node(NodeId(name(i)));
  return g;
}

inline void link(NetworkGraph& g, int a, int b, Msat capacity = 2'000'000'000,
                 ChannelPolicy pa = ChannelPolicy::defaults(), ChannelPolicy pb = ChannelPolicy::defaults()) {
  g.add_channel(static_cast<pcn::NodeIndex>(a), static_cast<pcn::NodeIndex>(b), capacity,
                pcn::BalanceSplit::equal(capacity), pa, pb);
}

// Undirected simple graph from an edge list, default policies.
inline NetworkGraph from_edges(int n, const std::vector<std::pair<int, int>>& edges,
                               Msat capacity = 2'000'000'000) {
  NetworkGraph g = with_nodes(n);
  for (auto [a, b] : edges) link(g, a, b, capacity);
  return g;
}

struct RandomGraphOptions {
  int n = 10;
  double edge_prob = 0.3;
  double disabled_prob = 0.0;  // per direction
  Msat min_base = 0, max_base = 5000;
  std::int64_t min_ppm = 0, max_ppm = 5000;
  Msat min_capacity = 100'000, max_capacity = 10'000'000;
  double parallel_prob = 0.0;  // chance of a second channel on a linked pair
  bool connect = false;        // add a spanning path first
};

inline ChannelPolicy random_policy(std::mt19937_64& rng, const RandomGraphOptions& o) {
  std::uniform_int_distribution<Msat> base(o.min_base, o.max_base);
  std::uniform_int_distribution<std::int64_t> ppm(o.min_ppm, o.max_ppm);
  std::uniform_int_distribution<std::int64_t> cltv(0, 144);
  std::bernoulli_distribution off(o.disabled_prob);
  ChannelPolicy p{base(rng), ppm(rng), cltv(rng), true};
  if (off(rng)) p.enabled = false;
  return p;
}

inline NetworkGraph random_graph(std::mt19937_64& rng, const RandomGraphOptions& o) {
  NetworkGraph g = with_nodes(o.n);
  std::uniform_int_distribution<Msat> cap(o.min_capacity / 2, o.max_capacity / 2);
  std::bernoulli_distribution edge(o.edge_prob), parallel(o.parallel_prob);
  auto add = [&](int a, int b) {
    const Msat c = 2 * cap(rng);
    g.add_channel(static_cast<pcn::NodeIndex>(a), static_cast<pcn::NodeIndex>(b), c, pcn::BalanceSplit::equal(c),
                  random_policy(rng, o), random_policy(rng, o));
  };
  std::vector<int> perm(static_cast<std::size_t>(o.n));
  for (int i = 0; i < o.n; ++i) perm[static_cast<std::size_t>(i)] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  for (int i = 0; i < o.n; ++i)
    for (int j = i + 1; j < o.n; ++j) {
      const bool on_spine = o.connect && (std::abs(static_cast<int>(std::find(perm.begin(), perm.end(), i) - perm.begin()) -
                                                   static_cast<int>(std::find(perm.begin(), perm.end(), j) - perm.begin())) == 1);
      if (on_spine || edge(rng)) {
        add(i, j);
        if (parallel(rng)) add(i, j);
      }
    }
  return g;
}

}  // namespace testing_support
