#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "pcn/graph.hpp"

namespace pcn {

constexpr Msat kInfiniteDistance = std::numeric_limits<Msat>::max();

// Single-source shortest-path state on a FeeGraph: distances, path counts
// (sigma), settle order and the shortest-path predecessor DAG.
struct ShortestPathCounts {
  std::vector<Msat> dist;
  std::vector<double> sigma;
  std::vector<NodeIndex> order;  // settled nodes, non-decreasing distance
  std::vector<std::vector<NodeIndex>> preds;

  void run(const FeeGraph& fg, NodeIndex source);
};

// Unnormalized weighted betweenness over ordered pairs (s, t), s != v != t
// (weighted Brandes).
std::vector<double> betweenness(const FeeGraph& fg);

// All-pairs distances and shortest-path counts, row-major n x n.
struct AllPairs {
  std::size_t n = 0;
  std::vector<Msat> dist;
  std::vector<double> sigma;

  Msat d(NodeIndex s, NodeIndex t) const { return dist[static_cast<std::size_t>(s) * n + t]; }
  double count(NodeIndex s, NodeIndex t) const { return sigma[static_cast<std::size_t>(s) * n + t]; }
};

AllPairs all_pairs(const FeeGraph& fg);

}  // namespace pcn
