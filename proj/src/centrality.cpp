#include "pcn/centrality.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <utility>

#include "pcn/parallel.hpp"

namespace pcn {

namespace {
// Fixed chunk count so floating-point reductions do not depend on thread count.
constexpr std::size_t kChunks = 64;
}  // namespace

void ShortestPathCounts::run(const FeeGraph& fg, NodeIndex source) {
  const std::size_t n = fg.node_count();
  dist.assign(n, kInfiniteDistance);
  sigma.assign(n, 0.0);
  order.clear();
  if (preds.size() != n) preds.assign(n, {});
  for (auto& p : preds) p.clear();

  std::vector<char> settled(n, 0);
  using Entry = std::pair<Msat, NodeIndex>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  dist[source] = 0;
  sigma[source] = 1.0;
  queue.emplace(0, source);
  while (!queue.empty()) {
    auto [d, u] = queue.top();
    queue.pop();
    if (settled[u] || d != dist[u]) continue;
    settled[u] = 1;
    order.push_back(u);
    auto targets = fg.neighbors(u);
    auto weights = fg.weights(u);
    for (std::size_t i = 0; i < targets.size(); ++i) {
      const NodeIndex v = targets[i];
      // Settled targets are excluded so zero-weight edges cannot close a cycle in
      // the predecessor DAG.
      if (settled[v]) continue;
      const Msat nd = d + weights[i];
      if (nd < dist[v]) {
        dist[v] = nd;
        sigma[v] = sigma[u];
        preds[v].assign(1, u);
        queue.emplace(nd, v);
      } else if (nd == dist[v]) {
        sigma[v] += sigma[u];
        preds[v].push_back(u);
      }
    }
  }
}

std::vector<double> betweenness(const FeeGraph& fg) {
  const std::size_t n = fg.node_count();
  const std::size_t chunks = std::min(kChunks, std::max<std::size_t>(n, 1));
  std::vector<std::vector<double>> partial(chunks);
  parallel_chunks(chunks, [&](std::size_t chunk) {
    auto& bc = partial[chunk];
    bc.assign(n, 0.0);
    ShortestPathCounts sp;
    std::vector<double> delta(n);
    const Range range = chunk_range(n, chunks, chunk);
    for (std::size_t s = range.begin; s < range.end; ++s) {
      sp.run(fg, static_cast<NodeIndex>(s));
      for (NodeIndex v : sp.order) delta[v] = 0.0;
      for (auto it = sp.order.rbegin(); it != sp.order.rend(); ++it) {
        const NodeIndex w = *it;
        for (NodeIndex v : sp.preds[w]) delta[v] += sp.sigma[v] / sp.sigma[w] * (1.0 + delta[w]);
        if (w != s) bc[w] += delta[w];
      }
    }
  });
  std::vector<double> bc(n, 0.0);
  for (const auto& part : partial)
    for (std::size_t v = 0; v < n; ++v) bc[v] += part[v];
  return bc;
}

AllPairs all_pairs(const FeeGraph& fg) {
  AllPairs ap;
  ap.n = fg.node_count();
  ap.dist.assign(ap.n * ap.n, kInfiniteDistance);
  ap.sigma.assign(ap.n * ap.n, 0.0);
  const std::size_t chunks = std::min(kChunks, std::max<std::size_t>(ap.n, 1));
  parallel_chunks(chunks, [&](std::size_t chunk) {
    ShortestPathCounts sp;
    const Range range = chunk_range(ap.n, chunks, chunk);
    for (std::size_t s = range.begin; s < range.end; ++s) {
      sp.run(fg, static_cast<NodeIndex>(s));
      std::copy(sp.dist.begin(), sp.dist.end(), ap.dist.begin() + static_cast<std::ptrdiff_t>(s * ap.n));
      std::copy(sp.sigma.begin(), sp.sigma.end(), ap.sigma.begin() + static_cast<std::ptrdiff_t>(s * ap.n));
    }
  });
  return ap;
}

}  // namespace pcn
