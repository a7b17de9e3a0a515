#include "pcn/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

#include "pcn/centrality.hpp"
#include "pcn/error.hpp"
#include "pcn/parallel.hpp"
#include "pcn/rng.hpp"

namespace pcn {

namespace {

constexpr std::size_t kChunks = 64;

// Scores are snapped to 1e-6 before ranking so that floating-point noise between
// symmetric nodes does not override the lexicographic tie-break.
std::int64_t quantize(double x) { return std::llround(x * 1e6); }

std::optional<NodeIndex> joiner_index(const AttachmentRequest& req) {
  return req.graph->find(req.joining);
}

std::vector<NodeIndex> candidate_pool(const AttachmentRequest& req) {
  const auto joiner = joiner_index(req);
  std::vector<NodeIndex> pool;
  pool.reserve(req.graph->node_count());
  for (NodeIndex v = 0; v < req.graph->node_count(); ++v)
    if (!joiner || v != *joiner) pool.push_back(v);
  return pool;
}

// Top k by descending score, ties to the smaller NodeId.
template <typename Score>
std::vector<NodeIndex> top_k(const NetworkGraph& g, std::vector<NodeIndex> pool,
                             const std::vector<Score>& score, int k) {
  auto better = [&](NodeIndex x, NodeIndex y) {
    if (score[x] != score[y]) return score[x] > score[y];
    return g.node(x) < g.node(y);
  };
  std::partial_sort(pool.begin(), pool.begin() + k, pool.end(), better);
  pool.resize(static_cast<std::size_t>(k));
  return pool;
}

std::vector<std::int64_t> fee_degrees(const FeeGraph& fg) {
  std::vector<std::int64_t> deg(fg.node_count());
  for (NodeIndex v = 0; v < fg.node_count(); ++v) deg[v] = static_cast<std::int64_t>(fg.out_degree(v));
  return deg;
}

NodeIndex highest_degree_node(const NetworkGraph& g, const std::vector<NodeIndex>& pool,
                              const std::vector<std::int64_t>& deg) {
  return top_k(g, pool, deg, 1).front();
}

CandidateSet to_candidates(const NetworkGraph& g, const std::vector<NodeIndex>& picks,
                           std::vector<double> objective = {}) {
  CandidateSet out;
  for (NodeIndex v : picks) out.peers.push_back(g.node(v));
  out.per_step_objective = std::move(objective);
  return out;
}

}  // namespace

StrategyKind parse_strategy(std::string_view name) {
  for (StrategyKind kind : all_strategies())
    if (strategy_name(kind) == name) return kind;
  throw InvalidArgument("unknown strategy '" + std::string(name) +
                        "' (expected random|degree|betweenness|k-center|k-median|mbi)");
}

std::string_view strategy_name(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::Random: return "random";
    case StrategyKind::Degree: return "degree";
    case StrategyKind::Betweenness: return "betweenness";
    case StrategyKind::KCenter: return "k-center";
    case StrategyKind::KMedian: return "k-median";
    case StrategyKind::Mbi: return "mbi";
  }
  return "?";
}

const std::vector<StrategyKind>& all_strategies() {
  static const std::vector<StrategyKind> kinds{StrategyKind::Random,  StrategyKind::Degree,
                                               StrategyKind::Betweenness, StrategyKind::KCenter,
                                               StrategyKind::KMedian, StrategyKind::Mbi};
  return kinds;
}

void validate(const AttachmentRequest& req) {
  if (req.graph == nullptr) throw InvalidArgument("attachment request without graph");
  if (req.joining.empty()) throw InvalidArgument("joining node id must be non-empty");
  const auto n = static_cast<std::int64_t>(req.graph->node_count());
  if (req.k < 1) throw InvalidArgument("k must be at least 1");
  if (req.k > n - 1)
    throw InvalidArgument("k=" + std::to_string(req.k) + " exceeds the limit n-1=" +
                          std::to_string(std::max<std::int64_t>(n - 1, 0)));
  if (req.cap_msat <= 0 || req.cap_msat % 2 != 0)
    throw InvalidArgument("channel capacity must be positive and even in msat");
  if (req.amount_hint_msat <= 0) throw InvalidArgument("amount hint must be positive");
}

ChannelIndex attach(NetworkGraph& g, NodeIndex joiner, NodeIndex peer, Msat cap_msat) {
  return g.add_channel(joiner, peer, cap_msat, BalanceSplit::equal(cap_msat),
                       ChannelPolicy::defaults(), ChannelPolicy::defaults());
}

CandidateSet random_strategy(const AttachmentRequest& req) {
  validate(req);
  auto pool = candidate_pool(req);
  RngStream rng(req.rng_seed);
  const auto k = static_cast<std::size_t>(req.k);
  // Partial Fisher-Yates.
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + rng.below(pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return to_candidates(*req.graph, pool);
}

CandidateSet highest_degree_strategy(const AttachmentRequest& req) {
  validate(req);
  const FeeGraph fg = build_fee_graph(*req.graph, req.amount_hint_msat);
  const auto deg = fee_degrees(fg);
  const auto picks = top_k(*req.graph, candidate_pool(req), deg, req.k);
  std::vector<double> objective;
  for (NodeIndex v : picks) objective.push_back(static_cast<double>(deg[v]));
  return to_candidates(*req.graph, picks, std::move(objective));
}

CandidateSet betweenness_strategy(const AttachmentRequest& req) {
  validate(req);
  const FeeGraph fg = build_fee_graph(*req.graph, req.amount_hint_msat);
  const auto bc = betweenness(fg);
  std::vector<std::int64_t> score(bc.size());
  std::transform(bc.begin(), bc.end(), score.begin(), quantize);
  const auto picks = top_k(*req.graph, candidate_pool(req), score, req.k);
  std::vector<double> objective;
  for (NodeIndex v : picks) objective.push_back(bc[v]);
  return to_candidates(*req.graph, picks, std::move(objective));
}

namespace {

constexpr std::int64_t kUnreachedHops = std::numeric_limits<std::int64_t>::max();

// Hop distances from a joiner attached to `chosen` (plus its existing peers).
std::vector<std::int64_t> joiner_hops(const std::vector<std::vector<NodeIndex>>& adj,
                                      std::optional<NodeIndex> joiner,
                                      const std::vector<NodeIndex>& chosen) {
  std::vector<std::int64_t> hops(adj.size(), kUnreachedHops);
  std::queue<NodeIndex> frontier;
  auto seed = [&](NodeIndex v) {
    if (hops[v] == kUnreachedHops) {
      hops[v] = 1;
      frontier.push(v);
    }
  };
  if (joiner) {
    hops[*joiner] = 0;
    for (NodeIndex v : adj[*joiner]) seed(v);
  }
  for (NodeIndex v : chosen) seed(v);
  while (!frontier.empty()) {
    const NodeIndex u = frontier.front();
    frontier.pop();
    for (NodeIndex v : adj[u])
      if (hops[v] == kUnreachedHops) {
        hops[v] = hops[u] + 1;
        frontier.push(v);
      }
  }
  return hops;
}

}  // namespace

CandidateSet k_center_strategy(const AttachmentRequest& req) {
  validate(req);
  const NetworkGraph& g = *req.graph;
  const FeeGraph fg = build_fee_graph(g, req.amount_hint_msat);
  const auto adj = undirected_projection(fg);
  const auto deg = fee_degrees(fg);
  const auto joiner = joiner_index(req);
  const auto pool = candidate_pool(req);

  std::vector<NodeIndex> chosen{highest_degree_node(g, pool, deg)};
  std::vector<char> taken(g.node_count(), 0);
  taken[chosen.front()] = 1;
  std::vector<double> objective;
  for (;;) {
    const auto hops = joiner_hops(adj, joiner, chosen);
    std::int64_t ecc = 0;
    for (NodeIndex v : pool) ecc = std::max(ecc, hops[v]);
    objective.push_back(ecc == kUnreachedHops ? std::numeric_limits<double>::infinity()
                                              : static_cast<double>(ecc));
    if (chosen.size() == static_cast<std::size_t>(req.k)) break;

    std::optional<NodeIndex> best;
    for (NodeIndex v : pool) {
      if (taken[v]) continue;
      if (!best || hops[v] > hops[*best] ||
          (hops[v] == hops[*best] &&
           (deg[v] > deg[*best] || (deg[v] == deg[*best] && g.node(v) < g.node(*best)))))
        best = v;
    }
    chosen.push_back(*best);
    taken[*best] = 1;
  }
  return to_candidates(g, chosen, std::move(objective));
}

Msat k_median_objective(const FeeGraph& fg, std::optional<NodeIndex> joiner,
                        const std::vector<NodeIndex>& peers) {
  const std::size_t n = fg.node_count();
  std::vector<Msat> dist(n, kInfiniteDistance);
  using Entry = std::pair<Msat, NodeIndex>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  auto seed = [&](NodeIndex v) {
    dist[v] = 0;
    queue.emplace(0, v);
  };
  if (joiner) {
    // The joiner pays no fee on its own first hop.
    for (NodeIndex v : fg.neighbors(*joiner)) seed(v);
  }
  for (NodeIndex v : peers) seed(v);
  while (!queue.empty()) {
    auto [d, u] = queue.top();
    queue.pop();
    if (d != dist[u]) continue;
    if (joiner && u == *joiner) continue;
    auto targets = fg.neighbors(u);
    auto weights = fg.weights(u);
    for (std::size_t i = 0; i < targets.size(); ++i)
      if (d + weights[i] < dist[targets[i]]) {
        dist[targets[i]] = d + weights[i];
        queue.emplace(dist[targets[i]], targets[i]);
      }
  }
  Msat total = 0;
  for (NodeIndex v = 0; v < n; ++v) {
    if (joiner && v == *joiner) continue;
    total += dist[v] == kInfiniteDistance ? kUnreachablePenaltyMsat : dist[v];
  }
  return total;
}

namespace {

// Dijkstra from `c` that only expands nodes it brings strictly closer than `cur`.
// Since `cur` is a shortest-path distance from the joiner it satisfies the
// triangle inequality, so pruned nodes cannot lead to any further improvement.
class PrunedSearch {
 public:
  explicit PrunedSearch(std::size_t n) : dist_(n, kInfiniteDistance) {}

  // Returns the objective decrease obtained by adding `c`; when `apply`, lowers
  // `cur` accordingly.
  Msat run(const FeeGraph& fg, std::optional<NodeIndex> joiner, NodeIndex c,
           std::vector<Msat>& cur, bool apply) {
    Msat gain = 0;
    touched_.clear();
    using Entry = std::pair<Msat, NodeIndex>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
    dist_[c] = 0;
    touched_.push_back(c);
    queue.emplace(0, c);
    while (!queue.empty()) {
      auto [d, u] = queue.top();
      queue.pop();
      if (d != dist_[u] || d >= cur[u]) continue;
      gain += (cur[u] == kInfiniteDistance ? kUnreachablePenaltyMsat : cur[u]) - d;
      if (apply) cur[u] = d;
      auto targets = fg.neighbors(u);
      auto weights = fg.weights(u);
      for (std::size_t i = 0; i < targets.size(); ++i) {
        const NodeIndex v = targets[i];
        if (joiner && v == *joiner) continue;
        const Msat nd = d + weights[i];
        if (nd < dist_[v] && nd < cur[v]) {
          if (dist_[v] == kInfiniteDistance) touched_.push_back(v);
          dist_[v] = nd;
          queue.emplace(nd, v);
        }
      }
    }
    for (NodeIndex v : touched_) dist_[v] = kInfiniteDistance;
    return gain;
  }

 private:
  std::vector<Msat> dist_;
  std::vector<NodeIndex> touched_;
};

}  // namespace

CandidateSet k_median_strategy(const AttachmentRequest& req) {
  validate(req);
  const NetworkGraph& g = *req.graph;
  const FeeGraph fg = build_fee_graph(g, req.amount_hint_msat);
  const auto deg = fee_degrees(fg);
  const auto joiner = joiner_index(req);
  const auto pool = candidate_pool(req);
  const std::size_t n = g.node_count();

  // cur(v): distance from the joiner given its existing channels (zero-weight
  // first hops), before any candidate is added.
  std::vector<Msat> cur(n, kInfiniteDistance);
  Msat objective_value = 0;
  {
    PrunedSearch search(n);
    if (joiner) {
      cur[*joiner] = 0;
      for (NodeIndex v : fg.neighbors(*joiner)) search.run(fg, joiner, v, cur, true);
    }
    for (NodeIndex v : pool) objective_value += cur[v] == kInfiniteDistance ? kUnreachablePenaltyMsat : cur[v];
  }

  std::vector<NodeIndex> chosen;
  std::vector<char> taken(n, 0);
  std::vector<double> objective;
  auto take = [&](NodeIndex c) {
    PrunedSearch search(n);
    objective_value -= search.run(fg, joiner, c, cur, true);
    chosen.push_back(c);
    taken[c] = 1;
    objective.push_back(static_cast<double>(objective_value));
  };
  take(highest_degree_node(g, pool, deg));

  while (chosen.size() < static_cast<std::size_t>(req.k)) {
    const std::size_t chunks = std::min(kChunks, pool.size());
    struct Best {
      std::optional<NodeIndex> node;
      Msat gain = -1;
    };
    std::vector<Best> best(chunks);
    auto better = [&](Msat gain, NodeIndex v, const Best& b) {
      return !b.node || gain > b.gain || (gain == b.gain && g.node(v) < g.node(*b.node));
    };
    parallel_chunks(chunks, [&](std::size_t chunk) {
      PrunedSearch search(n);
      const Range range = chunk_range(pool.size(), chunks, chunk);
      for (std::size_t i = range.begin; i < range.end; ++i) {
        const NodeIndex c = pool[i];
        if (taken[c]) continue;
        const Msat gain = search.run(fg, joiner, c, cur, false);
        if (better(gain, c, best[chunk])) best[chunk] = {c, gain};
      }
    });
    Best winner;
    for (const auto& b : best)
      if (b.node && better(b.gain, *b.node, winner)) winner = b;
    take(*winner.node);
  }
  return to_candidates(g, chosen, std::move(objective));
}

namespace {

// bc(joiner) on the graph underlying `ap`.
double joiner_betweenness(const AllPairs& ap, NodeIndex j) {
  const std::size_t n = ap.n;
  double bc = 0.0;
  for (NodeIndex s = 0; s < n; ++s) {
    if (s == j || ap.d(s, j) == kInfiniteDistance) continue;
    for (NodeIndex t = 0; t < n; ++t) {
      if (t == j || t == s || ap.d(j, t) == kInfiniteDistance) continue;
      if (ap.d(s, j) + ap.d(j, t) == ap.d(s, t))
        bc += ap.count(s, j) * ap.count(j, t) / ap.count(s, t);
    }
  }
  return bc;
}

// bc(joiner) after adding the edges joiner->u (weight w_ju) and u->joiner (w_uj).
// Every shortest path created by the new edges passes through the joiner, so
// distances and counts of the base graph are enough.
double joiner_betweenness_with(const AllPairs& ap, NodeIndex j, NodeIndex u, Msat w_ju, Msat w_uj,
                               std::vector<Msat>& a, std::vector<double>& sa,
                               std::vector<Msat>& b, std::vector<double>& sb) {
  const std::size_t n = ap.n;
  for (NodeIndex v = 0; v < n; ++v) {
    // s -> joiner
    a[v] = ap.d(v, j);
    sa[v] = ap.count(v, j);
    if (ap.d(v, u) != kInfiniteDistance) {
      const Msat alt = ap.d(v, u) + w_uj;
      if (alt < a[v]) {
        a[v] = alt;
        sa[v] = ap.count(v, u);
      } else if (alt == a[v]) {
        sa[v] += ap.count(v, u);
      }
    }
    // joiner -> t
    b[v] = ap.d(j, v);
    sb[v] = ap.count(j, v);
    if (ap.d(u, v) != kInfiniteDistance) {
      const Msat alt = w_ju + ap.d(u, v);
      if (alt < b[v]) {
        b[v] = alt;
        sb[v] = ap.count(u, v);
      } else if (alt == b[v]) {
        sb[v] += ap.count(u, v);
      }
    }
  }
  double bc = 0.0;
  for (NodeIndex s = 0; s < n; ++s) {
    if (s == j || a[s] == kInfiniteDistance) continue;
    const Msat old_sj = ap.d(s, j);
    const double old_sigma_sj = ap.count(s, j);
    const Msat* dist_row = ap.dist.data() + static_cast<std::size_t>(s) * n;
    const double* sigma_row = ap.sigma.data() + static_cast<std::size_t>(s) * n;
    for (NodeIndex t = 0; t < n; ++t) {
      if (t == j || t == s || b[t] == kInfiniteDistance) continue;
      const Msat through = a[s] + b[t];
      const Msat direct = dist_row[t];
      if (through < direct) {
        bc += 1.0;
      } else if (through == direct) {
        const double via = sa[s] * sb[t];
        double old_via = 0.0;
        if (old_sj != kInfiniteDistance && ap.d(j, t) != kInfiniteDistance && old_sj + ap.d(j, t) == direct)
          old_via = old_sigma_sj * ap.count(j, t);
        bc += via / (sigma_row[t] - old_via + via);
      }
    }
  }
  return bc;
}

}  // namespace

CandidateSet mbi_strategy(const AttachmentRequest& req) {
  validate(req);
  NetworkGraph g = *req.graph;
  const NodeIndex j = g.ensure_node(req.joining);
  const std::size_t n = g.node_count();
  {
    std::size_t open = 0;
    for (NodeIndex u = 0; u < n; ++u)
      if (u != j && !g.has_channel_between(j, u)) ++open;
    if (static_cast<std::size_t>(req.k) > open)
      throw InvalidArgument("k=" + std::to_string(req.k) + " exceeds the " + std::to_string(open) +
                            " nodes the joiner is not yet connected to");
  }
  const Msat w_new = fee(ChannelPolicy::defaults(), req.amount_hint_msat);
  const bool new_edge_qualifies = req.cap_msat >= req.amount_hint_msat;

  std::vector<NodeIndex> chosen;
  std::vector<double> objective;
  for (int round = 0; round < req.k; ++round) {
    const FeeGraph fg = build_fee_graph(g, req.amount_hint_msat);
    const AllPairs ap = all_pairs(fg);
    std::vector<NodeIndex> open;
    for (NodeIndex u = 0; u < n; ++u)
      if (u != j && !g.has_channel_between(j, u)) open.push_back(u);

    std::vector<double> value(open.size());
    if (!new_edge_qualifies) {
      std::fill(value.begin(), value.end(), joiner_betweenness(ap, j));
    } else {
      const std::size_t chunks = std::min(kChunks, open.size());
      parallel_chunks(chunks, [&](std::size_t chunk) {
        std::vector<Msat> a(n), b(n);
        std::vector<double> sa(n), sb(n);
        const Range range = chunk_range(open.size(), chunks, chunk);
        for (std::size_t i = range.begin; i < range.end; ++i)
          value[i] = joiner_betweenness_with(ap, j, open[i], w_new, w_new, a, sa, b, sb);
      });
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < open.size(); ++i) {
      const auto qi = quantize(value[i]);
      const auto qb = quantize(value[best]);
      if (qi > qb || (qi == qb && g.node(open[i]) < g.node(open[best]))) best = i;
    }
    attach(g, j, open[best], req.cap_msat);
    chosen.push_back(open[best]);
    objective.push_back(value[best]);
  }
  return to_candidates(g, chosen, std::move(objective));
}

CandidateSet select_candidates(StrategyKind kind, const AttachmentRequest& req) {
  switch (kind) {
    case StrategyKind::Random: return random_strategy(req);
    case StrategyKind::Degree: return highest_degree_strategy(req);
    case StrategyKind::Betweenness: return betweenness_strategy(req);
    case StrategyKind::KCenter: return k_center_strategy(req);
    case StrategyKind::KMedian: return k_median_strategy(req);
    case StrategyKind::Mbi: return mbi_strategy(req);
  }
  throw InvalidArgument("unknown strategy");
}

}  // namespace pcn
