#include "pcn/graph.hpp"

#include <algorithm>

#include "pcn/error.hpp"

namespace pcn {

Msat fee(const ChannelPolicy& policy, Msat amount_msat) {
  // 128-bit product: snapshot fee rates times large amounts overflow 64 bits.
  const auto prop = static_cast<__int128>(policy.prop_fee_millionths) * amount_msat / 1'000'000;
  return policy.base_fee_msat + static_cast<Msat>(prop);
}

BalanceSplit BalanceSplit::equal(Msat capacity_msat) {
  const Msat half = capacity_msat / 2;
  return {half, capacity_msat - half};
}

NodeIndex NetworkGraph::add_node(NodeId id) {
  if (id.empty()) throw InvalidArgument("node id must be non-empty");
  if (index_.contains(id)) throw InvalidArgument("duplicate node id: " + id.str());
  const auto v = static_cast<NodeIndex>(nodes_.size());
  index_.emplace(id, v);
  nodes_.push_back(std::move(id));
  adjacency_.emplace_back();
  return v;
}

NodeIndex NetworkGraph::ensure_node(const NodeId& id) {
  if (auto v = find(id)) return *v;
  return add_node(id);
}

std::optional<NodeIndex> NetworkGraph::find(const NodeId& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

NodeIndex NetworkGraph::index_of(const NodeId& id) const {
  auto v = find(id);
  if (!v) throw InvalidArgument("unknown node: " + id.str());
  return *v;
}

ChannelIndex NetworkGraph::add_channel(const NodeId& a, const NodeId& b, Msat capacity_msat,
                                       BalanceSplit split, const ChannelPolicy& policy_a,
                                       const ChannelPolicy& policy_b, std::string label) {
  return add_channel(index_of(a), index_of(b), capacity_msat, split, policy_a, policy_b,
                     std::move(label));
}

ChannelIndex NetworkGraph::add_channel(NodeIndex a, NodeIndex b, Msat capacity_msat,
                                       BalanceSplit split, const ChannelPolicy& policy_a,
                                       const ChannelPolicy& policy_b, std::string label) {
  if (a >= nodes_.size() || b >= nodes_.size()) throw InvalidArgument("channel endpoint out of range");
  if (a == b) throw InvalidArgument("channel endpoints must differ: " + nodes_[a].str());
  if (capacity_msat <= 0) throw InvalidArgument("channel capacity must be positive");
  if (split.a < 0 || split.b < 0 || split.a + split.b != capacity_msat)
    throw InvalidArgument("channel balances must be non-negative and sum to capacity");
  const auto id = static_cast<ChannelIndex>(channels_.size());
  if (label.empty()) label = "c" + std::to_string(id);
  channels_.push_back(Channel{std::move(label), a, b, capacity_msat, split.a, split.b, policy_a,
                              policy_b});
  adjacency_[a].push_back(id);
  adjacency_[b].push_back(id);
  return id;
}

void NetworkGraph::remove_channel(ChannelIndex id) {
  if (id >= channels_.size()) throw InvalidArgument("unknown channel index");
  const Channel& c = channels_[id];
  for (NodeIndex end : {c.node_a, c.node_b}) {
    auto& adj = adjacency_[end];
    adj.erase(std::remove(adj.begin(), adj.end(), id), adj.end());
  }
  channels_.erase(channels_.begin() + id);
  if (id == channels_.size()) return;  // was the last one, nothing to renumber
  for (auto& adj : adjacency_)
    for (auto& ch : adj)
      if (ch > id) --ch;
}

void NetworkGraph::transfer(ChannelIndex id, NodeIndex from, Msat amount_msat) {
  Channel& c = channels_.at(id);
  if (amount_msat < 0) throw InvalidArgument("negative transfer");
  if (from != c.node_a && from != c.node_b) throw InvalidArgument("node is not a channel endpoint");
  Msat& src = from == c.node_a ? c.balance_a_msat : c.balance_b_msat;
  Msat& dst = from == c.node_a ? c.balance_b_msat : c.balance_a_msat;
  if (src < amount_msat) throw InvalidArgument("insufficient channel balance");
  src -= amount_msat;
  dst += amount_msat;
}

bool NetworkGraph::has_channel_between(NodeIndex a, NodeIndex b) const {
  return std::any_of(adjacency_[a].begin(), adjacency_[a].end(),
                     [&](ChannelIndex c) { return channels_[c].other(a) == b; });
}

Msat NetworkGraph::node_wealth(NodeIndex v) const {
  Msat total = 0;
  for (ChannelIndex c : adjacency_[v]) total += channels_[c].balance_of(v);
  return total;
}

Msat NetworkGraph::total_capacity() const {
  Msat total = 0;
  for (const auto& c : channels_) total += c.capacity_msat;
  return total;
}

bool NetworkGraph::check_consistency() const {
  if (adjacency_.size() != nodes_.size() || index_.size() != nodes_.size()) return false;
  for (NodeIndex v = 0; v < nodes_.size(); ++v) {
    auto it = index_.find(nodes_[v]);
    if (it == index_.end() || it->second != v) return false;
  }
  std::vector<std::vector<ChannelIndex>> expected(nodes_.size());
  for (ChannelIndex id = 0; id < channels_.size(); ++id) {
    const Channel& c = channels_[id];
    if (c.node_a >= nodes_.size() || c.node_b >= nodes_.size() || c.node_a == c.node_b) return false;
    if (c.balance_a_msat < 0 || c.balance_b_msat < 0) return false;
    if (c.balance_a_msat + c.balance_b_msat != c.capacity_msat) return false;
    expected[c.node_a].push_back(id);
    expected[c.node_b].push_back(id);
  }
  for (NodeIndex v = 0; v < nodes_.size(); ++v) {
    auto have = adjacency_[v];
    std::sort(have.begin(), have.end());
    if (have != expected[v]) return false;
  }
  return true;
}

FeeGraph::FeeGraph(std::vector<NodeId> nodes, Msat amount_msat,
                   std::vector<std::vector<FeeEdge>> out_edges)
    : nodes_(std::move(nodes)), amount_msat_(amount_msat) {
  offsets_.assign(nodes_.size() + 1, 0);
  for (std::size_t u = 0; u < nodes_.size(); ++u) {
    auto& edges = out_edges[u];
    // Collapse parallel edges to the cheapest one.
    std::sort(edges.begin(), edges.end(), [](const FeeEdge& x, const FeeEdge& y) {
      return x.target != y.target ? x.target < y.target : x.weight < y.weight;
    });
    edges.erase(std::unique(edges.begin(), edges.end(),
                            [](const FeeEdge& x, const FeeEdge& y) { return x.target == y.target; }),
                edges.end());
    offsets_[u + 1] = offsets_[u] + edges.size();
    for (const auto& e : edges) {
      targets_.push_back(e.target);
      weights_.push_back(e.weight);
    }
  }
}

std::optional<Msat> FeeGraph::weight(NodeIndex u, NodeIndex v) const {
  auto targets = neighbors(u);
  auto it = std::lower_bound(targets.begin(), targets.end(), v);
  if (it == targets.end() || *it != v) return std::nullopt;
  return weights(u)[static_cast<std::size_t>(it - targets.begin())];
}

std::optional<NodeIndex> FeeGraph::find(const NodeId& id) const {
  auto it = std::find(nodes_.begin(), nodes_.end(), id);
  if (it == nodes_.end()) return std::nullopt;
  return static_cast<NodeIndex>(it - nodes_.begin());
}

FeeGraph build_fee_graph(const NetworkGraph& g, Msat amount_msat) {
  if (amount_msat <= 0) throw InvalidArgument("fee graph amount must be positive");
  std::vector<std::vector<FeeEdge>> out(g.node_count());
  for (const Channel& c : g.channels()) {
    if (c.capacity_msat < amount_msat) continue;
    if (c.policy_a.enabled) out[c.node_a].push_back({c.node_b, fee(c.policy_a, amount_msat)});
    if (c.policy_b.enabled) out[c.node_b].push_back({c.node_a, fee(c.policy_b, amount_msat)});
  }
  return FeeGraph(g.nodes(), amount_msat, std::move(out));
}

std::size_t degree(const FeeGraph& fg, const NodeId& v) {
  auto idx = fg.find(v);
  if (!idx) throw InvalidArgument("unknown node: " + v.str());
  return fg.out_degree(*idx);
}

namespace {

std::vector<std::vector<NodeIndex>> dedupe(std::vector<std::vector<NodeIndex>> adj) {
  for (auto& list : adj) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return adj;
}

}  // namespace

std::vector<std::vector<NodeIndex>> undirected_projection(const FeeGraph& fg) {
  std::vector<std::vector<NodeIndex>> adj(fg.node_count());
  for (NodeIndex u = 0; u < fg.node_count(); ++u)
    for (NodeIndex v : fg.neighbors(u)) {
      adj[u].push_back(v);
      adj[v].push_back(u);
    }
  return dedupe(std::move(adj));
}

std::vector<std::vector<NodeIndex>> undirected_projection(const NetworkGraph& g) {
  std::vector<std::vector<NodeIndex>> adj(g.node_count());
  for (const Channel& c : g.channels()) {
    adj[c.node_a].push_back(c.node_b);
    adj[c.node_b].push_back(c.node_a);
  }
  return dedupe(std::move(adj));
}

}  // namespace pcn
