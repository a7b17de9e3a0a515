#pragma once

#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "pcn/types.hpp"

namespace pcn {

// Forwarding fee policy of one channel direction.
struct ChannelPolicy {
  Msat base_fee_msat = 1000;
  std::int64_t prop_fee_millionths = 1;
  std::int64_t cltv_delta = 40;
  bool enabled = true;

  static ChannelPolicy defaults() { return {}; }
  static ChannelPolicy disabled() { return {0, 0, 0, false}; }

  friend bool operator==(const ChannelPolicy&, const ChannelPolicy&) = default;
};

// base + floor(prop * amount / 1e6). `amount_msat` is what the charging node forwards.
Msat fee(const ChannelPolicy& policy, Msat amount_msat);

struct BalanceSplit {
  Msat a = 0;
  Msat b = 0;

  static BalanceSplit equal(Msat capacity_msat);
};

struct Channel {
  std::string label;
  NodeIndex node_a = 0;
  NodeIndex node_b = 0;
  Msat capacity_msat = 0;
  Msat balance_a_msat = 0;
  Msat balance_b_msat = 0;
  ChannelPolicy policy_a;  // a -> b
  ChannelPolicy policy_b;  // b -> a

  NodeIndex other(NodeIndex v) const { return v == node_a ? node_b : node_a; }
  // Policy governing forwarding out of `from`.
  const ChannelPolicy& policy_from(NodeIndex from) const {
    return from == node_a ? policy_a : policy_b;
  }
  Msat balance_of(NodeIndex v) const {
    return v == node_a ? balance_a_msat : balance_b_msat;
  }

  friend bool operator==(const Channel&, const Channel&) = default;
};

// Directed multigraph of the payment channel network. Each channel carries two
// directed halves (policy and balance per endpoint).
class NetworkGraph {
 public:
  NodeIndex add_node(NodeId id);
  // Returns the existing index when present.
  NodeIndex ensure_node(const NodeId& id);

  std::optional<NodeIndex> find(const NodeId& id) const;
  // Throws InvalidArgument for unknown ids.
  NodeIndex index_of(const NodeId& id) const;
  const NodeId& node(NodeIndex v) const { return nodes_[v]; }
  const std::vector<NodeId>& nodes() const { return nodes_; }

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t channel_count() const { return channels_.size(); }

  ChannelIndex add_channel(const NodeId& a, const NodeId& b, Msat capacity_msat,
                           BalanceSplit split, const ChannelPolicy& policy_a,
                           const ChannelPolicy& policy_b, std::string label = {});
  ChannelIndex add_channel(NodeIndex a, NodeIndex b, Msat capacity_msat, BalanceSplit split,
                           const ChannelPolicy& policy_a, const ChannelPolicy& policy_b,
                           std::string label = {});
  // Indices of channels after `id` shift down by one.
  void remove_channel(ChannelIndex id);

  const Channel& channel(ChannelIndex id) const { return channels_[id]; }
  const std::vector<Channel>& channels() const { return channels_; }
  std::span<const ChannelIndex> incident(NodeIndex v) const { return adjacency_[v]; }

  // Moves `amount_msat` of `from`'s share to the other endpoint. Throws when the
  // share is insufficient.
  void transfer(ChannelIndex id, NodeIndex from, Msat amount_msat);

  bool has_channel_between(NodeIndex a, NodeIndex b) const;

  // Sum over channels of each node's balance share.
  Msat node_wealth(NodeIndex v) const;
  Msat total_capacity() const;

  // Full rescan of the adjacency and balance invariants.
  bool check_consistency() const;

  friend bool operator==(const NetworkGraph&, const NetworkGraph&) = default;

 private:
  std::vector<NodeId> nodes_;
  std::unordered_map<NodeId, NodeIndex> index_;
  std::vector<Channel> channels_;
  std::vector<std::vector<ChannelIndex>> adjacency_;
};

struct FeeEdge {
  NodeIndex target = 0;
  Msat weight = 0;

  friend bool operator==(const FeeEdge&, const FeeEdge&) = default;
};

// Capacity-filtered, fee-weighted simple digraph at a fixed amount. Node indices
// coincide with the NetworkGraph it was built from.
class FeeGraph {
 public:
  FeeGraph() = default;
  FeeGraph(std::vector<NodeId> nodes, Msat amount_msat,
           std::vector<std::vector<FeeEdge>> out_edges);

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return targets_.size(); }
  Msat amount_msat() const { return amount_msat_; }
  const std::vector<NodeId>& nodes() const { return nodes_; }

  std::span<const NodeIndex> neighbors(NodeIndex u) const {
    return {targets_.data() + offsets_[u], targets_.data() + offsets_[u + 1]};
  }
  std::span<const Msat> weights(NodeIndex u) const {
    return {weights_.data() + offsets_[u], weights_.data() + offsets_[u + 1]};
  }
  std::size_t out_degree(NodeIndex u) const { return offsets_[u + 1] - offsets_[u]; }
  std::optional<Msat> weight(NodeIndex u, NodeIndex v) const;
  std::optional<NodeIndex> find(const NodeId& id) const;

 private:
  std::vector<NodeId> nodes_;
  Msat amount_msat_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeIndex> targets_;
  std::vector<Msat> weights_;
};

FeeGraph build_fee_graph(const NetworkGraph& g, Msat amount_msat);

// Distinct out-neighbours of `v`. Throws InvalidArgument for unknown nodes.
std::size_t degree(const FeeGraph& fg, const NodeId& v);

// Undirected simple projection: u~v when either direction exists in `fg`.
std::vector<std::vector<NodeIndex>> undirected_projection(const FeeGraph& fg);
// Undirected simple projection over all channels of `g`.
std::vector<std::vector<NodeIndex>> undirected_projection(const NetworkGraph& g);

}  // namespace pcn
