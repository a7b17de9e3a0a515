#pragma once

#include <optional>
#include <unordered_set>
#include <vector>

#include "pcn/graph.hpp"

namespace pcn {

struct RouteHop {
  ChannelIndex channel = 0;
  NodeIndex from = 0;  // forwarding node of this hop
  NodeIndex to = 0;
  Msat amount_msat = 0;  // amount travelling over this hop's channel
  Msat fee_msat = 0;     // charged by `from` (0 for the source)
};

struct Route {
  std::vector<RouteHop> hops;
  Msat total_fee_msat = 0;
  Msat total_sent_msat = 0;
  // Search cost: sum of pathfinding edge weights (fees on the final amount plus
  // any cltv penalty); differs from total_fee_msat, which is settled backward.
  Msat search_cost = 0;
};

struct RoutingOptions {
  // Added per non-source hop: llround(cltv_penalty * cltv_delta) msat.
  double cltv_penalty = 0.0;
  // Extra pathfinding attempts after a balance failure, each excluding the
  // failing channel.
  int retries = 0;
  // Channels ignored by pathfinding.
  std::unordered_set<ChannelIndex> excluded;
};

// Cheapest path in the capacity-filtered multigraph. Ties: fewer hops, then the
// lexicographically smallest next NodeId. Returns nullopt when no path exists.
std::optional<Route> find_route(const NetworkGraph& g, NodeIndex source, NodeIndex dest,
                                Msat amount_msat, const RoutingOptions& options = {});
std::optional<Route> find_route(const NetworkGraph& g, const NodeId& source, const NodeId& dest,
                                Msat amount_msat, const RoutingOptions& options = {});

enum class FailureKind { NoPath, InsufficientBalance };

struct PaymentFailure {
  FailureKind kind = FailureKind::NoPath;
  std::size_t hop = 0;  // set for InsufficientBalance
};

struct PaymentOutcome {
  bool success = false;
  std::optional<Route> route;
  Msat fee_paid_msat = 0;
  std::optional<PaymentFailure> failure;
  std::vector<NodeIndex> intermediaries;
};

// Routes on public capacities, then settles on private balances. Failed payments
// leave `g` untouched.
PaymentOutcome execute_payment(NetworkGraph& g, NodeIndex source, NodeIndex dest,
                               Msat amount_msat, const RoutingOptions& options = {});

bool record_intermediaries(const PaymentOutcome& outcome, NodeIndex watched);

}  // namespace pcn
