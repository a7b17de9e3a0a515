#include "pcn/routing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <tuple>

#include "pcn/error.hpp"

namespace pcn {

namespace {

constexpr Msat kUnreached = std::numeric_limits<Msat>::max();
constexpr ChannelIndex kNoChannel = std::numeric_limits<ChannelIndex>::max();

struct Label {
  Msat cost = kUnreached;
  std::uint32_t hops = 0;
  NodeIndex next = 0;  // successor toward dest
  ChannelIndex via = kNoChannel;
};

Msat penalty(const ChannelPolicy& p, double factor) {
  if (factor == 0.0) return 0;
  return static_cast<Msat>(std::llround(factor * static_cast<double>(p.cltv_delta)));
}

}  // namespace

// Backward Dijkstra from the destination: every node's label is its best
// (cost, hops, successor) toward dest, which makes the successor tie-break local.
std::optional<Route> find_route(const NetworkGraph& g, NodeIndex source, NodeIndex dest,
                                Msat amount_msat, const RoutingOptions& options) {
  if (source >= g.node_count() || dest >= g.node_count()) throw InvalidArgument("unknown node index");
  if (source == dest) throw InvalidArgument("source and destination must differ");
  if (amount_msat <= 0) throw InvalidArgument("payment amount must be positive");

  const std::size_t n = g.node_count();
  std::vector<Label> label(n);
  std::vector<char> settled(n, 0);
  using Entry = std::tuple<Msat, std::uint32_t, NodeIndex>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  label[dest].cost = 0;
  queue.emplace(0, 0, dest);

  while (!queue.empty()) {
    auto [cost, hops, v] = queue.top();
    queue.pop();
    if (settled[v]) continue;
    settled[v] = 1;
    if (v == source) break;
    for (ChannelIndex ch : g.incident(v)) {
      if (options.excluded.contains(ch)) continue;
      const Channel& c = g.channel(ch);
      if (c.capacity_msat < amount_msat) continue;
      const NodeIndex u = c.other(v);
      if (settled[u]) continue;
      const ChannelPolicy& policy = c.policy_from(u);
      if (!policy.enabled) continue;
      const Msat w = u == source ? 0 : fee(policy, amount_msat) + penalty(policy, options.cltv_penalty);
      const Label candidate{cost + w, hops + 1, v, ch};
      Label& cur = label[u];
      const bool better =
          candidate.cost < cur.cost ||
          (candidate.cost == cur.cost &&
           (candidate.hops < cur.hops ||
            (candidate.hops == cur.hops &&
             (g.node(v) < g.node(cur.next) || (v == cur.next && ch < cur.via)))));
      if (better) {
        cur = candidate;
        queue.emplace(cur.cost, cur.hops, u);
      }
    }
  }
  if (label[source].cost == kUnreached) return std::nullopt;

  Route route;
  route.search_cost = label[source].cost;
  for (NodeIndex u = source; u != dest; u = label[u].next)
    route.hops.push_back(RouteHop{label[u].via, u, label[u].next, 0, 0});

  // Settle backward: each intermediary charges its fee on what it forwards.
  Msat amount = amount_msat;
  for (std::size_t i = route.hops.size(); i-- > 0;) {
    RouteHop& hop = route.hops[i];
    hop.amount_msat = amount;
    if (i > 0) {
      hop.fee_msat = fee(g.channel(hop.channel).policy_from(hop.from), amount);
      amount += hop.fee_msat;
    }
  }
  route.total_sent_msat = amount;
  route.total_fee_msat = amount - amount_msat;
  return route;
}

std::optional<Route> find_route(const NetworkGraph& g, const NodeId& source, const NodeId& dest,
                                Msat amount_msat, const RoutingOptions& options) {
  return find_route(g, g.index_of(source), g.index_of(dest), amount_msat, options);
}

namespace {

PaymentOutcome settle(NetworkGraph& g, Route route) {
  PaymentOutcome out;
  for (std::size_t i = 0; i < route.hops.size(); ++i) {
    const RouteHop& hop = route.hops[i];
    if (g.channel(hop.channel).balance_of(hop.from) < hop.amount_msat) {
      out.failure = PaymentFailure{FailureKind::InsufficientBalance, i};
      out.route = std::move(route);
      return out;
    }
  }
  for (const RouteHop& hop : route.hops) g.transfer(hop.channel, hop.from, hop.amount_msat);
  for (std::size_t i = 1; i < route.hops.size(); ++i) out.intermediaries.push_back(route.hops[i].from);
  out.success = true;
  out.fee_paid_msat = route.total_fee_msat;
  out.route = std::move(route);
  return out;
}

}  // namespace

PaymentOutcome execute_payment(NetworkGraph& g, NodeIndex source, NodeIndex dest, Msat amount_msat,
                               const RoutingOptions& options) {
  RoutingOptions attempt_options = options;
  PaymentOutcome outcome;
  for (int attempt = 0; attempt <= std::max(0, options.retries); ++attempt) {
    auto route = find_route(g, source, dest, amount_msat, attempt_options);
    if (!route) {
      // A retry that runs out of paths still reports the last balance failure.
      if (attempt == 0) {
        outcome = PaymentOutcome{};
        outcome.failure = PaymentFailure{FailureKind::NoPath, 0};
      }
      return outcome;
    }
    outcome = settle(g, std::move(*route));
    if (outcome.success) return outcome;
    attempt_options.excluded.insert(outcome.route->hops[outcome.failure->hop].channel);
  }
  return outcome;
}

bool record_intermediaries(const PaymentOutcome& outcome, NodeIndex watched) {
  if (!outcome.success) return false;
  return std::find(outcome.intermediaries.begin(), outcome.intermediaries.end(), watched) !=
         outcome.intermediaries.end();
}

}  // namespace pcn
