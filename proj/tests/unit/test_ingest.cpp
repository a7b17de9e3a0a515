#include <doctest.h>

#include "../support.hpp"
#include "pcn/error.hpp"
#include "pcn/ingest.hpp"

using namespace pcn;

namespace {

const char* kTwoNodes = R"({
  "nodes": [{"pub_key": "aa"}, {"pub_key": "bb"}],
  "edges": [{"channel_id": "1", "node1_pub": "aa", "node2_pub": "bb", "capacity": "10000",
             "node1_policy": {"fee_base_msat": "1000", "fee_rate_milli_msat": "1", "time_lock_delta": 40, "disabled": false}}]
})";

std::string components(int a, int b) {
  std::string nodes, edges;
  auto node = [&](const std::string& id) { nodes += (nodes.empty() ? "" : ",") + std::string("{\"pub_key\":\"") + id + "\"}"; };
  auto edge = [&](const std::string& x, const std::string& y) {
    const auto policy = R"({"fee_base_msat":1000,"fee_rate_milli_msat":1})";
    edges += (edges.empty() ? "" : ",") + std::string("{\"channel_id\":\"") + x + y + "\",\"node1_pub\":\"" + x +
             "\",\"node2_pub\":\"" + y + "\",\"capacity\":1000,\"node1_policy\":" + policy + ",\"node2_policy\":" + policy + "}";
  };
  for (int i = 0; i < a; ++i) node("p" + std::to_string(i));
  for (int i = 0; i < b; ++i) node("q" + std::to_string(i));
  for (int i = 1; i < a; ++i) edge("p" + std::to_string(i - 1), "p" + std::to_string(i));
  for (int i = 1; i < b; ++i) edge("q" + std::to_string(i - 1), "q" + std::to_string(i));
  return "{\"nodes\":[" + nodes + "],\"edges\":[" + edges + "]}";
}

}  // namespace

TEST_CASE("minimal document") {
  const auto doc = parse_snapshot(kTwoNodes);
  CHECK(doc.nodes.size() == 2);
  REQUIRE(doc.edges.size() == 1);
  CHECK(doc.edges[0].capacity_sat == 10'000);
  CHECK_FALSE(doc.edges[0].node2_policy);
  const NetworkGraph g = to_network(doc);
  REQUIRE(g.channel_count() == 1);
  const Channel& c = g.channel(0);
  CHECK(c.balance_a_msat == 5'000'000);
  CHECK(c.balance_b_msat == 5'000'000);
  CHECK(c.policy_a.enabled);
  CHECK_FALSE(c.policy_b.enabled);
  const FeeGraph fg = build_fee_graph(g, 1000);
  CHECK(fg.weight(0, 1));
  CHECK_FALSE(fg.weight(1, 0));
}

TEST_CASE("parse errors") {
  const std::string text = kTwoNodes;
  try {
    parse_snapshot(text.substr(0, text.size() / 2));
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("byte") != std::string::npos);
  }
  try {
    parse_snapshot(R"({"nodes": [], "edges": [{"channel_id": "1", "node1_pub": "a", "node2_pub": "b"}]})");
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("'capacity'") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_snapshot(R"({"nodes": []})"), DataError);
  CHECK_THROWS_AS(load_snapshot("/nonexistent/snapshot.json"), DataError);
}

TEST_CASE("invalid and disabled channels are skipped") {
  const auto doc = parse_snapshot(R"({
    "nodes": [{"pub_key": "a"}, {"pub_key": "b"}, {"pub_key": "a"}],
    "edges": [
      {"channel_id": "1", "node1_pub": "a", "node2_pub": "zz", "capacity": 10},
      {"channel_id": "2", "node1_pub": "a", "node2_pub": "b", "capacity": 0},
      {"channel_id": "3", "node1_pub": "a", "node2_pub": "b", "capacity": 10},
      {"channel_id": "4", "node1_pub": "a", "node2_pub": "b", "capacity": 10,
       "node1_policy": {"fee_base_msat": 1, "fee_rate_milli_msat": 1, "disabled": true}},
      {"channel_id": "5", "node1_pub": "a", "node2_pub": "b", "capacity": 10,
       "node2_policy": {"fee_base_msat": 7, "fee_rate_milli_msat": 3, "time_lock_delta": 18}}
    ]})");
  IngestStats stats;
  const NetworkGraph g = to_network(doc, {}, &stats);
  CHECK(stats.skipped_invalid == 2);
  CHECK(stats.skipped_disabled == 2);
  CHECK(stats.duplicate_nodes == 1);
  REQUIRE(g.channel_count() == 1);
  CHECK(g.channel(0).label == "5");
  CHECK(g.channel(0).policy_b == ChannelPolicy{7, 3, 18, true});
}

TEST_CASE("balance modes") {
  CHECK(BalanceMode::parse("equal").kind == BalanceMode::Kind::Equal);
  const auto mode = BalanceMode::parse("random:42");
  CHECK(mode.seed == 42);
  CHECK_THROWS_AS(BalanceMode::parse("random:"), InvalidArgument);
  CHECK_THROWS_AS(BalanceMode::parse("half"), InvalidArgument);
  const auto doc = parse_snapshot(components(6, 0));
  const NetworkGraph a = to_network(doc, mode), b = to_network(doc, mode);
  CHECK(a == b);
  CHECK(a.check_consistency());
  CHECK(a != to_network(doc, BalanceMode::parse("random:43")));
}

TEST_CASE("largest component") {
  NetworkGraph g = to_network(parse_snapshot(components(5, 3)));
  NetworkGraph l = largest_component(g);
  CHECK(l.node_count() == 5);
  CHECK(l.channel_count() == 4);
  CHECK(largest_component(l) == l);
  l = largest_component(to_network(parse_snapshot(components(3, 5))));
  CHECK(l.find(NodeId("q0")));
  // equal sizes: the component holding "p0" wins over "q0"
  l = largest_component(to_network(parse_snapshot(components(4, 4))));
  CHECK(l.find(NodeId("p0")));
  CHECK(largest_component(NetworkGraph{}).node_count() == 0);
}

TEST_CASE("snapshot round trip") {
  std::mt19937_64 rng(6);
  testing_support::RandomGraphOptions o;
  o.n = 15;
  o.disabled_prob = 0.3;
  o.parallel_prob = 0.2;
  o.min_capacity = 2000;
  NetworkGraph g = testing_support::random_graph(rng, o);
  // snapshots carry whole satoshi; keep capacities representable
  NetworkGraph whole;
  for (const auto& id : g.nodes()) whole.add_node(id);
  for (const Channel& c : g.channels()) {
    if (!c.policy_a.enabled && !c.policy_b.enabled) continue;
    const Msat cap = (c.capacity_msat / 2000) * 2000;
    auto keep = [](const ChannelPolicy& p) { return p.enabled ? p : ChannelPolicy::disabled(); };
    whole.add_channel(c.node_a, c.node_b, cap, BalanceSplit::equal(cap), keep(c.policy_a), keep(c.policy_b), c.label);
  }
  const NetworkGraph back = to_network(parse_snapshot(to_snapshot_json(whole)));
  CHECK(back == whole);
}
