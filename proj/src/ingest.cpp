#include "pcn/ingest.hpp"

#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "pcn/error.hpp"
#include "pcn/rng.hpp"

namespace pcn {

namespace {

using nlohmann::json;

const json& require(const json& obj, const char* field, const std::string& where) {
  auto it = obj.find(field);
  if (it == obj.end() || it->is_null())
    throw DataError("snapshot: missing required field '" + std::string(field) + "' in " + where);
  return *it;
}

// LND encodes 64-bit integers as JSON strings; accept both forms.
std::int64_t as_int(const json& v, const char* field, const std::string& where) {
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_number_unsigned()) return static_cast<std::int64_t>(v.get<std::uint64_t>());
  if (v.is_string()) {
    const auto& s = v.get_ref<const std::string&>();
    std::int64_t out = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec == std::errc() && ptr == s.data() + s.size()) return out;
  }
  throw DataError("snapshot: field '" + std::string(field) + "' in " + where + " is not an integer");
}

std::string as_string(const json& v, const char* field, const std::string& where) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_unsigned() || v.is_number_integer()) return v.dump();
  throw DataError("snapshot: field '" + std::string(field) + "' in " + where + " is not a string");
}

std::optional<SnapshotPolicy> parse_policy(const json& edge, const char* field, const std::string& where) {
  auto it = edge.find(field);
  if (it == edge.end() || it->is_null()) return std::nullopt;
  const std::string ctx = where + "." + field;
  if (!it->is_object()) throw DataError("snapshot: field '" + std::string(field) + "' in " + where + " is not an object");
  SnapshotPolicy p;
  p.fee_base_msat = as_int(require(*it, "fee_base_msat", ctx), "fee_base_msat", ctx);
  p.fee_rate_milli_msat = as_int(require(*it, "fee_rate_milli_msat", ctx), "fee_rate_milli_msat", ctx);
  if (auto t = it->find("time_lock_delta"); t != it->end() && !t->is_null())
    p.time_lock_delta = as_int(*t, "time_lock_delta", ctx);
  if (auto d = it->find("disabled"); d != it->end() && !d->is_null()) {
    if (!d->is_boolean()) throw DataError("snapshot: field 'disabled' in " + ctx + " is not a boolean");
    p.disabled = d->get<bool>();
  }
  return p;
}

ChannelPolicy to_policy(const std::optional<SnapshotPolicy>& p) {
  if (!p || p->disabled) return ChannelPolicy::disabled();
  return ChannelPolicy{p->fee_base_msat, p->fee_rate_milli_msat, p->time_lock_delta, true};
}

}  // namespace

SnapshotDocument parse_snapshot(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw DataError("snapshot: malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  if (!root.is_object()) throw DataError("snapshot: top-level value must be an object");
  SnapshotDocument doc;
  const json& nodes = require(root, "nodes", "document");
  const json& edges = require(root, "edges", "document");
  if (!nodes.is_array()) throw DataError("snapshot: field 'nodes' in document is not an array");
  if (!edges.is_array()) throw DataError("snapshot: field 'edges' in document is not an array");
  doc.nodes.reserve(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string where = "nodes[" + std::to_string(i) + "]";
    doc.nodes.push_back(as_string(require(nodes[i], "pub_key", where), "pub_key", where));
  }
  doc.edges.reserve(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const json& e = edges[i];
    const std::string where = "edges[" + std::to_string(i) + "]";
    if (!e.is_object()) throw DataError("snapshot: " + where + " is not an object");
    SnapshotEdge edge;
    edge.channel_id = as_string(require(e, "channel_id", where), "channel_id", where);
    edge.node1_pub = as_string(require(e, "node1_pub", where), "node1_pub", where);
    edge.node2_pub = as_string(require(e, "node2_pub", where), "node2_pub", where);
    edge.capacity_sat = as_int(require(e, "capacity", where), "capacity", where);
    edge.node1_policy = parse_policy(e, "node1_policy", where);
    edge.node2_policy = parse_policy(e, "node2_policy", where);
    doc.edges.push_back(std::move(edge));
  }
  return doc;
}

SnapshotDocument load_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("snapshot: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_snapshot(buf.str());
}

BalanceMode BalanceMode::parse(std::string_view text) {
  if (text == "equal") return {};
  constexpr std::string_view prefix = "random:";
  if (text.starts_with(prefix)) {
    const auto digits = text.substr(prefix.size());
    std::uint64_t seed = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), seed);
    if (ec == std::errc() && ptr == digits.data() + digits.size() && !digits.empty())
      return {Kind::UniformRandom, seed};
  }
  throw InvalidArgument("invalid balance mode '" + std::string(text) + "' (expected equal|random:<seed>)");
}

NetworkGraph to_network(const SnapshotDocument& doc, BalanceMode mode, IngestStats* stats) {
  IngestStats local;
  IngestStats& st = stats ? *stats : local;
  st = {};
  NetworkGraph g;
  for (const auto& key : doc.nodes) {
    if (key.empty()) {
      ++st.skipped_invalid;
      continue;
    }
    if (g.find(NodeId(key))) {
      ++st.duplicate_nodes;
      continue;
    }
    g.add_node(NodeId(key));
  }
  RngStream rng(mode.seed);
  for (const auto& e : doc.edges) {
    const auto a = g.find(NodeId(e.node1_pub));
    const auto b = g.find(NodeId(e.node2_pub));
    if (e.capacity_sat <= 0 || !a || !b || *a == *b) {
      ++st.skipped_invalid;
      continue;
    }
    const ChannelPolicy pa = to_policy(e.node1_policy);
    const ChannelPolicy pb = to_policy(e.node2_policy);
    if (!pa.enabled && !pb.enabled) {
      ++st.skipped_disabled;
      continue;
    }
    const Msat capacity = sat_to_msat(e.capacity_sat);
    BalanceSplit split = BalanceSplit::equal(capacity);
    if (mode.kind == BalanceMode::Kind::UniformRandom) {
      const auto share = static_cast<Msat>(rng.below(static_cast<std::uint64_t>(capacity) + 1));
      split = {share, capacity - share};
    }
    g.add_channel(*a, *b, capacity, split, pa, pb, e.channel_id);
  }
  return g;
}

NetworkGraph largest_component(const NetworkGraph& g) {
  const std::size_t n = g.node_count();
  if (n == 0) return g;
  // Union-find over channels.
  std::vector<NodeIndex> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](NodeIndex v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (const Channel& c : g.channels()) {
    const NodeIndex ra = root(c.node_a), rb = root(c.node_b);
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  }
  std::vector<std::size_t> size(n, 0);
  std::vector<NodeIndex> smallest(n, 0);
  std::vector<char> seen(n, 0);
  for (NodeIndex v = 0; v < n; ++v) {
    const NodeIndex r = root(v);
    if (!seen[r] || g.node(v) < g.node(smallest[r])) smallest[r] = v;
    seen[r] = 1;
    ++size[r];
  }
  NodeIndex best = root(0);
  for (NodeIndex v = 0; v < n; ++v) {
    if (root(v) != v) continue;
    if (size[v] > size[best] || (size[v] == size[best] && g.node(smallest[v]) < g.node(smallest[best])))
      best = v;
  }
  if (size[best] == n) return g;

  NetworkGraph out;
  for (NodeIndex v = 0; v < n; ++v)
    if (root(v) == best) out.add_node(g.node(v));
  for (const Channel& c : g.channels()) {
    if (root(c.node_a) != best) continue;
    out.add_channel(g.node(c.node_a), g.node(c.node_b), c.capacity_msat,
                    {c.balance_a_msat, c.balance_b_msat}, c.policy_a, c.policy_b, c.label);
  }
  return out;
}

std::string to_snapshot_json(const NetworkGraph& g) {
  json root;
  root["nodes"] = json::array();
  for (const auto& id : g.nodes()) root["nodes"].push_back({{"pub_key", id.str()}});
  root["edges"] = json::array();
  auto policy = [](const ChannelPolicy& p) -> json {
    if (!p.enabled && p == ChannelPolicy::disabled()) return nullptr;
    return {{"fee_base_msat", std::to_string(p.base_fee_msat)},
            {"fee_rate_milli_msat", std::to_string(p.prop_fee_millionths)},
            {"time_lock_delta", p.cltv_delta},
            {"disabled", !p.enabled}};
  };
  for (const Channel& c : g.channels()) {
    root["edges"].push_back({{"channel_id", c.label},
                             {"node1_pub", g.node(c.node_a).str()},
                             {"node2_pub", g.node(c.node_b).str()},
                             {"capacity", std::to_string(c.capacity_msat / kMsatPerSat)},
                             {"node1_policy", policy(c.policy_a)},
                             {"node2_policy", policy(c.policy_b)}});
  }
  return root.dump(1);
}

}  // namespace pcn
