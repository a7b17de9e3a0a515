#include "pcn/pcn.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <new>
#include <sstream>
#include <string>

#include "pcn/error.hpp"
#include "pcn/ingest.hpp"
#include "pcn/metrics.hpp"
#include "pcn/simulator.hpp"

struct pcn_graph {
  pcn::NetworkGraph graph;
  pcn::IngestStats stats;
};

struct pcn_candidates {
  std::vector<std::string> peers;
  std::vector<double> objective;
};

struct pcn_route {
  bool found = false;
  std::vector<std::string> channel, from, to;
  std::vector<pcn::RouteHop> hops;
  pcn::Msat total_fee = 0;
  pcn::Msat total_sent = 0;
};

struct pcn_experiment {
  pcn::ExperimentSpec spec;
};

namespace {

thread_local std::string last_error;

template <typename F>
pcn_status guarded(F&& fn) {
  try {
    fn();
    last_error.clear();
    return PCN_OK;
  } catch (const pcn::InvalidArgument& e) {
    last_error = e.what();
    return PCN_ERR_INVALID_ARGUMENT;
  } catch (const pcn::DataError& e) {
    last_error = e.what();
    return PCN_ERR_INPUT_DATA;
  } catch (const std::exception& e) {
    last_error = e.what();
    return PCN_ERR_RUNTIME;
  } catch (...) {
    last_error = "unknown error";
    return PCN_ERR_RUNTIME;
  }
}

void require(const void* p, const char* what) {
  if (!p) throw pcn::InvalidArgument(std::string(what) + " must not be NULL");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

pcn::NodeIndex lookup(const pcn::NetworkGraph& g, const char* id) {
  require(id, "node id");
  const auto v = g.find(pcn::NodeId(id));
  if (!v) throw pcn::InvalidArgument("unknown node '" + std::string(id) + "'");
  return *v;
}

pcn_graph* make_graph(const pcn::SnapshotDocument& doc, const char* balance_mode, int lcc) {
  auto mode = pcn::BalanceMode::parse(balance_mode ? balance_mode : "equal");
  auto out = std::make_unique<pcn_graph>();
  out->graph = pcn::to_network(doc, mode, &out->stats);
  if (lcc) out->graph = pcn::largest_component(out->graph);
  return out.release();
}

}  // namespace

extern "C" {

const char* pcn_last_error(void) { return last_error.c_str(); }

void pcn_string_free(char* s) { std::free(s); }

pcn_status pcn_graph_load_snapshot(const char* path, const char* balance_mode, int largest_component_only,
                                   pcn_graph** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = make_graph(pcn::load_snapshot(path), balance_mode, largest_component_only);
  });
}

pcn_status pcn_graph_parse_snapshot(const char* json, size_t len, const char* balance_mode,
                                    int largest_component_only, pcn_graph** out) {
  return guarded([&] {
    require(json, "json");
    require(out, "out");
    *out = make_graph(pcn::parse_snapshot({json, len}), balance_mode, largest_component_only);
  });
}

pcn_status pcn_graph_synth(const char* kind, uint64_t seed, int64_t capacity_sat, pcn_graph** out) {
  return guarded([&] {
    require(kind, "kind");
    require(out, "out");
    auto spec = pcn::SynthSpec::parse(kind);
    if (capacity_sat <= 0) throw pcn::InvalidArgument("capacity must be positive");
    spec.capacity_msat = pcn::sat_to_msat(capacity_sat);
    auto g = std::make_unique<pcn_graph>();
    g->graph = pcn::synth_graph(spec, seed);
    *out = g.release();
  });
}

void pcn_graph_free(pcn_graph* g) { delete g; }

pcn_status pcn_graph_get_info(const pcn_graph* g, pcn_graph_info* out) {
  return guarded([&] {
    require(g, "graph");
    require(out, "out");
    *out = {g->graph.node_count(),         g->graph.channel_count(),     g->graph.total_capacity(),
            g->stats.skipped_invalid,      g->stats.skipped_disabled,    g->stats.duplicate_nodes};
  });
}

pcn_status pcn_graph_to_json(const pcn_graph* g, char** out) {
  return guarded([&] {
    require(g, "graph");
    require(out, "out");
    *out = dup_string(pcn::to_snapshot_json(g->graph));
  });
}

pcn_status pcn_graph_metrics(const pcn_graph* g, int64_t amount_msat, pcn_topology* out) {
  return guarded([&] {
    require(g, "graph");
    require(out, "out");
    const auto m = pcn::topology_metrics(g->graph, amount_msat);
    *out = {m.degree_gini, m.betweenness_gini, m.diameter_hops, m.central_point_dominance};
  });
}

pcn_status pcn_suggest(const pcn_graph* g, const char* strategy, const char* joining, int k, int64_t cap_msat,
                       int64_t amount_hint_msat, uint64_t seed, pcn_candidates** out) {
  return guarded([&] {
    require(g, "graph");
    require(strategy, "strategy");
    require(out, "out");
    const auto kind = pcn::parse_strategy(strategy);
    pcn::NodeId id(joining ? joining : "synth-joiner");
    if (!joining)
      for (int i = 2; g->graph.find(id); ++i) id = pcn::NodeId("synth-joiner-" + std::to_string(i));
    pcn::AttachmentRequest req{&g->graph, id, k, cap_msat, amount_hint_msat, seed};
    const auto picks = pcn::select_candidates(kind, req);
    auto c = std::make_unique<pcn_candidates>();
    for (const auto& p : picks.peers) c->peers.push_back(p.str());
    c->objective = picks.per_step_objective;
    *out = c.release();
  });
}

size_t pcn_candidates_count(const pcn_candidates* c) { return c ? c->peers.size() : 0; }

const char* pcn_candidates_peer(const pcn_candidates* c, size_t i) {
  return c && i < c->peers.size() ? c->peers[i].c_str() : nullptr;
}

int pcn_candidates_objective(const pcn_candidates* c, size_t i, double* value) {
  if (!c || i >= c->objective.size()) return 0;
  if (value) *value = c->objective[i];
  return 1;
}

void pcn_candidates_free(pcn_candidates* c) { delete c; }

pcn_status pcn_route_find(const pcn_graph* g, const char* source, const char* dest, int64_t amount_msat,
                          const pcn_routing_options* options, pcn_route** out) {
  return guarded([&] {
    require(g, "graph");
    require(out, "out");
    const auto s = lookup(g->graph, source);
    const auto d = lookup(g->graph, dest);
    pcn::RoutingOptions opts;
    if (options) {
      opts.cltv_penalty = options->cltv_penalty;
      opts.retries = options->retries;
    }
    auto r = std::make_unique<pcn_route>();
    if (auto route = pcn::find_route(g->graph, s, d, amount_msat, opts)) {
      r->found = true;
      r->hops = route->hops;
      r->total_fee = route->total_fee_msat;
      r->total_sent = route->total_sent_msat;
      for (const auto& h : route->hops) {
        r->channel.push_back(g->graph.channel(h.channel).label);
        r->from.push_back(g->graph.node(h.from).str());
        r->to.push_back(g->graph.node(h.to).str());
      }
    }
    *out = r.release();
  });
}

int pcn_route_found(const pcn_route* r) { return r && r->found ? 1 : 0; }

size_t pcn_route_hop_count(const pcn_route* r) { return r ? r->hops.size() : 0; }

pcn_status pcn_route_hop_at(const pcn_route* r, size_t i, pcn_route_hop* out) {
  return guarded([&] {
    require(r, "route");
    require(out, "out");
    if (i >= r->hops.size()) throw pcn::InvalidArgument("hop index out of range");
    *out = {r->channel[i].c_str(), r->from[i].c_str(), r->to[i].c_str(), r->hops[i].amount_msat,
            r->hops[i].fee_msat};
  });
}

int64_t pcn_route_total_fee_msat(const pcn_route* r) { return r ? r->total_fee : 0; }

int64_t pcn_route_total_sent_msat(const pcn_route* r) { return r ? r->total_sent : 0; }

void pcn_route_free(pcn_route* r) { delete r; }

pcn_status pcn_experiment_create(const char* kind, pcn_experiment** out) {
  return guarded([&] {
    require(kind, "kind");
    require(out, "out");
    auto e = std::make_unique<pcn_experiment>();
    e->spec.kind = pcn::parse_experiment_kind(kind);
    *out = e.release();
  });
}

pcn_status pcn_experiment_set(pcn_experiment* e, const char* key, const char* value) {
  return guarded([&] {
    require(e, "experiment");
    require(key, "key");
    require(value, "value");
    e->spec.set(key, value);
  });
}

pcn_status pcn_experiment_load_config(pcn_experiment* e, const char* path) {
  return guarded([&] {
    require(e, "experiment");
    require(path, "path");
    std::ifstream in(path);
    if (!in) throw pcn::InvalidArgument("cannot open config '" + std::string(path) + "'");
    std::ostringstream text;
    text << in.rdbuf();
    e->spec = pcn::parse_experiment_config(text.str(), e->spec);
  });
}

pcn_status pcn_experiment_run(const pcn_experiment* e, const pcn_graph* g, char** csv) {
  return guarded([&] {
    require(e, "experiment");
    require(g, "graph");
    require(csv, "csv");
    const auto rows = pcn::run_experiment(e->spec, g->graph);
    *csv = dup_string(pcn::to_csv(rows));
  });
}

void pcn_experiment_free(pcn_experiment* e) { delete e; }

pcn_status pcn_bench(const pcn_graph* g, const char* strategies, const char* k_values, int64_t cap_msat,
                     int64_t amount_hint_msat, uint64_t seed, int runs, char** csv) {
  return guarded([&] {
    require(g, "graph");
    require(strategies, "strategies");
    require(k_values, "k_values");
    require(csv, "csv");
    std::vector<pcn::StrategyKind> kinds;
    std::string_view rest(strategies);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const auto name = rest.substr(0, comma);
      if (!name.empty()) kinds.push_back(pcn::parse_strategy(name));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    const auto ks = pcn::parse_int_list(k_values);
    const auto result = pcn::run_bench(g->graph, kinds, ks, cap_msat, amount_hint_msat, seed, runs);
    *csv = dup_string(pcn::bench_csv(result));
  });
}

}  // extern "C"
