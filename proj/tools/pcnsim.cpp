// pcnsim command-line front end. Talks to the library only through pcn.h.
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <memory>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pcn/pcn.h"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitRuntime = 4;

struct Failure {
  int code;
  std::string message;
};

void check(pcn_status st) {
  if (st != PCN_OK) throw Failure{static_cast<int>(st), pcn_last_error()};
}

void usage_error(const std::string& message) { throw Failure{kExitUsage, message}; }

// "12", "0.5", "1.234" satoshi -> msat. At most three decimals.
int64_t sat_to_msat(const std::string& text, const char* flag) {
  const auto dot = text.find('.');
  const std::string whole = text.substr(0, dot);
  const std::string frac = dot == std::string::npos ? "" : text.substr(dot + 1);
  auto digits = [](const std::string& s) {
    return !s.empty() && s.find_first_not_of("0123456789") == std::string::npos;
  };
  if (!digits(whole) || (dot != std::string::npos && (!digits(frac) || frac.size() > 3)) || whole.size() > 15)
    usage_error(std::string("invalid satoshi amount '") + text + "' for " + flag);
  int64_t msat = std::stoll(whole) * 1000;
  if (!frac.empty()) msat += std::stoll((frac + "00").substr(0, 3));
  return msat;
}

std::string msat_as_sat(int64_t msat) {
  char buf[48];
  const char* sign = msat < 0 ? "-" : "";
  const int64_t m = msat < 0 ? -msat : msat;
  std::snprintf(buf, sizeof buf, "%s%" PRId64 ".%03" PRId64, sign, m / 1000, m % 1000);
  return buf;
}

struct Options {
  std::string snapshot;
  std::string synthetic;
  int64_t capacity_sat = 1'000'000;
  std::string balance_mode = "equal";
  bool no_lcc = false;
  std::string strategy;
  std::string k;
  std::string cap;
  std::string amount;
  uint64_t seed = 0;
  bool seed_set = false;
  std::optional<int> reps;
  std::string out;
  std::optional<int> retries;
  std::optional<double> cltv_penalty;
  std::string config;
  std::string source;
  std::string dest;
  std::optional<int> tx;
  std::optional<int> growth_nodes;
  std::optional<int> growth_interval;
  bool allow_mbi = false;
  bool topology = false;
  std::string strategies = "degree,k-center,k-median,betweenness";
  int runs = 3;
  std::string joining;
};

struct GraphHandle {
  pcn_graph* g = nullptr;
  ~GraphHandle() { pcn_graph_free(g); }
};

void load_graph(const Options& o, GraphHandle& h) {
  if (o.snapshot.empty() == o.synthetic.empty()) usage_error("exactly one of --snapshot or --synthetic is required");
  if (!o.snapshot.empty())
    check(pcn_graph_load_snapshot(o.snapshot.c_str(), o.balance_mode.c_str(), o.no_lcc ? 0 : 1, &h.g));
  else
    check(pcn_graph_synth(o.synthetic.c_str(), o.seed, o.capacity_sat, &h.g));
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw Failure{kExitRuntime, "cannot write '" + o.out + "'"};
  f << text;
}

void add_graph_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--snapshot", o.snapshot, "describegraph JSON snapshot");
  cmd->add_option("--synthetic", o.synthetic, "scale_free:N:M0 | path:N | star:N | cliques:A:B");
  cmd->add_option("--capacity", o.capacity_sat, "channel capacity of synthetic graphs (sat)");
  cmd->add_option("--balance-mode", o.balance_mode, "equal | random:<seed>");
  cmd->add_flag("--no-lcc", o.no_lcc, "keep every component of the snapshot");
  cmd->add_option_function<uint64_t>("--seed", [&](uint64_t s) { o.seed = s; o.seed_set = true; }, "random seed");
}

void add_routing_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--retries", o.retries, "pathfinding retries after a balance failure");
  cmd->add_option("--cltv-penalty", o.cltv_penalty, "msat added per unit of cltv delta");
}

int ingest_check(const Options& o) {
  if (o.snapshot.empty()) usage_error("--snapshot is required");
  GraphHandle full, lcc;
  check(pcn_graph_load_snapshot(o.snapshot.c_str(), o.balance_mode.c_str(), 0, &full.g));
  check(pcn_graph_load_snapshot(o.snapshot.c_str(), o.balance_mode.c_str(), 1, &lcc.g));
  pcn_graph_info a{}, b{};
  check(pcn_graph_get_info(full.g, &a));
  check(pcn_graph_get_info(lcc.g, &b));
  std::printf("nodes\t%zu\nchannels\t%zu\ncapacity_sat\t%s\nskipped_invalid\t%zu\nskipped_disabled\t%zu\n"
              "duplicate_nodes\t%zu\nlcc_nodes\t%zu\nlcc_channels\t%zu\n",
              a.nodes, a.channels, msat_as_sat(a.total_capacity_msat).c_str(), a.skipped_invalid,
              a.skipped_disabled, a.duplicate_nodes, b.nodes, b.channels);
  return 0;
}

int suggest(const Options& o) {
  if (o.strategy.empty()) usage_error("--strategy is required");
  int k = 1;
  if (!o.k.empty()) {
    try {
      std::size_t used = 0;
      k = std::stoi(o.k, &used);
      if (used != o.k.size()) throw std::invalid_argument(o.k);
    } catch (const std::exception&) {
      usage_error("suggest takes a single integer --k");
    }
  }
  GraphHandle h;
  load_graph(o, h);
  const int64_t cap = o.cap.empty() ? 1'000'000'000 : sat_to_msat(o.cap, "--cap");
  const int64_t hint = o.amount.empty() ? 100'000 : sat_to_msat(o.amount, "--amount");
  pcn_candidates* c = nullptr;
  check(pcn_suggest(h.g, o.strategy.c_str(), o.joining.empty() ? nullptr : o.joining.c_str(), k, cap, hint, o.seed,
                    &c));
  std::unique_ptr<pcn_candidates, decltype(&pcn_candidates_free)> guard(c, pcn_candidates_free);
  std::printf("rank\tnode\tobjective\n");
  for (size_t i = 0; i < pcn_candidates_count(c); ++i) {
    double value = 0;
    std::string objective = "-";
    if (pcn_candidates_objective(c, i, &value)) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.6f", value);
      objective = buf;
    }
    std::printf("%zu\t%s\t%s\n", i + 1, pcn_candidates_peer(c, i), objective.c_str());
  }
  return 0;
}

int route(const Options& o) {
  if (o.source.empty() || o.dest.empty()) usage_error("--source and --dest are required");
  if (o.amount.empty()) usage_error("--amount is required");
  GraphHandle h;
  load_graph(o, h);
  pcn_routing_options opts{o.cltv_penalty.value_or(0.0), o.retries.value_or(0)};
  pcn_route* r = nullptr;
  check(pcn_route_find(h.g, o.source.c_str(), o.dest.c_str(), sat_to_msat(o.amount, "--amount"), &opts, &r));
  std::unique_ptr<pcn_route, decltype(&pcn_route_free)> guard(r, pcn_route_free);
  if (!pcn_route_found(r)) {
    std::printf("NoPath\n");
    return 0;
  }
  std::printf("hop\tfrom\tto\tchannel\tamount_sat\tfee_sat\n");
  for (size_t i = 0; i < pcn_route_hop_count(r); ++i) {
    pcn_route_hop hop{};
    check(pcn_route_hop_at(r, i, &hop));
    std::printf("%zu\t%s\t%s\t%s\t%s\t%s\n", i + 1, hop.from, hop.to, hop.channel,
                msat_as_sat(hop.amount_msat).c_str(), msat_as_sat(hop.fee_msat).c_str());
  }
  std::printf("total\thops=%zu\tsent_sat=%s\tfee_sat=%s\n", pcn_route_hop_count(r),
              msat_as_sat(pcn_route_total_sent_msat(r)).c_str(), msat_as_sat(pcn_route_total_fee_msat(r)).c_str());
  return 0;
}

// Comma-separated satoshi list -> comma-separated satoshi with 3 decimals, validated.
std::string amount_list(const std::string& text) {
  std::string out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = text.find(',', start);
    const auto part = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!out.empty()) out += ',';
    out += msat_as_sat(sat_to_msat(part, "--amount"));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

int experiment(const char* kind, const Options& o) {
  pcn_experiment* e = nullptr;
  check(pcn_experiment_create(kind, &e));
  std::unique_ptr<pcn_experiment, decltype(&pcn_experiment_free)> guard(e, pcn_experiment_free);
  auto set = [&](const char* key, const std::string& value) { check(pcn_experiment_set(e, key, value.c_str())); };
  if (!o.config.empty()) check(pcn_experiment_load_config(e, o.config.c_str()));
  if (!o.strategy.empty()) set("strategy", o.strategy);
  if (!o.k.empty()) set(std::string(kind) == "growth" ? "growth_k" : "k_values", o.k);
  if (!o.cap.empty()) set("cap_sat", msat_as_sat(sat_to_msat(o.cap, "--cap")));
  if (!o.amount.empty()) set(std::string(kind) == "growth" ? "growth_amount_sat" : "amounts_sat", amount_list(o.amount));
  if (o.seed_set) set("base_seed", std::to_string(o.seed));
  if (o.reps) set("repetitions", std::to_string(*o.reps));
  if (o.retries) set("retries", std::to_string(*o.retries));
  if (o.cltv_penalty) set("cltv_penalty", std::to_string(*o.cltv_penalty));
  if (o.tx) set(std::string(kind) == "baseline" ? "baseline_tx" : "tx_per_batch", std::to_string(*o.tx));
  if (o.growth_nodes) set("growth_nodes", std::to_string(*o.growth_nodes));
  if (o.growth_interval) set("growth_interval", std::to_string(*o.growth_interval));
  if (o.allow_mbi) set("allow_mbi", "true");
  if (o.topology) set("topology", "true");
  GraphHandle h;
  load_graph(o, h);
  char* csv = nullptr;
  check(pcn_experiment_run(e, h.g, &csv));
  std::unique_ptr<char, decltype(&pcn_string_free)> text(csv, pcn_string_free);
  emit(o, csv);
  return 0;
}

int metrics(const Options& o) {
  GraphHandle h;
  load_graph(o, h);
  const int64_t amount = o.amount.empty() ? 100'000 : sat_to_msat(o.amount, "--amount");
  pcn_graph_info info{};
  pcn_topology t{};
  check(pcn_graph_get_info(h.g, &info));
  check(pcn_graph_metrics(h.g, amount, &t));
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "nodes,channels,degree_gini,betweenness_gini,diameter_hops,central_point_dominance\n"
                "%zu,%zu,%.9f,%.9f,%" PRId64 ",%.9f\n",
                info.nodes, info.channels, t.degree_gini, t.betweenness_gini, t.diameter_hops,
                t.central_point_dominance);
  emit(o, buf);
  return 0;
}

int bench(const Options& o) {
  GraphHandle h;
  load_graph(o, h);
  const int64_t cap = o.cap.empty() ? 1'000'000'000 : sat_to_msat(o.cap, "--cap");
  const int64_t hint = o.amount.empty() ? 100'000 : sat_to_msat(o.amount, "--amount");
  char* csv = nullptr;
  check(pcn_bench(h.g, o.strategies.c_str(), o.k.empty() ? "1" : o.k.c_str(), cap, hint, o.seed, o.runs, &csv));
  std::unique_ptr<char, decltype(&pcn_string_free)> text(csv, pcn_string_free);
  emit(o, csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Payment channel network attachment simulator"};
  app.require_subcommand(1, 1);
  Options o;

  auto* ingest = app.add_subcommand("ingest-check", "load a snapshot and report what was kept");
  ingest->add_option("--snapshot", o.snapshot, "describegraph JSON snapshot")->required();
  ingest->add_option("--balance-mode", o.balance_mode, "equal | random:<seed>");

  auto* sug = app.add_subcommand("suggest", "rank attachment candidates for a joining node");
  add_graph_flags(sug, o);
  sug->add_option("--strategy", o.strategy, "random|degree|betweenness|k-center|k-median|mbi");
  sug->add_option("--k", o.k, "number of channels");
  sug->add_option("--cap", o.cap, "capacity per new channel (sat)");
  sug->add_option("--amount", o.amount, "typical payment amount (sat)");
  sug->add_option("--joining", o.joining, "NodeId of the joining node");

  auto* rt = app.add_subcommand("route", "cheapest route between two nodes");
  add_graph_flags(rt, o);
  add_routing_flags(rt, o);
  rt->add_option("--source", o.source, "sender NodeId");
  rt->add_option("--dest", o.dest, "receiver NodeId");
  rt->add_option("--amount", o.amount, "amount (sat)");

  std::vector<CLI::App*> experiments;
  for (const char* name : {"baseline", "join-eval", "growth"}) {
    auto* cmd = app.add_subcommand(name, std::string("run the ") + name + " experiment");
    add_graph_flags(cmd, o);
    add_routing_flags(cmd, o);
    cmd->add_option("--config", o.config, "key=value experiment file");
    cmd->add_option("--amount", o.amount, "amount(s) in sat, comma separated");
    cmd->add_option("--reps", o.reps, "repetitions");
    cmd->add_option("--tx", o.tx, "transactions per batch");
    cmd->add_option("--out", o.out, "output CSV (default stdout)");
    cmd->add_flag("--topology", o.topology, "add topology columns");
    if (std::string(name) != "baseline") {
      cmd->add_option("--strategy", o.strategy, "attachment strategy");
      cmd->add_option("--k", o.k, "channels per joiner: INT or RANGE");
      cmd->add_option("--cap", o.cap, "capacity per new channel (sat)");
    }
    if (std::string(name) == "growth") {
      cmd->add_option("--growth-nodes", o.growth_nodes, "nodes to add");
      cmd->add_option("--growth-interval", o.growth_interval, "record every N joins");
      cmd->add_flag("--allow-mbi", o.allow_mbi, "permit mbi on small graphs");
    }
    experiments.push_back(cmd);
  }

  auto* met = app.add_subcommand("metrics", "topology metrics of a graph");
  add_graph_flags(met, o);
  met->add_option("--amount", o.amount, "amount for the fee graph (sat)");
  met->add_option("--out", o.out, "output CSV (default stdout)");

  auto* bn = app.add_subcommand("bench", "time strategies per k");
  add_graph_flags(bn, o);
  bn->add_option("--strategies", o.strategies, "comma separated strategies");
  bn->add_option("--k", o.k, "INT or RANGE");
  bn->add_option("--cap", o.cap, "capacity per new channel (sat)");
  bn->add_option("--amount", o.amount, "amount hint (sat)");
  bn->add_option("--runs", o.runs, "timed runs per cell");
  bn->add_option("--out", o.out, "output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (ingest->parsed()) return ingest_check(o);
    if (sug->parsed()) return suggest(o);
    if (rt->parsed()) return route(o);
    if (met->parsed()) return metrics(o);
    if (bn->parsed()) return bench(o);
    for (auto* cmd : experiments)
      if (cmd->parsed()) return experiment(cmd->get_name().c_str(), o);
  } catch (const Failure& f) {
    std::fprintf(stderr, "pcnsim: %s\n", f.message.c_str());
    return f.code == kExitData ? kExitData : f.code == kExitUsage ? kExitUsage : kExitRuntime;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "pcnsim: %s\n", e.what());
    return kExitRuntime;
  }
  return kExitUsage;
}
