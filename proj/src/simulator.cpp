#include "pcn/simulator.hpp"

#include <algorithm>
#include <chrono>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <tuple>

#include "pcn/error.hpp"
#include "pcn/parallel.hpp"
#include "pcn/rng.hpp"

namespace pcn {

namespace {

// Stream ids for mix_seed within one repetition.
constexpr std::uint64_t kStrategyStream = 1;
constexpr std::uint64_t kBatchAStream = 2;
constexpr std::uint64_t kBatchBStream = 3;
constexpr std::uint64_t kIntervalStream = 1000;

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(std::string_view text, std::string_view what) {
  text = trim(text);
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw InvalidArgument("invalid value '" + std::string(text) + "' for " + std::string(what));
  return value;
}

double parse_real(std::string_view text, std::string_view what) {
  const std::string s(trim(text));
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v))
    throw InvalidArgument("invalid value '" + s + "' for " + std::string(what));
  return v;
}

bool parse_bool(std::string_view text, std::string_view what) {
  text = trim(text);
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw InvalidArgument("invalid boolean '" + std::string(text) + "' for " + std::string(what));
}

// Satoshi with up to three decimals, converted exactly to msat.
Msat parse_sat(std::string_view text, std::string_view what) {
  text = trim(text);
  const auto dot = text.find('.');
  const auto whole = parse_number<std::int64_t>(text.substr(0, dot), what);
  Msat frac = 0;
  if (dot != std::string_view::npos) {
    auto digits = text.substr(dot + 1);
    if (digits.empty() || digits.size() > 3 || whole < 0)
      throw InvalidArgument("invalid satoshi amount '" + std::string(text) + "' for " + std::string(what));
    frac = parse_number<std::int64_t>(digits, what);
    for (std::size_t i = digits.size(); i < 3; ++i) frac *= 10;
  }
  return whole * kMsatPerSat + frac;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

ExperimentKind parse_experiment_kind(std::string_view name) {
  if (name == "join-eval" || name == "join_eval") return ExperimentKind::JoinEval;
  if (name == "growth") return ExperimentKind::Growth;
  if (name == "baseline") return ExperimentKind::Baseline;
  throw InvalidArgument("unknown experiment kind '" + std::string(name) + "' (expected join-eval|growth|baseline)");
}

std::string_view experiment_kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::JoinEval: return "join-eval";
    case ExperimentKind::Growth: return "growth";
    case ExperimentKind::Baseline: return "baseline";
  }
  return "?";
}

std::vector<int> parse_int_list(std::string_view text) {
  text = trim(text);
  std::vector<int> out;
  auto range = [&](std::string_view sep) -> bool {
    const auto pos = text.find(sep);
    if (pos == std::string_view::npos || pos == 0) return false;
    const int lo = parse_number<int>(text.substr(0, pos), "range");
    const int hi = parse_number<int>(text.substr(pos + sep.size()), "range");
    if (hi < lo) throw InvalidArgument("empty range '" + std::string(text) + "'");
    for (int v = lo; v <= hi; ++v) out.push_back(v);
    return true;
  };
  if (range("..") || range("-")) return out;
  for (auto part : split(text, ',')) out.push_back(parse_number<int>(part, "integer list"));
  return out;
}

void ExperimentSpec::set(std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  if (key == "kind") kind = parse_experiment_kind(value);
  else if (key == "strategy") strategy = parse_strategy(value);
  else if (key == "k_values" || key == "k") k_values = parse_int_list(value);
  else if (key == "amounts_sat" || key == "amount") {
    amounts_msat.clear();
    for (auto part : split(value, ',')) amounts_msat.push_back(parse_sat(part, key));
  }
  else if (key == "tx_per_batch") tx_per_batch = parse_number<int>(value, key);
  else if (key == "baseline_tx") baseline_tx = parse_number<int>(value, key);
  else if (key == "repetitions" || key == "reps") repetitions = parse_number<int>(value, key);
  else if (key == "base_seed" || key == "seed") base_seed = parse_number<std::uint64_t>(value, key);
  else if (key == "cap_sat" || key == "cap") cap_msat = parse_sat(value, key);
  else if (key == "growth_nodes") growth_nodes = parse_number<int>(value, key);
  else if (key == "growth_interval") growth_interval = parse_number<int>(value, key);
  else if (key == "growth_k") growth_k = parse_number<int>(value, key);
  else if (key == "growth_amount_sat") growth_amount_msat = parse_sat(value, key);
  else if (key == "allow_mbi") allow_mbi = parse_bool(value, key);
  else if (key == "topology") topology = parse_bool(value, key);
  else if (key == "max_nodes") max_nodes = parse_number<std::size_t>(value, key);
  else if (key == "mbi_max_nodes") mbi_max_nodes = parse_number<std::size_t>(value, key);
  else if (key == "retries") routing.retries = parse_number<int>(value, key);
  else if (key == "cltv_penalty") routing.cltv_penalty = parse_real(value, key);
  else throw InvalidArgument("unknown experiment key '" + std::string(key) + "'");
}

void ExperimentSpec::validate() const {
  if (k_values.empty()) throw InvalidArgument("k_values must not be empty");
  for (int k : k_values)
    if (k < 1) throw InvalidArgument("k values must be >= 1");
  if (amounts_msat.empty()) throw InvalidArgument("amounts must not be empty");
  for (Msat a : amounts_msat)
    if (a <= 0) throw InvalidArgument("amounts must be positive");
  if (tx_per_batch < 1 || baseline_tx < 1 || repetitions < 1)
    throw InvalidArgument("transaction counts and repetitions must be >= 1");
  if (cap_msat < 0 || cap_msat % 2 != 0) throw InvalidArgument("cap must be non-negative and even in msat");
  if (growth_nodes < 0) throw InvalidArgument("growth_nodes must be >= 0");
  if (growth_interval < 1 || growth_k < 1) throw InvalidArgument("growth_interval and growth_k must be >= 1");
  if (growth_amount_msat <= 0) throw InvalidArgument("growth amount must be positive");
  if (routing.retries < 0) throw InvalidArgument("retries must be >= 0");
  if (routing.cltv_penalty < 0) throw InvalidArgument("cltv_penalty must be >= 0");
}

ExperimentSpec parse_experiment_config(std::string_view text, ExperimentSpec base) {
  std::size_t line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw InvalidArgument("config line " + std::to_string(line_no) + ": expected key=value");
    base.set(line.substr(0, eq), line.substr(eq + 1));
  }
  return base;
}

std::vector<PaymentOutcome> run_batch(NetworkGraph& g, int count, Msat amount_msat, std::uint64_t seed,
                                      std::optional<NodeIndex> fixed_source, const RoutingOptions& routing) {
  const std::size_t n = g.node_count();
  if (n < 2) throw InvalidArgument("payment batches need at least two nodes");
  RngStream rng(seed);
  std::vector<PaymentOutcome> outcomes;
  outcomes.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    NodeIndex src, dst;
    if (fixed_source) {
      src = *fixed_source;
      dst = static_cast<NodeIndex>(rng.below(n - 1));
      if (dst >= src) ++dst;
    } else {
      src = static_cast<NodeIndex>(rng.below(n));
      dst = static_cast<NodeIndex>(rng.below(n - 1));
      if (dst >= src) ++dst;
    }
    outcomes.push_back(execute_payment(g, src, dst, amount_msat, routing));
  }
  return outcomes;
}

namespace {

NodeId fresh_id(const NetworkGraph& g, std::string base) {
  NodeId id(base);
  for (int i = 2; g.find(id); ++i) id = NodeId(base + "-" + std::to_string(i));
  return id;
}

void apply_topology(MetricRecord& r, const NetworkGraph& g, Msat amount_msat) {
  const TopologyMetrics m = topology_metrics(g, amount_msat);
  r.degree_gini = m.degree_gini;
  r.betweenness_gini = m.betweenness_gini;
  r.diameter_hops = static_cast<double>(m.diameter_hops);
  r.central_point_dominance = m.central_point_dominance;
}

// Sorts detail rows by (k, amount, nodes_added, seed) and appends one mean row
// after each group.
std::vector<MetricRecord> with_means(std::vector<MetricRecord> detail) {
  auto r_key = [](const MetricRecord& r) { return std::make_tuple(r.k, r.amount_sat, r.nodes_added); };
  std::stable_sort(detail.begin(), detail.end(), [&](const MetricRecord& x, const MetricRecord& y) {
    return std::make_tuple(r_key(x), x.seed) < std::make_tuple(r_key(y), y.seed);
  });
  std::vector<MetricRecord> out;
  std::size_t start = 0;
  for (std::size_t i = 1; i <= detail.size(); ++i) {
    if (i < detail.size() && r_key(detail[i]) == r_key(detail[start])) continue;
    const std::span<const MetricRecord> group(detail.data() + start, i - start);
    out.insert(out.end(), group.begin(), group.end());
    out.push_back(mean_record(group));
    start = i;
  }
  return out;
}

}  // namespace

std::vector<MetricRecord> run_join_eval(const ExperimentSpec& spec, const NetworkGraph& graph) {
  spec.validate();
  if (graph.node_count() < 2) throw InvalidArgument("join evaluation needs a graph with at least two nodes");
  if (spec.strategy == StrategyKind::Mbi && graph.node_count() > spec.mbi_max_nodes)
    throw InvalidArgument("mbi limited to " + std::to_string(spec.mbi_max_nodes) + " nodes (mbi_max_nodes)");
  const NodeId joiner_id = fresh_id(graph, "synth-joiner");
  const auto reps = static_cast<std::size_t>(spec.repetitions);
  std::vector<std::vector<MetricRecord>> per_rep(reps);

  parallel_chunks(reps, [&](std::size_t r) {
    const std::uint64_t seed = spec.base_seed + r;
    for (int k : spec.k_values) {
      for (Msat amount : spec.amounts_msat) {
        NetworkGraph g = graph;
        const NodeIndex joiner = g.add_node(joiner_id);
        const Msat cap = spec.cap_msat > 0 ? spec.cap_msat : 10 * amount * spec.tx_per_batch;
        AttachmentRequest req{&g, joiner_id, k, cap, amount, mix_seed(seed, kStrategyStream)};
        CandidateSet picks;
        try {
          picks = select_candidates(spec.strategy, req);
        } catch (const InvalidArgument& e) {
          throw InvalidArgument(std::string(e.what()) + " (k=" + std::to_string(k) +
                                ", seed=" + std::to_string(seed) + ")");
        }
        for (const NodeId& peer : picks.peers) attach(g, joiner, g.index_of(peer), cap);

        const auto batch_a = run_batch(g, spec.tx_per_batch, amount, mix_seed(seed, kBatchAStream), joiner,
                                       spec.routing);
        const auto batch_b = run_batch(g, spec.tx_per_batch, amount, mix_seed(seed, kBatchBStream),
                                       std::nullopt, spec.routing);
        const BatchStats a = batch_stats(batch_a, amount);
        const BatchStats b = batch_stats(batch_b, amount, joiner);

        MetricRecord rec;
        rec.label = std::string(strategy_name(spec.strategy));
        rec.nodes_added = 1;
        rec.success_rate_pct = a.success_rate_pct;
        rec.mean_fee_pct = a.mean_fee_pct;
        rec.routed_share_pct = b.routed_share_pct;
        rec.seed = static_cast<std::int64_t>(seed);
        rec.k = k;
        rec.amount_sat = static_cast<double>(amount) / kMsatPerSat;
        if (spec.topology) apply_topology(rec, g, amount);
        per_rep[r].push_back(std::move(rec));
      }
    }
  });

  std::vector<MetricRecord> detail;
  for (auto& rows : per_rep) detail.insert(detail.end(), rows.begin(), rows.end());
  return with_means(std::move(detail));
}

std::vector<MetricRecord> run_baseline(const ExperimentSpec& spec, const NetworkGraph& graph) {
  spec.validate();
  if (graph.node_count() < 2) throw InvalidArgument("baseline needs a graph with at least two nodes");
  std::vector<MetricRecord> out(spec.amounts_msat.size());
  parallel_chunks(out.size(), [&](std::size_t i) {
    const Msat amount = spec.amounts_msat[i];
    NetworkGraph g = graph;
    const auto outcomes = run_batch(g, spec.baseline_tx, amount, mix_seed(spec.base_seed, kBatchBStream),
                                    std::nullopt, spec.routing);
    const BatchStats stats = batch_stats(outcomes, amount);
    MetricRecord& rec = out[i];
    rec.label = "baseline";
    rec.success_rate_pct = stats.success_rate_pct;
    rec.mean_fee_pct = stats.mean_fee_pct;
    rec.seed = static_cast<std::int64_t>(spec.base_seed);
    rec.amount_sat = static_cast<double>(amount) / kMsatPerSat;
    if (spec.topology) apply_topology(rec, graph, amount);
  });
  return out;
}

std::vector<MetricRecord> run_growth(const ExperimentSpec& spec, const NetworkGraph& graph) {
  spec.validate();
  if (spec.strategy == StrategyKind::Mbi) {
    if (!spec.allow_mbi) throw InvalidArgument("mbi is excluded from growth runs unless allow_mbi=true");
    if (graph.node_count() + static_cast<std::size_t>(spec.growth_nodes) > spec.mbi_max_nodes)
      throw InvalidArgument("mbi growth limited to " + std::to_string(spec.mbi_max_nodes) +
                            " total nodes (mbi_max_nodes)");
  }
  if (graph.node_count() + static_cast<std::size_t>(spec.growth_nodes) > spec.max_nodes)
    throw InvalidArgument("growth would exceed max_nodes=" + std::to_string(spec.max_nodes));
  if (graph.node_count() < 2) throw InvalidArgument("growth needs a graph with at least two nodes");
  if (static_cast<std::size_t>(spec.growth_k) > graph.node_count() - 1)
    throw InvalidArgument("growth_k exceeds the limit n-1=" + std::to_string(graph.node_count() - 1));
  const Msat cap = spec.cap_msat > 0 ? spec.cap_msat : sat_to_msat(1'000'000);
  const auto reps = static_cast<std::size_t>(spec.repetitions);
  std::vector<std::vector<MetricRecord>> per_rep(reps);

  parallel_chunks(reps, [&](std::size_t r) {
    const std::uint64_t seed = spec.base_seed + r;
    NetworkGraph g = graph;
    std::int64_t interval = 0;
    auto record = [&](int added) {
      MetricRecord rec;
      rec.label = std::string(strategy_name(spec.strategy));
      rec.nodes_added = added;
      apply_topology(rec, g, spec.growth_amount_msat);
      NetworkGraph scratch = g;
      const auto outcomes = run_batch(scratch, spec.tx_per_batch, spec.growth_amount_msat,
                                      mix_seed(seed, kIntervalStream + static_cast<std::uint64_t>(interval++)),
                                      std::nullopt, spec.routing);
      const BatchStats stats = batch_stats(outcomes, spec.growth_amount_msat);
      rec.success_rate_pct = stats.success_rate_pct;
      rec.mean_fee_pct = stats.mean_fee_pct;
      rec.seed = static_cast<std::int64_t>(seed);
      rec.k = spec.growth_k;
      rec.amount_sat = static_cast<double>(spec.growth_amount_msat) / kMsatPerSat;
      per_rep[r].push_back(std::move(rec));
    };
    record(0);
    for (int i = 1; i <= spec.growth_nodes; ++i) {
      const NodeId id = fresh_id(g, "synth-" + std::to_string(i));
      AttachmentRequest req{&g, id, spec.growth_k, cap, spec.growth_amount_msat,
                            mix_seed(seed, kStrategyStream + static_cast<std::uint64_t>(i) * 7919)};
      const CandidateSet picks = select_candidates(spec.strategy, req);
      const NodeIndex joiner = g.add_node(id);
      for (const NodeId& peer : picks.peers) attach(g, joiner, g.index_of(peer), cap);
      if (i % spec.growth_interval == 0 || i == spec.growth_nodes) record(i);
    }
  });

  std::vector<MetricRecord> detail;
  for (auto& rows : per_rep) detail.insert(detail.end(), rows.begin(), rows.end());
  return with_means(std::move(detail));
}

std::vector<MetricRecord> run_experiment(const ExperimentSpec& spec, const NetworkGraph& graph) {
  switch (spec.kind) {
    case ExperimentKind::JoinEval: return run_join_eval(spec, graph);
    case ExperimentKind::Growth: return run_growth(spec, graph);
    case ExperimentKind::Baseline: return run_baseline(spec, graph);
  }
  throw InvalidArgument("unknown experiment kind");
}

SynthSpec SynthSpec::parse(std::string_view text) {
  const auto parts = split(text, ':');
  SynthSpec spec;
  const auto name = parts.front();
  auto arg = [&](std::size_t i) { return parse_number<int>(parts.at(i), "synthetic graph size"); };
  if (name == "scale_free" && parts.size() == 3) {
    spec.kind = Kind::ScaleFree;
    spec.n = arg(1);
    spec.m0 = arg(2);
  } else if (name == "path" && parts.size() == 2) {
    spec.kind = Kind::Path;
    spec.n = arg(1);
  } else if (name == "star" && parts.size() == 2) {
    spec.kind = Kind::Star;
    spec.n = arg(1);
  } else if (name == "cliques" && parts.size() == 3) {
    spec.kind = Kind::Cliques;
    spec.n = arg(1);
    spec.m0 = arg(2);
  } else {
    throw InvalidArgument("invalid synthetic graph '" + std::string(text) +
                          "' (expected scale_free:N:M0 | path:N | star:N | cliques:A:B)");
  }
  return spec;
}

NetworkGraph synth_graph(const SynthSpec& spec, std::uint64_t seed) {
  using Kind = SynthSpec::Kind;
  const int total = spec.kind == Kind::Cliques ? spec.n + spec.m0 : spec.n;
  if (total < 2) throw InvalidArgument("synthetic graphs need at least 2 nodes");
  if (spec.kind == Kind::Cliques && (spec.n < 1 || spec.m0 < 1))
    throw InvalidArgument("clique sizes must be >= 1");
  if (spec.kind == Kind::ScaleFree && (spec.m0 < 1 || spec.m0 >= spec.n))
    throw InvalidArgument("scale_free needs 1 <= m0 < n");
  if (spec.capacity_msat <= 0 || spec.capacity_msat % 2 != 0)
    throw InvalidArgument("synthetic capacity must be positive and even in msat");

  NetworkGraph g;
  const int width = static_cast<int>(std::to_string(total - 1).size());
  for (int i = 0; i < total; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "n%0*d", width, i);
    g.add_node(NodeId(buf));
  }
  auto link = [&](int a, int b) {
    g.add_channel(static_cast<NodeIndex>(a), static_cast<NodeIndex>(b), spec.capacity_msat,
                  BalanceSplit::equal(spec.capacity_msat), ChannelPolicy::defaults(), ChannelPolicy::defaults());
  };
  switch (spec.kind) {
    case Kind::Path:
      for (int i = 0; i + 1 < total; ++i) link(i, i + 1);
      break;
    case Kind::Star:
      for (int i = 1; i < total; ++i) link(0, i);
      break;
    case Kind::Cliques:
      for (int i = 0; i < spec.n; ++i)
        for (int j = i + 1; j < spec.n; ++j) link(i, j);
      for (int i = spec.n; i < total; ++i)
        for (int j = i + 1; j < total; ++j) link(i, j);
      break;
    case Kind::ScaleFree: {
      // Barabasi-Albert: complete core of m0 + 1 nodes, then each node attaches
      // to m0 distinct existing nodes with probability proportional to degree.
      RngStream rng(seed);
      std::vector<int> endpoints;  // each node repeated once per incident channel
      const int core = std::min(spec.m0 + 1, total);
      for (int i = 0; i < core; ++i)
        for (int j = i + 1; j < core; ++j) {
          link(i, j);
          endpoints.push_back(i);
          endpoints.push_back(j);
        }
      for (int v = core; v < total; ++v) {
        std::vector<int> targets;
        while (static_cast<int>(targets.size()) < spec.m0) {
          const int t = endpoints[rng.below(endpoints.size())];
          if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
        }
        for (int t : targets) {
          link(t, v);
          endpoints.push_back(t);
          endpoints.push_back(v);
        }
      }
      break;
    }
  }
  return g;
}

bool BenchResult::ordering_holds(int k) const {
  static const StrategyKind kOrder[] = {StrategyKind::Degree, StrategyKind::KCenter, StrategyKind::KMedian,
                                        StrategyKind::Betweenness, StrategyKind::Mbi};
  std::optional<double> previous;
  for (StrategyKind s : kOrder) {
    auto it = std::find_if(cells.begin(), cells.end(),
                           [&](const BenchCell& c) { return c.strategy == s && c.k == k; });
    if (it == cells.end()) continue;
    if (previous && !(*previous < it->median_seconds)) return false;
    previous = it->median_seconds;
  }
  return true;
}

BenchResult run_bench(const NetworkGraph& g, std::span<const StrategyKind> strategies,
                      std::span<const int> k_values, Msat cap_msat, Msat amount_hint_msat,
                      std::uint64_t seed, int runs) {
  if (strategies.empty()) throw InvalidArgument("bench needs at least one strategy");
  if (k_values.empty()) throw InvalidArgument("bench needs at least one k value");
  if (runs < 1) throw InvalidArgument("bench needs at least one run");
  const NodeId joiner = fresh_id(g, "synth-joiner");
  BenchResult result;
  for (StrategyKind s : strategies) {
    for (int k : k_values) {
      AttachmentRequest req{&g, joiner, k, cap_msat, amount_hint_msat, seed};
      validate(req);
      std::vector<double> seconds;
      for (int run = 0; run < runs; ++run) {
        const auto start = std::chrono::steady_clock::now();
        const CandidateSet picks = select_candidates(s, req);
        const auto stop = std::chrono::steady_clock::now();
        if (picks.peers.size() != static_cast<std::size_t>(k) || stop < start)
          throw std::runtime_error("bench: timing unavailable");
        seconds.push_back(std::chrono::duration<double>(stop - start).count());
      }
      std::sort(seconds.begin(), seconds.end());
      const std::size_t mid = seconds.size() / 2;
      const double median = seconds.size() % 2 ? seconds[mid] : 0.5 * (seconds[mid - 1] + seconds[mid]);
      result.cells.push_back({s, k, median});
    }
  }
  return result;
}

std::string bench_csv(const BenchResult& result) {
  std::string out = "strategy,k,median_seconds,ordering_ok\n";
  for (const BenchCell& c : result.cells) {
    out += std::string(strategy_name(c.strategy)) + ',' + std::to_string(c.k) + ',' +
           format_fixed(c.median_seconds, 6) + ',' + (result.ordering_holds(c.k) ? "true" : "false") + '\n';
  }
  return out;
}

}  // namespace pcn
