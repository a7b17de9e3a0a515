#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pcn/graph.hpp"
#include "pcn/metrics.hpp"
#include "pcn/routing.hpp"
#include "pcn/strategies.hpp"

namespace pcn {

enum class ExperimentKind { JoinEval, Growth, Baseline };

ExperimentKind parse_experiment_kind(std::string_view name);  // join-eval | growth | baseline
std::string_view experiment_kind_name(ExperimentKind kind);

// Declarative experiment description. Repetition r runs with seed base_seed + r.
struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::JoinEval;
  StrategyKind strategy = StrategyKind::Random;
  std::vector<int> k_values = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15};
  std::vector<Msat> amounts_msat = {sat_to_msat(100), sat_to_msat(10'000), sat_to_msat(1'000'000)};
  int tx_per_batch = 1000;
  int baseline_tx = 10'000;
  int repetitions = 30;
  std::uint64_t base_seed = 0;
  // 0 selects the per-experiment default: join-eval 10 * amount * tx_per_batch,
  // growth 1,000,000 sat.
  Msat cap_msat = 0;
  int growth_nodes = 5000;
  int growth_interval = 500;
  int growth_k = 10;
  Msat growth_amount_msat = sat_to_msat(100);
  bool allow_mbi = false;
  bool topology = false;  // topology columns for join-eval and baseline rows
  std::size_t max_nodes = 50'000;
  std::size_t mbi_max_nodes = 2'000;
  RoutingOptions routing;

  // Sets one key of the flat key=value format. Throws InvalidArgument for unknown
  // keys or unparsable values.
  void set(std::string_view key, std::string_view value);
  void validate() const;
};

// Lines of key=value; '#' starts a comment.
ExperimentSpec parse_experiment_config(std::string_view text, ExperimentSpec base = {});

// Parses "3", "1..15", "1-15" or "1,2,5". Throws InvalidArgument.
std::vector<int> parse_int_list(std::string_view text);

std::vector<MetricRecord> run_join_eval(const ExperimentSpec& spec, const NetworkGraph& graph);
std::vector<MetricRecord> run_baseline(const ExperimentSpec& spec, const NetworkGraph& graph);
std::vector<MetricRecord> run_growth(const ExperimentSpec& spec, const NetworkGraph& graph);
std::vector<MetricRecord> run_experiment(const ExperimentSpec& spec, const NetworkGraph& graph);

// Executes `count` payments between uniformly drawn distinct endpoints.
// `fixed_source` pins the sender (destinations then exclude it).
std::vector<PaymentOutcome> run_batch(NetworkGraph& g, int count, Msat amount_msat,
                                      std::uint64_t seed, std::optional<NodeIndex> fixed_source,
                                      const RoutingOptions& routing = {});

struct SynthSpec {
  enum class Kind { ScaleFree, Path, Star, Cliques } kind = Kind::ScaleFree;
  int n = 0;   // scale_free/path/star node count; cliques: first clique size
  int m0 = 0;  // scale_free edges per new node; cliques: second clique size
  Msat capacity_msat = sat_to_msat(1'000'000);

  // "scale_free:N:M0", "path:N", "star:N", "cliques:A:B".
  static SynthSpec parse(std::string_view text);
};

// Deterministic synthetic graphs with default policies and equal splits. Nodes
// are "n<i>" zero-padded to a common width.
NetworkGraph synth_graph(const SynthSpec& spec, std::uint64_t seed);

struct BenchCell {
  StrategyKind strategy;
  int k = 0;
  double median_seconds = 0.0;
};

struct BenchResult {
  std::vector<BenchCell> cells;
  // Expected ordering degree < k-center < k-median < betweenness < mbi over the
  // strategies present, per k.
  bool ordering_holds(int k) const;
};

BenchResult run_bench(const NetworkGraph& g, std::span<const StrategyKind> strategies,
                      std::span<const int> k_values, Msat cap_msat, Msat amount_hint_msat,
                      std::uint64_t seed, int runs = 3);
std::string bench_csv(const BenchResult& result);

}  // namespace pcn
