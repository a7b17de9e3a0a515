#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pcn/graph.hpp"
#include "pcn/routing.hpp"

namespace pcn {

// sum_i sum_j |x_i - x_j| / (2 n^2 mean). 0 for all-zero input; throws on empty.
double gini(std::span<const double> values);

// Longest shortest hop path over the undirected channel projection. Throws
// InvalidArgument for disconnected graphs.
std::int64_t diameter(const NetworkGraph& g);

// Freeman's central point dominance. `bc` is raw betweenness; it is normalized
// by (n-1)(n-2) here. Throws for n < 3.
double central_point_dominance(std::span<const double> bc, std::size_t n);

struct BatchStats {
  double success_rate_pct = 0.0;
  double mean_fee_pct = 0.0;
  bool fee_defined = false;  // false when no payment succeeded
  double routed_share_pct = 0.0;
};

BatchStats batch_stats(std::span<const PaymentOutcome> outcomes, Msat amount_msat,
                       std::optional<NodeIndex> watched = std::nullopt);

struct TopologyMetrics {
  double degree_gini = 0.0;
  double betweenness_gini = 0.0;
  std::int64_t diameter_hops = 0;
  double central_point_dominance = 0.0;
};

// Degree = distinct peers; betweenness on the fee graph at `amount_msat`.
TopologyMetrics topology_metrics(const NetworkGraph& g, Msat amount_msat);

// One row of experiment output.
struct MetricRecord {
  std::string label;
  std::int64_t nodes_added = 0;
  std::optional<double> degree_gini;
  std::optional<double> betweenness_gini;
  std::optional<double> diameter_hops;  // integral on detail rows
  std::optional<double> central_point_dominance;
  double success_rate_pct = 0.0;
  double mean_fee_pct = 0.0;
  std::optional<double> routed_share_pct;
  std::int64_t seed = 0;
  // Extra keys: channels per joiner (k), payment amount, detail|mean.
  std::int64_t k = 0;
  double amount_sat = 0.0;
  bool is_mean = false;
};

std::string csv_header();
std::string csv_row(const MetricRecord& r);
std::string to_csv(std::span<const MetricRecord> records);

// Field-wise arithmetic mean of `rows`; optional fields stay set only when set on
// every row. Key fields are copied from the first row.
MetricRecord mean_record(std::span<const MetricRecord> rows);

// Formats with a fixed number of decimals using the C locale.
std::string format_fixed(double value, int decimals);

}  // namespace pcn
