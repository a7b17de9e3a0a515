#include "pcn/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <queue>

#include "pcn/centrality.hpp"
#include "pcn/error.hpp"
#include "pcn/parallel.hpp"

namespace pcn {

double gini(std::span<const double> values) {
  if (values.empty()) throw InvalidArgument("gini of an empty list");
  std::vector<double> x(values.begin(), values.end());
  std::sort(x.begin(), x.end());
  const double total = std::accumulate(x.begin(), x.end(), 0.0);
  if (total == 0.0) return 0.0;
  // sum_i sum_j |x_i - x_j| = 2 sum_i (2i - n + 1) x_(i), i zero-based on sorted x.
  const auto n = static_cast<double>(x.size());
  double weighted = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    weighted += (2.0 * static_cast<double>(i) - n + 1.0) * x[i];
  return weighted / (n * total);
}

std::int64_t diameter(const NetworkGraph& g) {
  const std::size_t n = g.node_count();
  if (n == 0) throw InvalidArgument("diameter of an empty graph");
  const auto adj = undirected_projection(g);
  constexpr std::size_t kChunks = 64;
  const std::size_t chunks = std::min(kChunks, n);
  std::vector<std::int64_t> best(chunks, 0);
  std::vector<char> disconnected(chunks, 0);
  parallel_chunks(chunks, [&](std::size_t chunk) {
    std::vector<std::int64_t> hops(n);
    std::vector<NodeIndex> queue(n);
    const Range range = chunk_range(n, chunks, chunk);
    for (std::size_t s = range.begin; s < range.end; ++s) {
      std::fill(hops.begin(), hops.end(), -1);
      std::size_t head = 0, tail = 0;
      hops[s] = 0;
      queue[tail++] = static_cast<NodeIndex>(s);
      while (head < tail) {
        const NodeIndex u = queue[head++];
        for (NodeIndex v : adj[u])
          if (hops[v] < 0) {
            hops[v] = hops[u] + 1;
            queue[tail++] = v;
          }
      }
      if (tail != n) {
        disconnected[chunk] = 1;
        return;
      }
      best[chunk] = std::max(best[chunk], hops[queue[tail - 1]]);
    }
  });
  if (std::any_of(disconnected.begin(), disconnected.end(), [](char c) { return c != 0; }))
    throw InvalidArgument("diameter requires a connected graph; apply largest_component first");
  return *std::max_element(best.begin(), best.end());
}

double central_point_dominance(std::span<const double> bc, std::size_t n) {
  if (n < 3) throw InvalidArgument("central point dominance needs at least 3 nodes");
  if (bc.size() != n) throw InvalidArgument("betweenness vector size does not match n");
  const double norm = static_cast<double>(n - 1) * static_cast<double>(n - 2);
  const double max = *std::max_element(bc.begin(), bc.end()) / norm;
  double sum = 0.0;
  for (double v : bc) sum += max - v / norm;
  return sum / static_cast<double>(n - 1);
}

BatchStats batch_stats(std::span<const PaymentOutcome> outcomes, Msat amount_msat,
                       std::optional<NodeIndex> watched) {
  BatchStats stats;
  if (outcomes.empty()) return stats;
  std::size_t successes = 0;
  std::size_t routed = 0;
  double fee_pct_sum = 0.0;
  for (const auto& o : outcomes) {
    if (!o.success) continue;
    ++successes;
    fee_pct_sum += 100.0 * static_cast<double>(o.fee_paid_msat) / static_cast<double>(amount_msat);
    if (watched && record_intermediaries(o, *watched)) ++routed;
  }
  const auto total = static_cast<double>(outcomes.size());
  stats.success_rate_pct = 100.0 * static_cast<double>(successes) / total;
  stats.fee_defined = successes > 0;
  stats.mean_fee_pct = successes > 0 ? fee_pct_sum / static_cast<double>(successes) : 0.0;
  stats.routed_share_pct = 100.0 * static_cast<double>(routed) / total;
  return stats;
}

TopologyMetrics topology_metrics(const NetworkGraph& g, Msat amount_msat) {
  TopologyMetrics m;
  const auto adj = undirected_projection(g);
  std::vector<double> deg(g.node_count());
  for (std::size_t v = 0; v < adj.size(); ++v) deg[v] = static_cast<double>(adj[v].size());
  m.degree_gini = gini(deg);
  const auto bc = betweenness(build_fee_graph(g, amount_msat));
  m.betweenness_gini = gini(bc);
  m.diameter_hops = diameter(g);
  m.central_point_dominance = g.node_count() >= 3 ? central_point_dominance(bc, g.node_count()) : 0.0;
  return m;
}

std::string format_fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  std::string s(buf);
  if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);  // no "-0.000"
  return s;
}

std::string csv_header() {
  return "label,nodes_added,degree_gini,betweenness_gini,diameter_hops,central_point_dominance,"
         "success_rate_pct,mean_fee_pct,routed_share_pct,seed,k,amount_sat,row";
}

namespace {

std::string opt(const std::optional<double>& v, int decimals) {
  return v ? format_fixed(*v, decimals) : std::string{};
}

}  // namespace

std::string csv_row(const MetricRecord& r) {
  constexpr int kDecimals = 9;
  std::string row;
  row += r.label;
  row += ',' + std::to_string(r.nodes_added);
  row += ',' + opt(r.degree_gini, kDecimals);
  row += ',' + opt(r.betweenness_gini, kDecimals);
  row += ',' + opt(r.diameter_hops, r.is_mean ? kDecimals : 0);
  row += ',' + opt(r.central_point_dominance, kDecimals);
  row += ',' + format_fixed(r.success_rate_pct, kDecimals);
  row += ',' + format_fixed(r.mean_fee_pct, kDecimals);
  row += ',' + opt(r.routed_share_pct, kDecimals);
  row += ',' + std::to_string(r.seed);
  row += ',' + std::to_string(r.k);
  row += ',' + format_fixed(r.amount_sat, 3);
  row += r.is_mean ? ",mean" : ",detail";
  return row;
}

std::string to_csv(std::span<const MetricRecord> records) {
  std::string out = csv_header() + '\n';
  for (const auto& r : records) out += csv_row(r) + '\n';
  return out;
}

MetricRecord mean_record(std::span<const MetricRecord> rows) {
  if (rows.empty()) throw InvalidArgument("mean of no records");
  MetricRecord m = rows.front();
  m.is_mean = true;
  const auto n = static_cast<double>(rows.size());
  auto mean_of = [&](auto field) {
    double sum = 0.0;
    for (const auto& r : rows) sum += field(r);
    return sum / n;
  };
  auto mean_opt = [&](auto field) -> std::optional<double> {
    double sum = 0.0;
    for (const auto& r : rows) {
      const auto v = field(r);
      if (!v) return std::nullopt;
      sum += static_cast<double>(*v);
    }
    return sum / n;
  };
  m.success_rate_pct = mean_of([](const MetricRecord& r) { return r.success_rate_pct; });
  m.mean_fee_pct = mean_of([](const MetricRecord& r) { return r.mean_fee_pct; });
  m.degree_gini = mean_opt([](const MetricRecord& r) { return r.degree_gini; });
  m.betweenness_gini = mean_opt([](const MetricRecord& r) { return r.betweenness_gini; });
  m.central_point_dominance = mean_opt([](const MetricRecord& r) { return r.central_point_dominance; });
  m.routed_share_pct = mean_opt([](const MetricRecord& r) { return r.routed_share_pct; });
  m.diameter_hops = mean_opt([](const MetricRecord& r) { return r.diameter_hops; });
  return m;
}

}  // namespace pcn
