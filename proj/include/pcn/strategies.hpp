#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pcn/graph.hpp"

namespace pcn {

enum class StrategyKind { Random, Degree, Betweenness, KCenter, KMedian, Mbi };

// Names: random | degree | betweenness | k-center | k-median | mbi.
StrategyKind parse_strategy(std::string_view name);
std::string_view strategy_name(StrategyKind kind);
const std::vector<StrategyKind>& all_strategies();

// Input of S(G, k, cap). `joining` may or may not already be a node of `graph`.
struct AttachmentRequest {
  const NetworkGraph* graph = nullptr;
  NodeId joining;
  int k = 1;
  Msat cap_msat = sat_to_msat(1'000'000);
  Msat amount_hint_msat = sat_to_msat(100);
  std::uint64_t rng_seed = 0;
};

struct CandidateSet {
  std::vector<NodeId> peers;                // selection order
  std::vector<double> per_step_objective;   // empty when the strategy records none
};

CandidateSet random_strategy(const AttachmentRequest& req);
CandidateSet highest_degree_strategy(const AttachmentRequest& req);
CandidateSet betweenness_strategy(const AttachmentRequest& req);
CandidateSet k_center_strategy(const AttachmentRequest& req);
CandidateSet k_median_strategy(const AttachmentRequest& req);
CandidateSet mbi_strategy(const AttachmentRequest& req);

CandidateSet select_candidates(StrategyKind kind, const AttachmentRequest& req);

// Throws InvalidArgument unless 1 <= k <= n-1, cap is positive and even, and the
// amount hint is positive.
void validate(const AttachmentRequest& req);

// Objective penalty per node the joiner cannot reach (k-median).
constexpr Msat kUnreachablePenaltyMsat = 1'000'000'000'000;

// k-median objective: sum over v != joiner of the weighted distance from the
// joiner, after connecting it to `peers` with zero-weight first hops.
Msat k_median_objective(const FeeGraph& fg, std::optional<NodeIndex> joiner,
                        const std::vector<NodeIndex>& peers);

// Opens a channel joiner<->peer with equal split and default policies on both
// sides. Used for every permanent attachment.
ChannelIndex attach(NetworkGraph& g, NodeIndex joiner, NodeIndex peer, Msat cap_msat);

}  // namespace pcn
