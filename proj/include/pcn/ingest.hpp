#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pcn/graph.hpp"

namespace pcn {

// describegraph-style snapshot, field names as emitted by LND.
struct SnapshotPolicy {
  Msat fee_base_msat = 0;
  std::int64_t fee_rate_milli_msat = 0;  // millionths of the amount
  std::int64_t time_lock_delta = 0;
  bool disabled = false;
};

struct SnapshotEdge {
  std::string channel_id;
  std::string node1_pub;
  std::string node2_pub;
  std::int64_t capacity_sat = 0;
  std::optional<SnapshotPolicy> node1_policy;
  std::optional<SnapshotPolicy> node2_policy;
};

struct SnapshotDocument {
  std::vector<std::string> nodes;
  std::vector<SnapshotEdge> edges;
};

// Throws DataError: malformed JSON (with byte offset) or a missing/mistyped
// required field (named in the message).
SnapshotDocument parse_snapshot(std::string_view json);
SnapshotDocument load_snapshot(const std::string& path);

struct BalanceMode {
  enum class Kind { Equal, UniformRandom } kind = Kind::Equal;
  std::uint64_t seed = 0;

  // "equal" or "random:<seed>". Throws InvalidArgument.
  static BalanceMode parse(std::string_view text);
};

struct IngestStats {
  std::size_t skipped_invalid = 0;   // non-positive capacity, unknown or equal endpoints
  std::size_t skipped_disabled = 0;  // both directions disabled or absent
  std::size_t duplicate_nodes = 0;
};

// Channels with at least one enabled direction; an absent policy is a disabled
// direction with a zero-fee placeholder.
NetworkGraph to_network(const SnapshotDocument& doc, BalanceMode mode = {},
                        IngestStats* stats = nullptr);

// Induced subgraph on the largest weakly connected component; ties go to the
// component containing the smallest NodeId. Node and channel order is preserved.
NetworkGraph largest_component(const NetworkGraph& g);

// Serializes `g` back into the snapshot format (debugging and fixtures).
std::string to_snapshot_json(const NetworkGraph& g);

}  // namespace pcn
