#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>

namespace pcn {

// All money is integer millisatoshi.
using Msat = std::int64_t;

constexpr Msat kMsatPerSat = 1000;

constexpr Msat sat_to_msat(std::int64_t sat) { return sat * kMsatPerSat; }

using NodeIndex = std::uint32_t;
using ChannelIndex = std::uint32_t;

// Identifier of a node: hex public key for snapshot nodes, synthetic token otherwise.
class NodeId {
 public:
  NodeId() = default;
  explicit NodeId(std::string value) : value_(std::move(value)) {}

  const std::string& str() const { return value_; }
  bool empty() const { return value_.empty(); }

  friend auto operator<=>(const NodeId&, const NodeId&) = default;
  friend bool operator==(const NodeId&, const NodeId&) = default;

 private:
  std::string value_;
};

}  // namespace pcn

template <>
struct std::hash<pcn::NodeId> {
  std::size_t operator()(const pcn::NodeId& id) const noexcept {
    return std::hash<std::string>{}(id.str());
  }
};
