#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

namespace mleach {

/// Sensor node identifier. The base station uses the reserved value kBaseStation.
struct NodeId {
  std::uint32_t value = 0;

  constexpr auto operator<=>(const NodeId&) const = default;
};

inline constexpr NodeId kBaseStation{std::numeric_limits<std::uint32_t>::max()};
inline constexpr NodeId kBroadcast{std::numeric_limits<std::uint32_t>::max() - 1};

struct Position {
  double x = 0.0;
  double y = 0.0;

  constexpr bool operator==(const Position&) const = default;
};

enum class Role : std::uint8_t { ClusterHead, ClusterMember, OrphanDirect, Dead };

const char* to_string(Role role);

struct NodeState {
  NodeId id;
  Position position;
  double energy_j = 0.0;
  Role role = Role::OrphanDirect;
  std::optional<NodeId> cluster_of;
  // Rounds left before the node re-enters the eligible set G.
  std::uint32_t exclusion_remaining = 0;
  double reading = 0.0;
  double last_forwarded_reading = -std::numeric_limits<double>::infinity();

  bool alive() const { return role != Role::Dead; }
  bool in_g() const { return alive() && exclusion_remaining == 0; }
};

enum class PacketKind : std::uint8_t { Data, Hello, Schedule, Heartbeat, RouteUpdate };

struct Packet {
  PacketKind kind = PacketKind::Data;
  NodeId src;
  NodeId dst;
  std::uint64_t size_bits = 0;
  // Data payload: the reading and the member that sensed it.
  double reading = 0.0;
  NodeId origin;
  double created_at_s = 0.0;
};

}  // namespace mleach
