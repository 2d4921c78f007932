#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "mleach/engine.hpp"
#include "mleach/types.hpp"
#include "mleach/world.hpp"

namespace mleach {

inline constexpr std::uint32_t kInfiniteMetric = std::numeric_limits<std::uint32_t>::max();

struct DsdvEntry {
  NodeId dest;
  NodeId next_hop;
  std::uint32_t metric = 0;
  // Even: valid route. Odd: route reported broken.
  std::uint64_t seq = 0;

  bool operator==(const DsdvEntry&) const = default;
};

/// Routing table of one node. Destinations are sensor ids 0..node_count-1
/// plus the base station.
class DsdvTable {
 public:
  DsdvTable() = default;
  DsdvTable(NodeId owner, std::uint32_t node_count);

  NodeId owner() const { return owner_; }
  std::optional<DsdvEntry> find(NodeId dest) const;
  void set(const DsdvEntry& entry);
  std::size_t size() const { return known_; }
  std::vector<DsdvEntry> entries() const;

  /// Standard DSDV adoption: take the neighbour's route (metric + 1) when its
  /// sequence number is newer, or equally new with a strictly shorter metric.
  /// Returns the number of entries changed.
  std::size_t apply_update(NodeId from, std::span<const DsdvEntry> advertised);

  /// Marks the route broken: odd sequence number, infinite metric.
  void mark_broken(NodeId dest);

  /// Bumps the owner's own sequence number by 2.
  void advance_own_seq();

 private:
  std::size_t slot(NodeId dest) const;

  NodeId owner_;
  std::uint32_t node_count_ = 0;
  std::vector<DsdvEntry> slots_;
  std::vector<bool> present_;
  std::size_t known_ = 0;
};

struct DsdvAdvert {
  Packet header;
  std::vector<DsdvEntry> entries;
};

/// All tables plus the base station's, and the dump schedule.
class DsdvState {
 public:
  DsdvState(const World& world, RandomStream& jitter);

  DsdvTable& table(NodeId id) { return id == kBaseStation ? tables_.back() : tables_[id.value]; }
  const DsdvTable& table(NodeId id) const {
    return id == kBaseStation ? tables_.back() : tables_[id.value];
  }
  /// Dump offset inside the update interval, per table (base station last).
  double phase_of(std::size_t table_index) const { return phases_[table_index]; }
  std::size_t table_count() const { return tables_.size(); }
  static NodeId id_of(std::size_t table_index, std::uint32_t node_count) {
    return table_index == node_count ? kBaseStation : NodeId{static_cast<std::uint32_t>(table_index)};
  }

 private:
  std::vector<DsdvTable> tables_;
  std::vector<double> phases_;
};

/// Builds the node's full-table advertisement after bumping its own
/// sequence number. Size is entries x dsdv_entry_bits.
DsdvAdvert periodic_dump(DsdvTable& table, std::uint64_t entry_bits, double now_s);

/// Broadcasts a dump over Rr and applies it at every neighbour that heard it.
/// Dead sensor nodes do not dump.
void broadcast_dump(World& world, DsdvState& state, NodeId node);

enum class ForwardResult { Delivered, NoRoute, BrokenLink, Died };

/// Hop-by-hop delivery of one data packet to the base station.
ForwardResult forward_to_bs(World& world, DsdvState& state, const Packet& packet);

/// Follows next-hop pointers toward the base station from every node; false
/// if any walk revisits a node or exceeds node_count steps.
bool dsdv_loop_free(const DsdvState& state, std::uint32_t node_count);

}  // namespace mleach
