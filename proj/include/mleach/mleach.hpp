#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "mleach/engine.hpp"
#include "mleach/routing.hpp"
#include "mleach/types.hpp"
#include "mleach/world.hpp"

namespace mleach {

/// Rounds per epoch: ceil(1/p), robust to 1/p landing a hair above an integer.
std::uint32_t epoch_length(double p);

/// Election threshold T(n): p / (1 - p * (r mod epoch)) for eligible nodes,
/// capped at 1; zero for nodes outside G. Throws std::invalid_argument for p
/// outside (0, 1).
double ch_threshold(double p, std::uint64_t round, bool in_g);

/// Draws one uniform per eligible alive node (id order) and elects those
/// under the threshold. Elected nodes are excluded for `exclusion_rounds`
/// rounds; every other node's exclusion counter ticks down. If nobody wins,
/// the lowest-id eligible node is promoted.
std::vector<NodeId> elect_cluster_heads(std::span<NodeState> nodes, std::uint64_t round, double p,
                                        std::uint32_t exclusion_rounds, RandomStream& rng);

struct ClusterAssignment {
  // CH id -> members ordered by id.
  std::map<NodeId, std::vector<NodeId>> clusters;
  std::vector<NodeId> orphans;
};

/// Each CH broadcasts hello over Rc; every alive non-CH node joins the
/// nearest CH within Rc (ties to the smaller id) or becomes OrphanDirect.
ClusterAssignment form_clusters(World& world, std::span<const NodeId> chs);

struct TdmaSchedule {
  NodeId ch;
  std::vector<NodeId> slots;  // slot i belongs to slots[i]
  double slot_duration_s = 0.0;
};

/// Assigns slots by ascending member id and charges the CH's schedule
/// broadcast. No broadcast for an empty cluster.
TdmaSchedule build_tdma(World& world, NodeId ch, std::vector<NodeId> members,
                        double data_phase_s);

struct SlotResult {
  std::vector<Packet> received;  // data that reached the CH
  bool heartbeat = false;
};

/// One member's TDMA slot: all queued readings go to the CH as data packets,
/// or a heartbeat if nothing is queued.
SlotResult cm_slot_action(World& world, NodeId cm, NodeId ch);

struct ForwardedData {
  Packet packet;
  double previous = 0.0;  // last forwarded reading before this packet
};

/// Forwards a packet iff its reading moved more than the threshold since the
/// last forwarded reading of the same origin; updates that origin's state.
std::vector<ForwardedData> ch_filter(World& world, std::span<const Packet> incoming);

/// Vertices: alive CHs plus the base station, edges within Rr. Each CH pays
/// one hello broadcast over Rr.
ChGraph build_ch_graph(World& world, std::span<const NodeId> chs);

/// State of one MLEACH round.
class MleachRound {
 public:
  std::uint64_t index = 0;
  double start_s = 0.0;
  std::vector<NodeId> cluster_heads;
  ClusterAssignment assignment;
  std::vector<TdmaSchedule> tdma;  // one per cluster, in CH id order
  ChGraph ch_graph;

  /// Route cache; routes are fixed for the round.
  const std::optional<Route>& route_for(NodeId ch);

 private:
  std::map<NodeId, std::optional<Route>> routes_;
};

/// Round-based MLEACH driver. begin_round performs setup; run_slot and
/// flush are the timed transmission steps.
class MleachProtocol {
 public:
  struct SlotEvent {
    double at_s;
    std::uint32_t cluster;
    std::uint32_t slot;
  };

  /// Election, cluster formation, TDMA and CH-graph construction. Returns
  /// the slot times for the data phase.
  std::vector<SlotEvent> begin_round(World& world, std::uint64_t round, double start_s,
                                     RandomStream& election);

  void run_slot(World& world, std::uint32_t cluster, std::uint32_t slot);

  /// Cluster heads' and orphans' own readings, at the end of the round.
  void flush(World& world);

  /// Whole round synchronously: setup, every slot in time order, flush.
  void execute_round(World& world, std::uint64_t round, double start_s, RandomStream& election);

  const MleachRound& round() const { return round_; }

 private:
  void forward(World& world, NodeId ch, std::span<const Packet> packets);
  void route_to_bs(World& world, NodeId ch, const ForwardedData& data);

  MleachRound round_;
};

}  // namespace mleach
