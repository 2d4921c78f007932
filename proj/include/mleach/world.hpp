#pragma once

#include <optional>
#include <vector>

#include "mleach/config.hpp"
#include "mleach/metrics.hpp"
#include "mleach/mobility.hpp"
#include "mleach/radio.hpp"
#include "mleach/types.hpp"

namespace mleach {

class MleachRound;
class DsdvState;

/// Hooks for invariant checking. All callbacks are synchronous.
class SimObserver {
 public:
  virtual ~SimObserver() = default;
  virtual void on_round_setup(const MleachRound& /*round*/) {}
  /// `previous_forwarded` is the member's last forwarded reading before this
  /// packet passed the cluster-head filter (absent for unfiltered traffic).
  virtual void on_bs_delivery(const Packet& /*packet*/, std::optional<double> /*previous*/) {}
  virtual void on_dsdv_second(const DsdvState& /*state*/) {}
  virtual void on_charge(NodeId /*node*/, double /*requested_j*/, double /*applied_j*/) {}
};

/// Everything the protocols act on: nodes, energy, queued readings, metrics.
struct World {
  World(const SimConfig& validated, const std::vector<Position>& positions);

  SimConfig config;
  Field field;
  Position bs;
  RadioModel radio;
  std::vector<NodeState> nodes;
  EnergyLedger ledger;
  // Readings sensed but not yet transmitted, per node.
  std::vector<std::vector<double>> pending;
  MetricsLog metrics;
  SimObserver* observer = nullptr;
  double now_s = 0.0;

  Position position_of(NodeId id) const {
    return id == kBaseStation ? bs : nodes[id.value].position;
  }
  bool is_alive(NodeId id) const { return id == kBaseStation || nodes[id.value].alive(); }

  /// Charges a sensor node; the base station is never charged.
  bool charge(NodeId id, double joules);

  void deliver_to_bs(const Packet& packet, std::optional<double> previous = std::nullopt);

  /// Moves a dead node's queued readings into the dropped_dead counter.
  void drop_pending_if_dead(NodeId id);
};

enum class TxOutcome { Delivered, SenderDied, ReceiverDied };

/// Point-to-point transmission charged at the current sender-receiver distance.
TxOutcome unicast(World& world, NodeId from, NodeId to, std::uint64_t bits);

struct BroadcastResult {
  bool sent = false;
  std::vector<NodeId> receivers;  // alive after paying for reception
};

/// Broadcast charged to the sender at `range_m`; every other alive node within
/// range pays reception. The base station hears it for free when in range.
BroadcastResult broadcast(World& world, NodeId from, std::uint64_t bits, double range_m);

}  // namespace mleach
