#include "mleach/world.hpp"

namespace mleach {

World::World(const SimConfig& validated, const std::vector<Position>& positions)
    : config(validated),
      field{validated.field_width_m, validated.field_height_m},
      bs(validated.bs_position.value_or(Position{})),
      radio(validated.e_elec_j_per_bit, validated.eps_amp_j_per_bit_m2),
      ledger(validated.node_count),
      pending(validated.node_count) {
  nodes.reserve(validated.node_count);
  for (std::uint32_t i = 0; i < validated.node_count; ++i) {
    NodeState n;
    n.id = NodeId{i};
    n.position = positions.at(i);
    n.energy_j = validated.initial_energy_j;
    nodes.push_back(n);
  }
}

bool World::charge(NodeId id, double joules) {
  if (id == kBaseStation) return true;
  auto& node = nodes[id.value];
  const bool was_alive = node.alive();
  double applied = 0.0;
  const bool ok = ledger.charge(node, joules, &applied);
  if (observer) observer->on_charge(id, joules, applied);
  if (was_alive && !node.alive() && !metrics.first_death_s) metrics.first_death_s = now_s;
  return ok;
}

void World::deliver_to_bs(const Packet& packet, std::optional<double> previous) {
  record_bs_rx(metrics, now_s);
  if (observer) observer->on_bs_delivery(packet, previous);
}

void World::drop_pending_if_dead(NodeId id) {
  auto& queue = pending[id.value];
  if (nodes[id.value].alive() || queue.empty()) return;
  metrics.dropped_dead += queue.size();
  queue.clear();
}

TxOutcome unicast(World& world, NodeId from, NodeId to, std::uint64_t bits) {
  const double d = distance(world.position_of(from), world.position_of(to));
  const auto b = static_cast<double>(bits);
  if (!world.charge(from, world.radio.tx_energy(b, d))) return TxOutcome::SenderDied;
  if (!world.is_alive(to)) return TxOutcome::ReceiverDied;
  if (!world.charge(to, world.radio.rx_energy(b))) return TxOutcome::ReceiverDied;
  return TxOutcome::Delivered;
}

BroadcastResult broadcast(World& world, NodeId from, std::uint64_t bits, double range_m) {
  BroadcastResult out;
  const auto b = static_cast<double>(bits);
  if (!world.charge(from, world.radio.tx_energy(b, range_m))) return out;
  out.sent = true;
  const Position origin = world.position_of(from);
  const double rx = world.radio.rx_energy(b);
  for (auto& node : world.nodes) {
    if (node.id == from || !node.alive()) continue;
    if (!in_range(origin, node.position, range_m)) continue;
    if (world.charge(node.id, rx)) out.receivers.push_back(node.id);
  }
  if (from != kBaseStation && in_range(origin, world.bs, range_m)) {
    out.receivers.push_back(kBaseStation);
  }
  return out;
}

}  // namespace mleach
