#include "mleach/mleach.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mleach {

std::uint32_t epoch_length(double p) {
  const double inv = 1.0 / p;
  const double nearest = std::round(inv);
  if (std::abs(inv - nearest) <= 1e-9 * nearest) return static_cast<std::uint32_t>(nearest);
  return static_cast<std::uint32_t>(std::ceil(inv));
}

double ch_threshold(double p, std::uint64_t round, bool in_g) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("ch_threshold: p must lie in (0, 1)");
  if (!in_g) return 0.0;
  const auto phase = static_cast<double>(round % epoch_length(p));
  return std::min(1.0, p / (1.0 - p * phase));
}

std::vector<NodeId> elect_cluster_heads(std::span<NodeState> nodes, std::uint64_t round, double p,
                                        std::uint32_t exclusion_rounds, RandomStream& rng) {
  std::vector<NodeId> eligible;
  std::vector<NodeId> elected;
  const double threshold = ch_threshold(p, round, true);
  for (const auto& n : nodes) {
    if (!n.in_g()) continue;
    eligible.push_back(n.id);
    if (rng.uniform01() < threshold) elected.push_back(n.id);
  }
  if (elected.empty() && !eligible.empty()) elected.push_back(eligible.front());

  auto is_elected = [&](NodeId id) {
    return std::binary_search(elected.begin(), elected.end(), id);
  };
  for (auto& n : nodes) {
    if (!n.alive()) continue;
    if (is_elected(n.id)) {
      n.exclusion_remaining = exclusion_rounds;
      n.role = Role::ClusterHead;
      n.cluster_of.reset();
    } else if (n.exclusion_remaining > 0) {
      --n.exclusion_remaining;
    }
  }
  return elected;
}

ClusterAssignment form_clusters(World& world, std::span<const NodeId> chs) {
  const double rc = world.config.cluster_radius_rc_m;
  std::vector<NodeId> heads;
  for (const auto ch : chs) {
    if (!world.nodes[ch.value].alive()) continue;
    if (broadcast(world, ch, world.config.hello_bits, rc).sent) heads.push_back(ch);
  }
  std::sort(heads.begin(), heads.end());

  ClusterAssignment out;
  for (const auto ch : heads) out.clusters[ch];
  for (auto& node : world.nodes) {
    if (!node.alive() || node.role == Role::ClusterHead) continue;
    std::optional<NodeId> best;
    double best_d = 0.0;
    for (const auto ch : heads) {
      if (!world.nodes[ch.value].alive()) continue;
      const double d = distance(node.position, world.nodes[ch.value].position);
      if (d > rc) continue;
      if (!best || d < best_d) {
        best = ch;
        best_d = d;
      }
    }
    if (best) {
      node.role = Role::ClusterMember;
      node.cluster_of = *best;
      out.clusters[*best].push_back(node.id);
    } else {
      node.role = Role::OrphanDirect;
      node.cluster_of.reset();
      out.orphans.push_back(node.id);
    }
  }
  return out;
}

TdmaSchedule build_tdma(World& world, NodeId ch, std::vector<NodeId> members, double data_phase_s) {
  std::sort(members.begin(), members.end());
  TdmaSchedule s{ch, std::move(members), 0.0};
  if (s.slots.empty()) return s;
  s.slot_duration_s = data_phase_s / static_cast<double>(s.slots.size());
  broadcast(world, ch, world.config.schedule_bits_per_cm * s.slots.size(),
            world.config.cluster_radius_rc_m);
  return s;
}

SlotResult cm_slot_action(World& world, NodeId cm, NodeId ch) {
  SlotResult out;
  if (!world.nodes[cm.value].alive()) return out;
  auto& queue = world.pending[cm.value];
  if (queue.empty()) {
    unicast(world, cm, ch, world.config.heartbeat_bits);
    out.heartbeat = true;
    return out;
  }
  for (std::size_t i = 0; i < queue.size(); ++i) {
    Packet p{PacketKind::Data, cm, ch, world.config.packet_size_bits, queue[i], cm, world.now_s};
    const auto outcome = unicast(world, cm, ch, p.size_bits);
    if (outcome == TxOutcome::Delivered) {
      out.received.push_back(p);
    } else if (outcome == TxOutcome::SenderDied) {
      world.metrics.dropped_dead += queue.size() - i;
      break;
    } else {
      ++world.metrics.dropped_dead;
    }
  }
  queue.clear();
  return out;
}

std::vector<ForwardedData> ch_filter(World& world, std::span<const Packet> incoming) {
  std::vector<ForwardedData> out;
  const double threshold = world.config.filter_threshold;
  for (const auto& p : incoming) {
    if (p.kind != PacketKind::Data) continue;
    auto& origin = world.nodes[p.origin.value];
    const double previous = origin.last_forwarded_reading;
    if (std::abs(p.reading - previous) > threshold) {
      origin.last_forwarded_reading = p.reading;
      out.push_back({p, previous});
    } else {
      ++world.metrics.dropped_filtered;
    }
  }
  return out;
}

ChGraph build_ch_graph(World& world, std::span<const NodeId> chs) {
  const double rr = world.config.radio_range_rr_m;
  for (const auto ch : chs) {
    if (world.nodes[ch.value].alive()) broadcast(world, ch, world.config.hello_bits, rr);
  }
  std::vector<std::pair<NodeId, Position>> vertices;
  for (const auto ch : chs) {
    if (world.nodes[ch.value].alive()) vertices.emplace_back(ch, world.nodes[ch.value].position);
  }
  vertices.emplace_back(kBaseStation, world.bs);
  return ChGraph::from_positions(vertices, rr);
}

const std::optional<Route>& MleachRound::route_for(NodeId ch) {
  auto it = routes_.find(ch);
  if (it == routes_.end()) it = routes_.emplace(ch, shortest_route(ch_graph, ch)).first;
  return it->second;
}

std::vector<MleachProtocol::SlotEvent> MleachProtocol::begin_round(World& world, std::uint64_t round,
                                                                   double start_s,
                                                                   RandomStream& election) {
  round_ = MleachRound{};
  round_.index = round;
  round_.start_s = start_s;

  std::uint32_t alive = 0;
  for (auto& n : world.nodes) {
    if (!n.alive()) continue;
    ++alive;
    n.role = Role::OrphanDirect;
    n.cluster_of.reset();
  }
  std::vector<SlotEvent> slots;
  if (alive > 0) {
    const auto& cfg = world.config;
    round_.cluster_heads = elect_cluster_heads(world.nodes, round, cfg.p_ch_fraction,
                                               cfg.ch_exclusion_rounds, election);
    round_.assignment = form_clusters(world, round_.cluster_heads);
    for (const auto& [ch, members] : round_.assignment.clusters) {
      round_.tdma.push_back(build_tdma(world, ch, members, cfg.round_duration_s));
    }
    round_.ch_graph = build_ch_graph(world, round_.cluster_heads);

    for (std::uint32_t c = 0; c < round_.tdma.size(); ++c) {
      const auto& s = round_.tdma[c];
      for (std::uint32_t i = 0; i < s.slots.size(); ++i) {
        slots.push_back({start_s + (i + 0.5) * s.slot_duration_s, c, i});
      }
    }
    std::stable_sort(slots.begin(), slots.end(),
                     [](const SlotEvent& a, const SlotEvent& b) { return a.at_s < b.at_s; });
  }
  world.metrics.alive_series.push_back({static_cast<std::uint32_t>(round), start_s, alive});
  world.metrics.ch_count_series.push_back(
      {static_cast<std::uint32_t>(round), start_s,
       static_cast<std::uint32_t>(round_.cluster_heads.size())});
  if (world.observer) world.observer->on_round_setup(round_);
  return slots;
}

void MleachProtocol::run_slot(World& world, std::uint32_t cluster, std::uint32_t slot) {
  const auto& schedule = round_.tdma.at(cluster);
  const NodeId cm = schedule.slots.at(slot);
  world.drop_pending_if_dead(cm);
  const auto result = cm_slot_action(world, cm, schedule.ch);
  forward(world, schedule.ch, result.received);
}

void MleachProtocol::flush(World& world) {
  auto own_packets = [&world](NodeId id) {
    std::vector<Packet> packets;
    auto& queue = world.pending[id.value];
    for (const double r : queue) {
      packets.push_back({PacketKind::Data, id, kBaseStation, world.config.packet_size_bits, r, id,
                         world.now_s});
    }
    queue.clear();
    return packets;
  };

  for (const auto ch : round_.cluster_heads) {
    world.drop_pending_if_dead(ch);
    if (!world.nodes[ch.value].alive()) continue;
    const auto packets = own_packets(ch);
    forward(world, ch, packets);
  }
  for (const auto orphan : round_.assignment.orphans) {
    world.drop_pending_if_dead(orphan);
    if (!world.nodes[orphan.value].alive()) continue;
    const auto packets = own_packets(orphan);
    const auto passed = ch_filter(world, packets);
    const bool reachable = in_range(world.nodes[orphan.value].position, world.bs,
                                    world.config.radio_range_rr_m);
    for (const auto& data : passed) {
      if (!reachable) {
        ++world.metrics.dropped_unreachable;
        continue;
      }
      if (unicast(world, orphan, kBaseStation, data.packet.size_bits) == TxOutcome::Delivered) {
        world.deliver_to_bs(data.packet, data.previous);
      } else {
        ++world.metrics.dropped_dead;
      }
    }
  }
}

void MleachProtocol::execute_round(World& world, std::uint64_t round, double start_s,
                                   RandomStream& election) {
  world.now_s = start_s;
  const auto slots = begin_round(world, round, start_s, election);
  for (const auto& s : slots) {
    world.now_s = s.at_s;
    run_slot(world, s.cluster, s.slot);
  }
  world.now_s = start_s + world.config.round_duration_s - 1e-6;
  flush(world);
}

void MleachProtocol::forward(World& world, NodeId ch, std::span<const Packet> packets) {
  if (packets.empty()) return;
  if (!world.nodes[ch.value].alive()) {
    world.metrics.dropped_dead += packets.size();
    return;
  }
  for (const auto& data : ch_filter(world, packets)) route_to_bs(world, ch, data);
}

void MleachProtocol::route_to_bs(World& world, NodeId ch, const ForwardedData& data) {
  const auto& route = round_.route_for(ch);
  if (!route) {
    ++world.metrics.dropped_unreachable;
    return;
  }
  const auto& path = route->path;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    if (unicast(world, path[i], path[i + 1], data.packet.size_bits) != TxOutcome::Delivered) {
      ++world.metrics.dropped_dead;
      return;
    }
  }
  world.deliver_to_bs(data.packet, data.previous);
}

}  // namespace mleach
