#include "mleach/dsdv.hpp"

namespace mleach {

DsdvTable::DsdvTable(NodeId owner, std::uint32_t node_count)
    : owner_(owner), node_count_(node_count), slots_(node_count + 1), present_(node_count + 1) {
  set(DsdvEntry{owner, owner, 0, 0});
}

std::size_t DsdvTable::slot(NodeId dest) const {
  return dest == kBaseStation ? node_count_ : dest.value;
}

std::optional<DsdvEntry> DsdvTable::find(NodeId dest) const {
  const auto s = slot(dest);
  if (s >= slots_.size() || !present_[s]) return std::nullopt;
  return slots_[s];
}

void DsdvTable::set(const DsdvEntry& entry) {
  const auto s = slot(entry.dest);
  if (!present_[s]) {
    present_[s] = true;
    ++known_;
  }
  slots_[s] = entry;
}

std::vector<DsdvEntry> DsdvTable::entries() const {
  std::vector<DsdvEntry> out;
  out.reserve(known_);
  for (std::size_t s = 0; s < slots_.size(); ++s) {
    if (present_[s]) out.push_back(slots_[s]);
  }
  return out;
}

std::size_t DsdvTable::apply_update(NodeId from, std::span<const DsdvEntry> advertised) {
  std::size_t changed = 0;
  for (const auto& e : advertised) {
    if (e.dest == owner_) continue;
    const auto s = slot(e.dest);
    const std::uint32_t metric = e.metric == kInfiniteMetric ? kInfiniteMetric : e.metric + 1;
    if (present_[s]) {
      const auto& local = slots_[s];
      const bool newer = e.seq > local.seq;
      const bool shorter = e.seq == local.seq && metric < local.metric;
      if (!newer && !shorter) continue;
    } else {
      present_[s] = true;
      ++known_;
    }
    slots_[s] = DsdvEntry{e.dest, from, metric, e.seq};
    ++changed;
  }
  return changed;
}

void DsdvTable::mark_broken(NodeId dest) {
  const auto s = slot(dest);
  if (!present_[s]) return;
  auto& e = slots_[s];
  if (e.seq % 2 == 0) ++e.seq;
  e.metric = kInfiniteMetric;
}

void DsdvTable::advance_own_seq() {
  auto& self = slots_[slot(owner_)];
  self.seq += 2;
  self.metric = 0;
  self.next_hop = owner_;
}

DsdvState::DsdvState(const World& world, RandomStream& jitter) {
  const auto n = world.config.node_count;
  tables_.reserve(n + 1);
  for (std::uint32_t i = 0; i < n; ++i) tables_.emplace_back(NodeId{i}, n);
  tables_.emplace_back(kBaseStation, n);
  for (std::size_t i = 0; i < tables_.size(); ++i) {
    phases_.push_back(jitter.uniform01() * world.config.dsdv_update_interval_s);
  }
}

DsdvAdvert periodic_dump(DsdvTable& table, std::uint64_t entry_bits, double now_s) {
  table.advance_own_seq();
  DsdvAdvert advert;
  advert.entries = table.entries();
  advert.header = Packet{PacketKind::RouteUpdate, table.owner(), kBroadcast,
                         advert.entries.size() * entry_bits, 0.0, table.owner(), now_s};
  return advert;
}

void broadcast_dump(World& world, DsdvState& state, NodeId node) {
  if (!world.is_alive(node)) return;
  const auto advert = periodic_dump(state.table(node), world.config.dsdv_entry_bits, world.now_s);
  const auto heard =
      broadcast(world, node, advert.header.size_bits, world.config.radio_range_rr_m);
  for (const auto receiver : heard.receivers) {
    state.table(receiver).apply_update(node, advert.entries);
  }
}

ForwardResult forward_to_bs(World& world, DsdvState& state, const Packet& packet) {
  NodeId current = packet.src;
  const auto limit = world.config.node_count + 1;
  for (std::uint32_t hop = 0; hop < limit; ++hop) {
    if (current == kBaseStation) return ForwardResult::Delivered;
    auto& table = state.table(current);
    const auto entry = table.find(kBaseStation);
    if (!entry || entry->metric == kInfiniteMetric) return ForwardResult::NoRoute;
    const NodeId next = entry->next_hop;
    if (!world.is_alive(next) ||
        !in_range(world.position_of(current), world.position_of(next),
                  world.config.radio_range_rr_m)) {
      table.mark_broken(kBaseStation);
      return ForwardResult::BrokenLink;
    }
    if (unicast(world, current, next, packet.size_bits) != TxOutcome::Delivered) {
      return ForwardResult::Died;
    }
    current = next;
  }
  return current == kBaseStation ? ForwardResult::Delivered : ForwardResult::NoRoute;
}

bool dsdv_loop_free(const DsdvState& state, std::uint32_t node_count) {
  for (std::uint32_t i = 0; i < node_count; ++i) {
    NodeId current{i};
    std::vector<bool> seen(node_count, false);
    for (std::uint32_t step = 0;; ++step) {
      if (current == kBaseStation) break;
      if (step > node_count || seen[current.value]) return false;
      seen[current.value] = true;
      const auto entry = state.table(current).find(kBaseStation);
      if (!entry || entry->metric == kInfiniteMetric) break;
      current = entry->next_hop;
    }
  }
  return true;
}

}  // namespace mleach
