#pragma once

#include <vector>

#include "mleach/config.hpp"
#include "mleach/world.hpp"

namespace fixture {

// Small validated config: BS fixed, generous energy, Rc 500 / Rr 1500.
inline mleach::SimConfig small_config(std::uint32_t nodes, mleach::Position bs = {0, 0}) {
  mleach::SimConfig c;
  c.node_count = nodes;
  c.field_width_m = 10000;
  c.field_height_m = 10000;
  c.bs_position = bs;
  c.cluster_radius_rc_m = 500;
  c.radio_range_rr_m = 1500;
  c.filter_threshold = 0.5;
  return mleach::validate_config(c);
}

inline mleach::World make_world(const std::vector<mleach::Position>& positions,
                                mleach::Position bs = {0, 0}) {
  return mleach::World(small_config(static_cast<std::uint32_t>(positions.size()), bs), positions);
}

// Counts ledger entries.
struct ChargeCounter : mleach::SimObserver {
  int charges = 0;
  std::vector<mleach::NodeId> who;
  void on_charge(mleach::NodeId node, double, double) override {
    ++charges;
    who.push_back(node);
  }
};

}  // namespace fixture
