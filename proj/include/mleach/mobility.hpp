#pragma once

#include <vector>

#include "mleach/config.hpp"
#include "mleach/engine.hpp"
#include "mleach/types.hpp"

namespace mleach {

double distance(Position a, Position b);

struct Field {
  double width_m = 0.0;
  double height_m = 0.0;

  bool contains(Position p) const {
    return p.x >= 0.0 && p.x <= width_m && p.y >= 0.0 && p.y <= height_m;
  }
};

struct MobilityParams {
  double speed_min = 0.0;
  double speed_max = 0.0;
  double pause_s = 0.0;
};

struct WaypointState {
  Position target;
  double speed = 0.0;
  double pause_remaining_s = 0.0;
};

struct WaypointStep {
  Position position;
  WaypointState waypoint;
};

/// Draws a fresh target and speed.
WaypointState draw_waypoint(const Field& field, const MobilityParams& params, RandomStream& rng);

/// Advances one node by dt seconds of random-waypoint motion. Time is
/// consumed exactly: a node that arrives mid-step spends the remainder
/// pausing, then heads to the freshly drawn target.
WaypointStep step_waypoint(Position position, const WaypointState& waypoint, double dt,
                           const Field& field, const MobilityParams& params, RandomStream& rng);

/// Initial deployment positions.
std::vector<Position> place_nodes(const SimConfig& config, RandomStream& rng);

}  // namespace mleach
