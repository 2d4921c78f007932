#include "mleach/mobility.hpp"

#include <algorithm>
#include <cmath>

namespace mleach {

double distance(Position a, Position b) { return std::hypot(a.x - b.x, a.y - b.y); }

WaypointState draw_waypoint(const Field& field, const MobilityParams& params, RandomStream& rng) {
  WaypointState wp;
  wp.target = Position{rng.uniform01() * field.width_m, rng.uniform01() * field.height_m};
  wp.speed = rng.uniform(params.speed_min, params.speed_max);
  wp.pause_remaining_s = 0.0;
  return wp;
}

WaypointStep step_waypoint(Position position, const WaypointState& waypoint, double dt,
                           const Field& field, const MobilityParams& params, RandomStream& rng) {
  WaypointStep out{position, waypoint};
  double left = dt;
  // Each pass finishes a pause, reaches a target or exhausts dt; the cap
  // guards against degenerate zero-length legs.
  for (int pass = 0; left > 0.0 && pass < 64; ++pass) {
    auto& wp = out.waypoint;
    if (wp.pause_remaining_s > 0.0) {
      const double used = std::min(wp.pause_remaining_s, left);
      wp.pause_remaining_s -= used;
      left -= used;
      continue;
    }
    if (wp.speed <= 0.0) break;

    const double remaining = distance(out.position, wp.target);
    const double reach = wp.speed * left;
    if (reach < remaining) {
      const double f = reach / remaining;
      out.position.x += (wp.target.x - out.position.x) * f;
      out.position.y += (wp.target.y - out.position.y) * f;
      left = 0.0;
    } else {
      out.position = wp.target;
      left -= remaining / wp.speed;
      wp = draw_waypoint(field, params, rng);
      wp.pause_remaining_s = params.pause_s;
    }
  }
  out.position.x = std::clamp(out.position.x, 0.0, field.width_m);
  out.position.y = std::clamp(out.position.y, 0.0, field.height_m);
  return out;
}

std::vector<Position> place_nodes(const SimConfig& config, RandomStream& rng) {
  std::vector<Position> out;
  out.reserve(config.node_count);
  if (config.placement == Placement::Uniform) {
    for (std::uint32_t i = 0; i < config.node_count; ++i) {
      out.push_back({rng.uniform01() * config.field_width_m, rng.uniform01() * config.field_height_m});
    }
    return out;
  }
  // Gaussian blobs around a handful of random centres.
  constexpr int kBlobs = 8;
  const double sigma_x = config.field_width_m / 10.0;
  const double sigma_y = config.field_height_m / 10.0;
  std::vector<Position> centres;
  for (int i = 0; i < kBlobs; ++i) {
    centres.push_back({rng.uniform01() * config.field_width_m, rng.uniform01() * config.field_height_m});
  }
  for (std::uint32_t i = 0; i < config.node_count; ++i) {
    const auto& c = centres[i % kBlobs];
    out.push_back({std::clamp(c.x + sigma_x * rng.normal(), 0.0, config.field_width_m),
                   std::clamp(c.y + sigma_y * rng.normal(), 0.0, config.field_height_m)});
  }
  return out;
}

}  // namespace mleach
