#include "mleach/traffic.hpp"

#include <algorithm>
#include <cmath>

namespace mleach {

OnOffState start_on_off(const OnOffParams& params, RandomStream& rng) {
  const double cycle = params.on_s + params.off_s;
  const double at = rng.uniform01() * cycle;
  OnOffState s;
  if (at < params.on_s) {
    s.phase = TrafficPhase::On;
    s.phase_remaining_s = params.on_s - at;
  } else {
    s.phase = TrafficPhase::Off;
    s.phase_remaining_s = cycle - at;
  }
  return s;
}

std::uint64_t advance_on_off(OnOffState& state, const OnOffParams& params, double dt) {
  double left = dt;
  double on_time = 0.0;
  while (left > 0.0) {
    const double used = std::min(left, state.phase_remaining_s);
    if (state.phase == TrafficPhase::On) on_time += used;
    state.phase_remaining_s -= used;
    left -= used;
    if (state.phase_remaining_s <= 0.0) {
      state.phase = state.phase == TrafficPhase::On ? TrafficPhase::Off : TrafficPhase::On;
      state.phase_remaining_s = state.phase == TrafficPhase::On ? params.on_s : params.off_s;
    }
  }
  state.carry += params.rate_pps * on_time;
  // Absorb accumulated rounding so e.g. ten 0.1 pps seconds yield one reading.
  const double due = std::floor(state.carry + 1e-9);
  state.carry = std::max(0.0, state.carry - due);
  return static_cast<std::uint64_t>(due);
}

std::vector<double> generate(NodeState& node, OnOffState& state, const OnOffParams& params,
                             double dt, RandomStream& rng) {
  std::vector<double> out;
  if (!node.alive()) return out;
  const auto due = advance_on_off(state, params, dt);
  out.reserve(due);
  for (std::uint64_t i = 0; i < due; ++i) {
    node.reading += rng.uniform(-1.0, 1.0);
    out.push_back(node.reading);
  }
  return out;
}

}  // namespace mleach
