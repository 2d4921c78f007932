#pragma once

#include <cstdint>
#include <vector>

#include "mleach/engine.hpp"
#include "mleach/types.hpp"

namespace mleach {

enum class TrafficPhase : std::uint8_t { On, Off };

struct OnOffParams {
  double on_s = 10.0;
  double off_s = 10.0;
  double rate_pps = 1.0;
};

struct OnOffState {
  TrafficPhase phase = TrafficPhase::On;
  double phase_remaining_s = 0.0;
  // Fractional readings carried between calls.
  double carry = 0.0;
};

/// Starts the generator at a uniformly random point of its on/off cycle.
OnOffState start_on_off(const OnOffParams& params, RandomStream& rng);

/// Advances the phase clock by dt and returns how many readings fall due.
std::uint64_t advance_on_off(OnOffState& state, const OnOffParams& params, double dt);

/// Produces the readings due over the next dt seconds. Each reading is the
/// previous one plus a uniform step in [-1, 1]; node.reading tracks the latest.
std::vector<double> generate(NodeState& node, OnOffState& state, const OnOffParams& params,
                             double dt, RandomStream& rng);

}  // namespace mleach
