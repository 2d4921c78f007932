#pragma once

#include <memory>
#include <optional>
#include <string_view>

#include "mleach/config.hpp"
#include "mleach/metrics.hpp"
#include "mleach/world.hpp"

namespace mleach {

enum class Protocol : std::uint8_t { Mleach, Dsdv };

const char* to_string(Protocol protocol);
std::optional<Protocol> parse_protocol(std::string_view name);

struct RunResult {
  Protocol protocol = Protocol::Mleach;
  SimConfig config;
  MetricsLog log;
  RunSummary summary;
};

/// One deterministic run of one protocol. Placement, mobility and traffic
/// draw from streams shared by both protocols, so paired runs see the same
/// nodes, motion and offered load.
class Simulation {
 public:
  /// `config` must already be validated.
  Simulation(const SimConfig& config, Protocol protocol, SimObserver* observer = nullptr);
  ~Simulation();
  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  RunResult run();
  const World& world() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Validates, runs and summarizes.
RunResult run_simulation(const SimConfig& config, Protocol protocol,
                         SimObserver* observer = nullptr);

}  // namespace mleach
