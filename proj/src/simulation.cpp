#include "mleach/simulation.hpp"

#include <cmath>

#include "mleach/dsdv.hpp"
#include "mleach/engine.hpp"
#include "mleach/mleach.hpp"
#include "mleach/mobility.hpp"
#include "mleach/traffic.hpp"

namespace mleach {

const char* to_string(Protocol protocol) {
  return protocol == Protocol::Mleach ? "mleach" : "dsdv";
}

std::optional<Protocol> parse_protocol(std::string_view name) {
  if (name == "mleach") return Protocol::Mleach;
  if (name == "dsdv") return Protocol::Dsdv;
  return std::nullopt;
}

namespace {

std::vector<Position> initial_positions(const SimConfig& config) {
  auto rng = RandomStream::derive(config.rng_seed, "placement");
  return place_nodes(config, rng);
}

}  // namespace

struct Simulation::Impl {
  Impl(const SimConfig& cfg, Protocol proto, SimObserver* obs)
      : protocol(proto),
        world(cfg, initial_positions(cfg)),
        mobility_params{cfg.speed_min, cfg.speed_max, cfg.pause_s},
        traffic_params{cfg.on_s, cfg.off_s, cfg.rate_pps},
        election(RandomStream::derive(cfg.rng_seed, "election")) {
    world.observer = obs;
    const auto n = cfg.node_count;
    for (std::uint32_t i = 0; i < n; ++i) {
      mobility_rng.push_back(RandomStream::derive(cfg.rng_seed, "mobility", i));
      waypoints.push_back(draw_waypoint(world.field, mobility_params, mobility_rng.back()));
      traffic_rng.push_back(RandomStream::derive(cfg.rng_seed, "traffic", i));
      on_off.push_back(start_on_off(traffic_params, traffic_rng.back()));
      world.nodes[i].reading = traffic_rng.back().uniform(0.0, 100.0);
    }
    if (protocol == Protocol::Dsdv) {
      dsdv_jitter = RandomStream::derive(cfg.rng_seed, "dsdv");
      dsdv.emplace(world, dsdv_jitter);
    }
  }

  void schedule_initial() {
    const auto& cfg = world.config;
    end_s = static_cast<std::uint32_t>(std::floor(cfg.sim_duration_s + 1e-9));
    const auto round_us = SimTime::from_seconds(cfg.round_duration_s).micros();
    const auto rounds = round_count(cfg);

    // Merge per-second samples and round starts so a sample precedes a round
    // starting at the same instant.
    std::uint32_t next_round = protocol == Protocol::Mleach ? 0 : rounds;
    for (std::uint32_t t = 0; t <= end_s; ++t) {
      const auto at = SimTime::from_seconds(t);
      while (next_round < rounds && SimTime::from_micros(next_round * round_us) < at) {
        queue.schedule(SimTime::from_micros(next_round * round_us), EventKind::RoundStart,
                       next_round);
        ++next_round;
      }
      queue.schedule(at, EventKind::MetricSample, t);
      while (next_round < rounds && SimTime::from_micros(next_round * round_us) == at) {
        queue.schedule(at, EventKind::RoundStart, next_round);
        ++next_round;
      }
    }
    if (dsdv) {
      for (std::size_t i = 0; i < dsdv->table_count(); ++i) {
        queue.schedule(SimTime::from_seconds(dsdv->phase_of(i)), EventKind::DsdvPeriodicUpdate,
                       static_cast<std::uint32_t>(i));
      }
    }
    queue.schedule(SimTime::from_seconds(cfg.sim_duration_s), EventKind::SimEnd);
  }

  void handle(const Event& ev) {
    world.now_s = ev.fire_at.seconds();
    switch (ev.kind) {
      case EventKind::MetricSample: on_sample(ev.a); break;
      case EventKind::RoundStart: on_round_start(ev.a); break;
      case EventKind::SlotStart: mleach.run_slot(world, ev.a, ev.b); break;
      case EventKind::RoundFlush: mleach.flush(world); break;
      case EventKind::DsdvPeriodicUpdate: on_dsdv_update(ev.a); break;
      case EventKind::SimEnd: on_end(); break;
    }
  }

  void on_sample(std::uint32_t t) {
    if (t > 0) {
      for (auto& node : world.nodes) {
        if (!node.alive()) continue;
        const auto i = node.id.value;
        const auto step = step_waypoint(node.position, waypoints[i], 1.0, world.field,
                                        mobility_params, mobility_rng[i]);
        node.position = step.position;
        waypoints[i] = step.waypoint;
      }
      world.metrics.energy_series.push_back(
          {static_cast<double>(t), world.ledger.total(), world.ledger.max_per_node()});
      if (dsdv && world.observer) world.observer->on_dsdv_second(*dsdv);
    }
    if (t >= end_s) return;
    if (world.metrics.bs_rx.size() < end_s) world.metrics.bs_rx.resize(end_s, 0);

    for (auto& node : world.nodes) {
      const auto i = node.id.value;
      auto readings = generate(node, on_off[i], traffic_params, 1.0, traffic_rng[i]);
      world.metrics.generated += readings.size();
      if (protocol == Protocol::Mleach) {
        auto& queue = world.pending[i];
        queue.insert(queue.end(), readings.begin(), readings.end());
        continue;
      }
      for (const double r : readings) {
        const Packet p{PacketKind::Data, node.id, kBaseStation, world.config.packet_size_bits, r,
                       node.id, world.now_s};
        switch (forward_to_bs(world, *dsdv, p)) {
          case ForwardResult::Delivered: world.deliver_to_bs(p); break;
          case ForwardResult::NoRoute:
          case ForwardResult::BrokenLink: ++world.metrics.dropped_unreachable; break;
          case ForwardResult::Died: ++world.metrics.dropped_dead; break;
        }
      }
    }
  }

  void on_round_start(std::uint32_t round) {
    const double start = world.now_s;
    for (const auto& s : mleach.begin_round(world, round, start, election)) {
      queue.schedule(SimTime::from_seconds(s.at_s), EventKind::SlotStart, s.cluster, s.slot);
    }
    const auto flush_at = SimTime::from_seconds(start + world.config.round_duration_s) +
                          SimTime::from_micros(-1);
    queue.schedule(flush_at, EventKind::RoundFlush, round);
  }

  void on_dsdv_update(std::uint32_t table_index) {
    const auto n = world.config.node_count;
    const NodeId id = DsdvState::id_of(table_index, n);
    broadcast_dump(world, *dsdv, id);
    // One dump per interval at a fresh random offset, so neighbours do not
    // hear each other in the same order every time.
    const double interval = world.config.dsdv_update_interval_s;
    const double slot = std::floor(world.now_s / interval + 1e-9) + 1.0;
    const double next = slot * interval + dsdv_jitter.uniform01() * interval;
    if (next < world.config.sim_duration_s && world.is_alive(id)) {
      queue.schedule(SimTime::from_seconds(next), EventKind::DsdvPeriodicUpdate, table_index);
    }
  }

  void on_end() {
    for (auto& node : world.nodes) {
      auto& queue = world.pending[node.id.value];
      if (node.alive()) {
        world.metrics.pending_at_end += queue.size();
      } else {
        world.metrics.dropped_dead += queue.size();
      }
      queue.clear();
    }
  }

  RunResult run() {
    schedule_initial();
    queue.run_until(SimTime::from_seconds(world.config.sim_duration_s),
                    [this](const Event& ev) { handle(ev); });
    RunResult result;
    result.protocol = protocol;
    result.config = world.config;
    result.log = world.metrics;
    result.summary = summarize(world.metrics, to_string(protocol), world.config.node_count);
    return result;
  }

  Protocol protocol;
  World world;
  MobilityParams mobility_params;
  OnOffParams traffic_params;
  RandomStream election;
  std::vector<RandomStream> mobility_rng;
  std::vector<RandomStream> traffic_rng;
  std::vector<WaypointState> waypoints;
  std::vector<OnOffState> on_off;
  std::optional<DsdvState> dsdv;
  RandomStream dsdv_jitter;
  MleachProtocol mleach;
  EventQueue queue;
  std::uint32_t end_s = 0;
};

Simulation::Simulation(const SimConfig& config, Protocol protocol, SimObserver* observer)
    : impl_(std::make_unique<Impl>(config, protocol, observer)) {}

Simulation::~Simulation() = default;

RunResult Simulation::run() { return impl_->run(); }

const World& Simulation::world() const { return impl_->world; }

RunResult run_simulation(const SimConfig& config, Protocol protocol, SimObserver* observer) {
  Simulation sim(validate_config(config), protocol, observer);
  return sim.run();
}

}  // namespace mleach
