#pragma once

// Observer that checks structural invariants while a simulation runs.

#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "mleach/dsdv.hpp"
#include "mleach/mleach.hpp"
#include "mleach/simulation.hpp"
#include "oracles.hpp"

namespace invariants {

struct Checker : mleach::SimObserver {
  double filter_threshold = 0.0;
  std::uint32_t node_count = 0;

  oracle::ExactSum applied_sum;
  std::uint64_t charges = 0;
  std::uint64_t rounds = 0;
  std::uint64_t routes_checked = 0;
  std::uint64_t dsdv_seconds = 0;
  std::uint64_t deliveries = 0;
  std::vector<std::string> violations;

  explicit Checker(const mleach::SimConfig& c)
      : filter_threshold(c.filter_threshold), node_count(c.node_count) {}

  void fail(std::string what) {
    if (violations.size() < 20) violations.push_back(std::move(what));
  }

  void on_round_setup(const mleach::MleachRound& round) override {
    ++rounds;
    for (const auto& s : round.tdma) {
      std::set<mleach::NodeId> members(s.slots.begin(), s.slots.end());
      if (members.size() != s.slots.size()) {
        fail("round " + std::to_string(round.index) + ": two members share a TDMA slot");
      }
      for (const auto m : s.slots) {
        if (m == s.ch) fail("cluster head holds a slot in its own cluster");
      }
    }
    check_routes(round.ch_graph);
  }

  void check_routes(const mleach::ChGraph& g) {
    if (g.vertex_count() > 9 || g.vertex_count() < 2) return;
    const auto bs = g.index_of(mleach::kBaseStation);
    if (!bs) return fail("cluster-head graph without the base station");
    // Oracle wants the sink last.
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < g.vertex_count(); ++i) {
      if (i != *bs) order.push_back(i);
    }
    order.push_back(*bs);
    oracle::Graph og{order.size(), std::vector<double>(order.size() * order.size(), -1.0)};
    for (std::size_t a = 0; a < order.size(); ++a) {
      for (const auto& e : g.neighbours(order[a])) {
        for (std::size_t b = 0; b < order.size(); ++b) {
          if (order[b] == e.to) og.w[a * og.n + b] = e.weight;
        }
      }
    }
    for (std::size_t a = 0; a + 1 < order.size(); ++a) {
      const double want = oracle::brute_force_min_cost(og, a);
      const auto got = mleach::shortest_route(g, g.id_at(order[a]));
      ++routes_checked;
      if (std::isinf(want) != !got.has_value()) {
        fail("route reachability disagrees with enumeration");
      } else if (got && std::abs(got->cost - want) > 1e-9 * std::max(1.0, want)) {
        fail("route cost " + std::to_string(got->cost) + " != optimum " + std::to_string(want));
      }
    }
  }

  void on_bs_delivery(const mleach::Packet& p, std::optional<double> previous) override {
    ++deliveries;
    if (p.kind != mleach::PacketKind::Data) fail("non-data packet delivered to the base station");
    if (previous && !(std::abs(p.reading - *previous) > filter_threshold)) {
      fail("delivered reading did not pass the filter");
    }
  }

  void on_dsdv_second(const mleach::DsdvState& state) override {
    ++dsdv_seconds;
    if (!mleach::dsdv_loop_free(state, node_count)) fail("DSDV routing loop");
  }

  void on_charge(mleach::NodeId, double requested, double applied) override {
    ++charges;
    applied_sum.add(applied);
    if (applied < 0.0 || applied > requested) fail("charge applied outside [0, requested]");
  }

  // End-of-run checks against the final world and log.
  void finish(const mleach::World& w, const mleach::MetricsLog& log) {
    const auto& m = log;
    const auto accounted =
        m.delivered + m.dropped_filtered + m.dropped_unreachable + m.dropped_dead + m.pending_at_end;
    if (accounted != m.generated) {
      fail("packet conservation: " + std::to_string(accounted) + " accounted of " +
           std::to_string(m.generated) + " generated");
    }
    std::uint64_t buckets = 0;
    for (const auto b : m.bs_rx) buckets += b;
    if (buckets != m.delivered) fail("throughput buckets do not sum to deliveries");
    if (deliveries != m.delivered) fail("observer saw a different delivery count");

    if (std::abs(w.ledger.total() - static_cast<double>(applied_sum.value())) > 1e-9) {
      fail("ledger total drifts from the sum of applied charges");
    }
    long double residual = 0;
    for (const auto& n : w.nodes) {
      if (n.energy_j < 0.0) fail("negative residual energy");
      if (n.energy_j == 0.0 && n.alive()) fail("node alive at zero energy");
      const double consumed = w.ledger.consumed(n.id);
      if (std::abs((w.config.initial_energy_j - n.energy_j) - consumed) > 1e-6) {
        fail("node energy disagrees with its ledger entry");
      }
      residual += n.energy_j;
    }
    const long double initial = static_cast<long double>(w.config.initial_energy_j) * w.nodes.size();
    if (std::abs(static_cast<double>(initial - residual) - w.ledger.total()) > 1e-6 * w.nodes.size()) {
      fail("initial minus residual energy disagrees with the ledger total");
    }
    double prev = 0.0;
    for (const auto& s : m.energy_series) {
      if (s.total_j < prev) fail("total energy series decreased");
      prev = s.total_j;
    }
  }
};

}  // namespace invariants
