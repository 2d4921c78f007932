#include <doctest.h>
#include <algorithm>

#include "fixtures.hpp"
#include "mleach/dsdv.hpp"

using namespace mleach;

namespace {

const NodeId X{1}, Y{2};

DsdvTable table_with_route(std::uint32_t metric, std::uint64_t seq) {
  DsdvTable t(NodeId{0}, 8);
  t.set({kBaseStation, X, metric, seq});
  return t;
}

// Runs `intervals` rounds of dumps in id order, base station last.
void converge(World& w, DsdvState& s, int intervals) {
  for (int k = 0; k < intervals; ++k) {
    for (std::size_t i = 0; i < s.table_count(); ++i) {
      broadcast_dump(w, s, DsdvState::id_of(i, w.config.node_count));
    }
  }
}

}  // namespace

TEST_SUITE("dsdv") {

TEST_CASE("newer sequence wins") {
  auto t = table_with_route(3, 10);
  const DsdvEntry advert[] = {{kBaseStation, kBaseStation, 4, 12}};
  CHECK(t.apply_update(Y, advert) == 1);
  CHECK(t.find(kBaseStation) == DsdvEntry{kBaseStation, Y, 5, 12});
}

TEST_CASE("equal sequence, shorter metric wins") {
  auto t = table_with_route(3, 10);
  const DsdvEntry advert[] = {{kBaseStation, kBaseStation, 1, 10}};
  CHECK(t.apply_update(Y, advert) == 1);
  CHECK(t.find(kBaseStation) == DsdvEntry{kBaseStation, Y, 2, 10});
}

TEST_CASE("stale sequence is ignored") {
  auto t = table_with_route(3, 10);
  const DsdvEntry advert[] = {{kBaseStation, kBaseStation, 1, 8}};
  CHECK(t.apply_update(Y, advert) == 0);
  CHECK(t.find(kBaseStation) == DsdvEntry{kBaseStation, X, 3, 10});
}

TEST_CASE("equal sequence, equal metric keeps the current next hop") {
  auto t = table_with_route(3, 10);
  const DsdvEntry advert[] = {{kBaseStation, kBaseStation, 2, 10}};
  CHECK(t.apply_update(Y, advert) == 0);
  CHECK(t.find(kBaseStation)->next_hop == X);
}

TEST_CASE("broken routes") {
  auto t = table_with_route(3, 10);
  t.mark_broken(kBaseStation);
  CHECK(t.find(kBaseStation)->seq == 11);
  CHECK(t.find(kBaseStation)->metric == kInfiniteMetric);
  t.mark_broken(kBaseStation);
  CHECK(t.find(kBaseStation)->seq == 11);

  // A broken advert stays infinite and still supersedes an older valid route.
  auto u = table_with_route(2, 10);
  const DsdvEntry advert[] = {{kBaseStation, kBaseStation, kInfiniteMetric, 11}};
  CHECK(u.apply_update(Y, advert) == 1);
  CHECK(u.find(kBaseStation)->metric == kInfiniteMetric);
  // The next valid sequence number repairs it.
  const DsdvEntry fresh[] = {{kBaseStation, kBaseStation, 0, 12}};
  CHECK(u.apply_update(X, fresh) == 1);
  CHECK(u.find(kBaseStation)->metric == 1);
}

TEST_CASE("own entry is never overwritten") {
  DsdvTable t(NodeId{3}, 8);
  const DsdvEntry advert[] = {{NodeId{3}, NodeId{3}, 0, 100}};
  CHECK(t.apply_update(Y, advert) == 0);
  CHECK(t.find(NodeId{3})->seq == 0);
}

TEST_CASE("dump size is entries times entry bits") {
  DsdvTable t(NodeId{0}, 20);
  for (std::uint32_t i = 1; i < 10; ++i) t.set({NodeId{i}, NodeId{i}, 1, 2});
  REQUIRE(t.size() == 10);
  const auto advert = periodic_dump(t, 64, 3.0);
  CHECK(advert.header.size_bits == 640);
  CHECK(advert.entries.size() == 10);
  CHECK(t.find(NodeId{0})->seq == 2);
  CHECK(periodic_dump(t, 64, 4.0).entries.front().seq == 4);
}

TEST_CASE("dead nodes do not dump") {
  auto w = fixture::make_world({{100, 0}, {200, 0}});
  auto jitter = RandomStream::derive(1, "dsdv");
  DsdvState s(w, jitter);
  w.nodes[0].role = Role::Dead;
  fixture::ChargeCounter counter;
  w.observer = &counter;
  broadcast_dump(w, s, NodeId{0});
  CHECK(counter.charges == 0);
  CHECK(s.table(NodeId{0}).find(NodeId{0})->seq == 0);
}

TEST_CASE("one-hop delivery") {
  auto w = fixture::make_world({{1000, 0}}, {0, 0});
  auto jitter = RandomStream::derive(1, "dsdv");
  DsdvState s(w, jitter);
  Packet p;
  p.src = NodeId{0};
  p.size_bits = 4096;
  CHECK(forward_to_bs(w, s, p) == ForwardResult::NoRoute);
  broadcast_dump(w, s, kBaseStation);
  CHECK(s.table(NodeId{0}).find(kBaseStation)->metric == 1);
  CHECK(forward_to_bs(w, s, p) == ForwardResult::Delivered);
}

TEST_CASE("three-hop chain charges three transmissions and two receptions") {
  auto w = fixture::make_world({{3600, 0}, {2400, 0}, {1200, 0}}, {0, 0});
  auto jitter = RandomStream::derive(1, "dsdv");
  DsdvState s(w, jitter);
  const NodeId A{0}, B{1}, C{2};
  s.table(A).set({kBaseStation, B, 3, 2});
  s.table(B).set({kBaseStation, C, 2, 2});
  s.table(C).set({kBaseStation, kBaseStation, 1, 2});
  fixture::ChargeCounter counter;
  w.observer = &counter;
  Packet p;
  p.src = A;
  p.size_bits = 4096;
  CHECK(forward_to_bs(w, s, p) == ForwardResult::Delivered);
  // A tx, B rx, B tx, C rx, C tx; the base station's reception is free.
  CHECK(counter.who == std::vector<NodeId>{A, B, B, C, C});
  const double tx = w.radio.tx_energy(4096, 1200);
  const double rx = w.radio.rx_energy(4096);
  CHECK(w.ledger.total() == doctest::Approx(3 * tx + 2 * rx));
}

TEST_CASE("moved next hop breaks the route") {
  auto w = fixture::make_world({{2400, 0}, {1200, 0}}, {0, 0});
  auto jitter = RandomStream::derive(1, "dsdv");
  DsdvState s(w, jitter);
  s.table(NodeId{0}).set({kBaseStation, NodeId{1}, 2, 4});
  w.nodes[1].position = {0, 5000};
  Packet p;
  p.src = NodeId{0};
  p.size_bits = 4096;
  CHECK(forward_to_bs(w, s, p) == ForwardResult::BrokenLink);
  CHECK(s.table(NodeId{0}).find(kBaseStation)->seq == 5);
  CHECK(forward_to_bs(w, s, p) == ForwardResult::NoRoute);
}

TEST_CASE("line topology converges to hop-count metrics") {
  std::vector<Position> line;
  for (int i = 1; i <= 6; ++i) line.push_back({1000.0 * i, 0});
  auto w = fixture::make_world(line, {0, 0});
  auto jitter = RandomStream::derive(1, "dsdv");
  DsdvState s(w, jitter);
  converge(w, s, 8);
  for (std::uint32_t i = 0; i < 6; ++i) {
    const auto e = s.table(NodeId{i}).find(kBaseStation);
    REQUIRE(e);
    // 1000 m spacing, 1500 m range: one node per hop.
    CHECK(e->metric == i + 1);
    CHECK(e->seq % 2 == 0);
  }
  CHECK(dsdv_loop_free(s, 6));
  Packet p;
  p.src = NodeId{5};
  p.size_bits = 4096;
  CHECK(forward_to_bs(w, s, p) == ForwardResult::Delivered);
}

TEST_CASE("random mobile network stays loop-free with monotone sequence numbers") {
  const std::uint32_t n = 60;
  auto rng = RandomStream::derive(5, "dsdv-topology");
  std::vector<Position> pos;
  for (std::uint32_t i = 0; i < n; ++i) pos.push_back({rng.uniform(0, 6000), rng.uniform(0, 6000)});
  auto w = fixture::make_world(pos, {3000, 3000});
  auto jitter = RandomStream::derive(1, "dsdv");
  DsdvState s(w, jitter);
  std::vector<std::vector<std::uint64_t>> last(s.table_count(), std::vector<std::uint64_t>(n + 1, 0));
  for (int interval = 0; interval < 40; ++interval) {
    for (std::size_t k = 0; k < s.table_count(); ++k) {
      const auto idx = static_cast<std::size_t>(rng.uniform01() * s.table_count());
      broadcast_dump(w, s, DsdvState::id_of(idx, n));
    }
    for (auto& node : w.nodes) {
      node.position.x = std::clamp(node.position.x + rng.uniform(-200, 200), 0.0, 6000.0);
      node.position.y = std::clamp(node.position.y + rng.uniform(-200, 200), 0.0, 6000.0);
    }
    for (std::uint32_t i = 0; i < n; ++i) {
      Packet p;
      p.src = NodeId{i};
      p.size_bits = 4096;
      forward_to_bs(w, s, p);
    }
    CHECK(dsdv_loop_free(s, n));
    for (std::size_t t = 0; t < s.table_count(); ++t) {
      for (const auto& e : s.table(DsdvState::id_of(t, n)).entries()) {
        const auto slot = e.dest == kBaseStation ? n : e.dest.value;
        CHECK(e.seq >= last[t][slot]);
        last[t][slot] = e.seq;
      }
    }
  }
}

TEST_CASE("loop detector catches a cycle") {
  auto w = fixture::make_world({{100, 0}, {200, 0}});
  auto jitter = RandomStream::derive(1, "dsdv");
  DsdvState s(w, jitter);
  s.table(NodeId{0}).set({kBaseStation, NodeId{1}, 2, 2});
  s.table(NodeId{1}).set({kBaseStation, NodeId{0}, 2, 2});
  CHECK_FALSE(dsdv_loop_free(s, 2));
}

TEST_CASE("dump phases lie inside the interval") {
  auto w = fixture::make_world(std::vector<Position>(30, Position{50, 50}));
  auto jitter = RandomStream::derive(1, "dsdv");
  DsdvState s(w, jitter);
  CHECK(s.table_count() == 31);
  for (std::size_t i = 0; i < s.table_count(); ++i) {
    CHECK(s.phase_of(i) >= 0.0);
    CHECK(s.phase_of(i) < w.config.dsdv_update_interval_s);
  }
}

}  // TEST_SUITE
