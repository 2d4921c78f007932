#include "mleach/routing.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

#include "mleach/mobility.hpp"

namespace mleach {

std::size_t ChGraph::add_vertex(NodeId id, Position position) {
  if (auto existing = index_of(id)) return *existing;
  ids_.push_back(id);
  positions_.push_back(position);
  adjacency_.emplace_back();
  return ids_.size() - 1;
}

void ChGraph::add_edge(NodeId a, NodeId b, double weight) {
  if (a == b) throw std::invalid_argument("ChGraph: self-loop");
  if (weight < 0.0) throw std::invalid_argument("ChGraph: negative weight");
  const auto ia = index_of(a);
  const auto ib = index_of(b);
  if (!ia || !ib) throw std::invalid_argument("ChGraph: unknown vertex");
  adjacency_[*ia].push_back({*ib, weight});
  adjacency_[*ib].push_back({*ia, weight});
}

ChGraph ChGraph::from_positions(const std::vector<std::pair<NodeId, Position>>& vertices,
                                double range_m) {
  ChGraph g;
  for (const auto& [id, pos] : vertices) g.add_vertex(id, pos);
  for (std::size_t i = 0; i < g.ids_.size(); ++i) {
    for (std::size_t j = i + 1; j < g.ids_.size(); ++j) {
      const double d = distance(g.positions_[i], g.positions_[j]);
      if (d <= range_m) {
        g.adjacency_[i].push_back({j, d});
        g.adjacency_[j].push_back({i, d});
      }
    }
  }
  return g;
}

std::optional<std::size_t> ChGraph::index_of(NodeId id) const {
  const auto it = std::find(ids_.begin(), ids_.end(), id);
  if (it == ids_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - ids_.begin());
}

bool ChGraph::has_edge(NodeId a, NodeId b) const {
  const auto ia = index_of(a);
  const auto ib = index_of(b);
  if (!ia || !ib) return false;
  return std::any_of(adjacency_[*ia].begin(), adjacency_[*ia].end(),
                     [&](const Edge& e) { return e.to == *ib; });
}

std::size_t ChGraph::edge_count() const {
  std::size_t twice = 0;
  for (const auto& adj : adjacency_) twice += adj.size();
  return twice / 2;
}

namespace {

struct Label {
  double cost = 0.0;
  std::vector<NodeId> path;

  // Strict weak order: cost, then hop count, then id sequence.
  bool better_than(const Label& other) const {
    if (cost != other.cost) return cost < other.cost;
    if (path.size() != other.path.size()) return path.size() < other.path.size();
    return path < other.path;
  }
};

}  // namespace

std::optional<Route> shortest_route(const ChGraph& graph, NodeId src) {
  const auto source = graph.index_of(src);
  const auto target = graph.index_of(kBaseStation);
  if (!source || !target) return std::nullopt;

  const std::size_t n = graph.vertex_count();
  std::vector<std::optional<Label>> best(n);
  std::vector<bool> settled(n, false);
  best[*source] = Label{0.0, {src}};

  // Vertex counts are small (cluster heads per round), so a linear scan for
  // the next label keeps the tie-break logic in one place.
  for (;;) {
    std::optional<std::size_t> u;
    for (std::size_t v = 0; v < n; ++v) {
      if (settled[v] || !best[v]) continue;
      if (!u || best[v]->better_than(*best[*u])) u = v;
    }
    if (!u) return std::nullopt;
    if (*u == *target) break;
    settled[*u] = true;
    for (const auto& e : graph.neighbours(*u)) {
      if (settled[e.to]) continue;
      Label candidate{best[*u]->cost + e.weight, best[*u]->path};
      candidate.path.push_back(graph.id_at(e.to));
      if (!best[e.to] || candidate.better_than(*best[e.to])) best[e.to] = std::move(candidate);
    }
  }
  auto& label = *best[*target];
  return Route{std::move(label.path), label.cost};
}

}  // namespace mleach
