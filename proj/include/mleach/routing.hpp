#pragma once

#include <optional>
#include <vector>

#include "mleach/types.hpp"

namespace mleach {

/// Undirected weighted graph over cluster heads plus the base station.
class ChGraph {
 public:
  struct Edge {
    std::size_t to;
    double weight;
  };

  /// Returns the vertex index; adding an existing id is a no-op.
  std::size_t add_vertex(NodeId id, Position position = {});
  /// Throws std::invalid_argument on self-loops, unknown ids or negative weight.
  void add_edge(NodeId a, NodeId b, double weight);

  /// Connects every pair within `range_m` (inclusive), weighted by distance.
  static ChGraph from_positions(const std::vector<std::pair<NodeId, Position>>& vertices,
                                double range_m);

  std::optional<std::size_t> index_of(NodeId id) const;
  bool contains(NodeId id) const { return index_of(id).has_value(); }
  bool has_edge(NodeId a, NodeId b) const;
  std::size_t vertex_count() const { return ids_.size(); }
  std::size_t edge_count() const;
  NodeId id_at(std::size_t index) const { return ids_[index]; }
  Position position_at(std::size_t index) const { return positions_[index]; }
  const std::vector<Edge>& neighbours(std::size_t index) const { return adjacency_[index]; }

 private:
  std::vector<NodeId> ids_;
  std::vector<Position> positions_;
  std::vector<std::vector<Edge>> adjacency_;
};

struct Route {
  std::vector<NodeId> path;  // source first, base station last
  double cost = 0.0;

  std::size_t hops() const { return path.empty() ? 0 : path.size() - 1; }
};

/// Minimum-weight path to the base station. Ties go to fewer hops, then to
/// the lexicographically smallest id sequence. Path cost is accumulated from
/// the source outward. Returns nullopt when the base station is unreachable.
std::optional<Route> shortest_route(const ChGraph& graph, NodeId src);

}  // namespace mleach
