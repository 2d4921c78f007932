#include "mleach/radio.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mleach/mobility.hpp"

namespace mleach {

double RadioModel::tx_energy(double bits, double distance_m) const {
  if (bits < 0.0 || distance_m < 0.0) {
    throw std::invalid_argument("tx_energy: bits and distance must be non-negative");
  }
  return e_elec_ * bits + eps_amp_ * bits * distance_m * distance_m;
}

double RadioModel::rx_energy(double bits) const {
  if (bits < 0.0) throw std::invalid_argument("rx_energy: bits must be non-negative");
  return e_elec_ * bits;
}

bool in_range(Position a, Position b, double range_m) { return distance(a, b) <= range_m; }

void CompensatedSum::add(double v) {
  const double t = sum_ + v;
  if (std::abs(sum_) >= std::abs(v)) {
    compensation_ += (sum_ - t) + v;
  } else {
    compensation_ += (v - t) + sum_;
  }
  sum_ = t;
}

bool consume(NodeState& node, double joules, double* applied) {
  if (!node.alive()) {
    if (applied) *applied = 0.0;
    return false;
  }
  if (node.energy_j >= joules) {
    node.energy_j -= joules;
    if (applied) *applied = joules;
    if (node.energy_j <= 0.0) {
      node.energy_j = 0.0;
      node.role = Role::Dead;
      node.cluster_of.reset();
    }
    return true;
  }
  if (applied) *applied = node.energy_j;
  node.energy_j = 0.0;
  node.role = Role::Dead;
  node.cluster_of.reset();
  return false;
}

bool EnergyLedger::charge(NodeState& node, double joules, double* applied_out) {
  double applied = 0.0;
  const bool ok = consume(node, joules, &applied);
  if (applied_out) *applied_out = applied;
  if (applied > 0.0) {
    per_node_[node.id.value].add(applied);
    total_.add(applied);
  }
  ++charges_;
  return ok;
}

double EnergyLedger::max_per_node() const {
  double best = 0.0;
  for (const auto& s : per_node_) best = std::max(best, s.value());
  return best;
}

}  // namespace mleach
