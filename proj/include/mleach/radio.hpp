#pragma once

#include <cstdint>
#include <vector>

#include "mleach/types.hpp"

namespace mleach {

/// First-order radio: transmit costs electronics plus a d^2 amplifier term,
/// receive costs electronics only.
class RadioModel {
 public:
  RadioModel(double e_elec_j_per_bit, double eps_amp_j_per_bit_m2)
      : e_elec_(e_elec_j_per_bit), eps_amp_(eps_amp_j_per_bit_m2) {}

  /// Throws std::invalid_argument for negative bits or distance.
  double tx_energy(double bits, double distance_m) const;
  double rx_energy(double bits) const;

  double e_elec() const { return e_elec_; }
  double eps_amp() const { return eps_amp_; }

 private:
  double e_elec_;
  double eps_amp_;
};

bool in_range(Position a, Position b, double range_m);

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double v);
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

/// Applies `joules` to a node. Returns true if the node could afford it.
/// Otherwise the residual clamps to zero, the node dies and the caller must
/// treat the action as failed. A node whose residual reaches exactly zero
/// also dies, although the action itself succeeded.
/// `applied` receives the energy actually removed.
bool consume(NodeState& node, double joules, double* applied = nullptr);

/// Tracks consumed energy per node and in total. All charges go through
/// charge(), so totals agree with the node states.
class EnergyLedger {
 public:
  explicit EnergyLedger(std::size_t node_count) : per_node_(node_count) {}

  /// Consumes from `node` and records what was actually removed.
  bool charge(NodeState& node, double joules, double* applied = nullptr);

  double consumed(NodeId id) const { return per_node_[id.value].value(); }
  double total() const { return total_.value(); }
  double max_per_node() const;
  std::uint64_t charge_count() const { return charges_; }
  std::size_t node_count() const { return per_node_.size(); }

 private:
  std::vector<CompensatedSum> per_node_;
  CompensatedSum total_;
  std::uint64_t charges_ = 0;
};

}  // namespace mleach
