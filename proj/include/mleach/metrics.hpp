#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace mleach {

struct EnergySample {
  double t_s = 0.0;
  double total_j = 0.0;
  double max_node_j = 0.0;
};

struct RoundSample {
  std::uint32_t round = 0;
  double t_s = 0.0;
  std::uint32_t value = 0;
};

struct MetricsLog {
  std::vector<EnergySample> energy_series;
  // bs_rx[t] counts deliveries in the half-open second [t, t+1).
  std::vector<std::uint64_t> bs_rx;
  std::vector<RoundSample> alive_series;
  std::vector<RoundSample> ch_count_series;

  std::uint64_t generated = 0;
  std::uint64_t delivered = 0;
  std::uint64_t dropped_filtered = 0;
  std::uint64_t dropped_unreachable = 0;
  std::uint64_t dropped_dead = 0;
  // Readings still queued at a live node when the run stopped.
  std::uint64_t pending_at_end = 0;

  std::optional<double> first_death_s;
};

void record_bs_rx(MetricsLog& log, double t_s);

/// Mean of the per-second delivery buckets over [t_start, end).
/// Throws std::invalid_argument when the window is empty.
double steady_state_throughput(const MetricsLog& log, double t_start_s);

/// R^2 of an ordinary least-squares line through (t, total_j) for samples
/// with t in [t_from, t_to]. Returns 1 for a perfectly flat series.
double energy_linearity_r2(const MetricsLog& log, double t_from_s, double t_to_s);

struct RunSummary {
  std::string protocol;
  std::uint32_t node_count = 0;
  double avg_energy_per_node_j = 0.0;
  double max_energy_per_node_j = 0.0;
  double steady_throughput_pps = 0.0;
  std::optional<double> first_death_s;
  std::uint64_t generated = 0;
  std::uint64_t delivered = 0;
  std::uint64_t dropped_filtered = 0;
  std::uint64_t dropped_unreachable = 0;
  std::uint64_t dropped_dead = 0;
  std::uint64_t pending_at_end = 0;

  bool operator==(const RunSummary&) const = default;
};

inline constexpr double kSteadyStateStartS = 20.0;

RunSummary summarize(const MetricsLog& log, const std::string& protocol, std::uint32_t node_count,
                     double steady_start_s = kSteadyStateStartS);

/// Shortest round-trip decimal form; all CSV numbers use it.
std::string format_number(double v);

/// Writes energy.csv, throughput.csv, rounds.csv and summary.csv into `dir`,
/// creating it.
/// Throws std::runtime_error naming the path when a file cannot be written.
void export_csv(const MetricsLog& log, const RunSummary& summary, const std::filesystem::path& dir);

/// Reads back a summary.csv written by export_csv.
RunSummary read_summary_csv(const std::filesystem::path& file);

struct Comparison {
  RunSummary mleach;
  RunSummary dsdv;
  // Ratios are MLEACH over DSDV; absent when the denominator is zero.
  std::optional<double> throughput_ratio;
  std::optional<double> max_energy_ratio;
  std::optional<double> avg_energy_ratio;
};

Comparison compare(const RunSummary& mleach, const RunSummary& dsdv);
void write_comparison_csv(const Comparison& comparison, const std::filesystem::path& file);

/// One-screen table, one row per run plus ratios when both protocols ran.
std::string format_summary(const std::vector<RunSummary>& runs);

}  // namespace mleach
