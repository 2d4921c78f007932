#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "mleach/types.hpp"

namespace mleach {

/// Raised for malformed or invalid scenario descriptions. The message always
/// names the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(message), key_(std::move(key)) {}

  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

enum class Placement : std::uint8_t { Uniform, Clustered };

/// Full scenario description. Defaults encode the canonical flood-field
/// scenario (512 nodes on a 7.5 km square, 120 s).
struct SimConfig {
  double field_width_m = 7500.0;
  double field_height_m = 7500.0;
  std::uint32_t node_count = 512;
  // Unset means "random": drawn inside the field from the bs-placement stream.
  std::optional<Position> bs_position;
  Placement placement = Placement::Uniform;

  std::uint64_t packet_size_bits = 4096;
  double initial_energy_j = 172800.0;
  double sim_duration_s = 120.0;
  double round_duration_s = 2.0;

  double p_ch_fraction = 0.05;
  double cluster_radius_rc_m = 1500.0;
  double radio_range_rr_m = 3000.0;
  double e_elec_j_per_bit = 50e-9;
  double eps_amp_j_per_bit_m2 = 120e-12;
  double filter_threshold = 0.1;
  std::uint32_t ch_exclusion_rounds = 19;

  double speed_min = 0.5;
  double speed_max = 2.0;
  double pause_s = 5.0;

  double on_s = 10.0;
  double off_s = 10.0;
  double rate_pps = 2.5;

  std::uint64_t hello_bits = 256;
  std::uint64_t schedule_bits_per_cm = 32;
  std::uint64_t heartbeat_bits = 128;
  std::uint64_t dsdv_entry_bits = 64;
  double dsdv_update_interval_s = 1.0;

  std::uint64_t rng_seed = 1;

  bool operator==(const SimConfig&) const = default;
};

/// Checks every invariant and resolves a random base-station position.
/// Throws ConfigError naming the first violated field.
SimConfig validate_config(const SimConfig& raw);

/// Parses `key = value` lines; `#` starts a comment. Keys not present keep
/// their defaults. Unknown keys and malformed values throw ConfigError.
SimConfig parse_config(std::string_view text);

/// Writes every key so that parse_config(serialize_config(c)) == c.
std::string serialize_config(const SimConfig& config);

/// Reads and parses a file; does not validate. Throws ConfigError with key
/// "config" when the file cannot be read.
SimConfig load_config_file(const std::filesystem::path& path);

/// Number of whole rounds in the run.
std::uint32_t round_count(const SimConfig& config);

}  // namespace mleach
