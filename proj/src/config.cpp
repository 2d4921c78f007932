#include "mleach/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "mleach/engine.hpp"

namespace mleach {

const char* to_string(Role role) {
  switch (role) {
    case Role::ClusterHead: return "ClusterHead";
    case Role::ClusterMember: return "ClusterMember";
    case Role::OrphanDirect: return "OrphanDirect";
    case Role::Dead: return "Dead";
  }
  return "?";
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out)) {
    throw ConfigError(std::string(key), std::string(key) + ": not a finite number: '" +
                                            std::string(v) + "'");
  }
  return out;
}

std::uint64_t parse_u64(std::string_view key, std::string_view v) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ConfigError(std::string(key), std::string(key) + ": not a non-negative integer: '" +
                                            std::string(v) + "'");
  }
  return out;
}

std::uint32_t parse_u32(std::string_view key, std::string_view v) {
  const auto wide = parse_u64(key, v);
  if (wide > std::numeric_limits<std::uint32_t>::max()) {
    throw ConfigError(std::string(key), std::string(key) + ": value out of range");
  }
  return static_cast<std::uint32_t>(wide);
}

std::string fmt(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

using Setter = std::function<void(SimConfig&, std::string_view)>;
using Getter = std::function<std::string(const SimConfig&)>;

struct Field {
  Setter set;
  Getter get;
};

template <typename T>
Field number_field(std::string_view key, T SimConfig::*member) {
  Field f;
  f.set = [key, member](SimConfig& c, std::string_view v) {
    if constexpr (std::is_same_v<T, double>) {
      c.*member = parse_double(key, v);
    } else if constexpr (std::is_same_v<T, std::uint32_t>) {
      c.*member = parse_u32(key, v);
    } else {
      c.*member = parse_u64(key, v);
    }
  };
  f.get = [member](const SimConfig& c) {
    if constexpr (std::is_same_v<T, double>) {
      return fmt(c.*member);
    } else {
      return std::to_string(c.*member);
    }
  };
  return f;
}

// Ordered so serialization is stable.
const std::vector<std::pair<std::string_view, Field>>& field_table() {
  static const std::vector<std::pair<std::string_view, Field>> table = [] {
    std::vector<std::pair<std::string_view, Field>> t;
    auto add = [&t](std::string_view key, Field f) { t.emplace_back(key, std::move(f)); };
    add("field_width_m", number_field("field_width_m", &SimConfig::field_width_m));
    add("field_height_m", number_field("field_height_m", &SimConfig::field_height_m));
    add("node_count", number_field("node_count", &SimConfig::node_count));
    add("bs_position",
        Field{[](SimConfig& c, std::string_view v) {
                if (v == "random") {
                  c.bs_position.reset();
                  return;
                }
                const auto comma = v.find(',');
                if (comma == std::string_view::npos) {
                  throw ConfigError("bs_position", "bs_position: expected 'random' or 'x,y'");
                }
                c.bs_position = Position{parse_double("bs_position", trim(v.substr(0, comma))),
                                         parse_double("bs_position", trim(v.substr(comma + 1)))};
              },
              [](const SimConfig& c) {
                if (!c.bs_position) return std::string("random");
                return fmt(c.bs_position->x) + "," + fmt(c.bs_position->y);
              }});
    add("placement",
        Field{[](SimConfig& c, std::string_view v) {
                if (v == "uniform") {
                  c.placement = Placement::Uniform;
                } else if (v == "clustered") {
                  c.placement = Placement::Clustered;
                } else {
                  throw ConfigError("placement", "placement: expected 'uniform' or 'clustered'");
                }
              },
              [](const SimConfig& c) {
                return std::string(c.placement == Placement::Uniform ? "uniform" : "clustered");
              }});
    add("packet_size_bits", number_field("packet_size_bits", &SimConfig::packet_size_bits));
    add("initial_energy_j", number_field("initial_energy_j", &SimConfig::initial_energy_j));
    add("sim_duration_s", number_field("sim_duration_s", &SimConfig::sim_duration_s));
    add("round_duration_s", number_field("round_duration_s", &SimConfig::round_duration_s));
    add("p_ch_fraction", number_field("p_ch_fraction", &SimConfig::p_ch_fraction));
    add("cluster_radius_rc_m", number_field("cluster_radius_rc_m", &SimConfig::cluster_radius_rc_m));
    add("radio_range_rr_m", number_field("radio_range_rr_m", &SimConfig::radio_range_rr_m));
    add("e_elec_j_per_bit", number_field("e_elec_j_per_bit", &SimConfig::e_elec_j_per_bit));
    add("eps_amp_j_per_bit_m2",
        number_field("eps_amp_j_per_bit_m2", &SimConfig::eps_amp_j_per_bit_m2));
    add("filter_threshold", number_field("filter_threshold", &SimConfig::filter_threshold));
    add("ch_exclusion_rounds", number_field("ch_exclusion_rounds", &SimConfig::ch_exclusion_rounds));
    add("speed_min", number_field("speed_min", &SimConfig::speed_min));
    add("speed_max", number_field("speed_max", &SimConfig::speed_max));
    add("pause_s", number_field("pause_s", &SimConfig::pause_s));
    add("on_s", number_field("on_s", &SimConfig::on_s));
    add("off_s", number_field("off_s", &SimConfig::off_s));
    add("rate_pps", number_field("rate_pps", &SimConfig::rate_pps));
    add("hello_bits", number_field("hello_bits", &SimConfig::hello_bits));
    add("schedule_bits_per_cm", number_field("schedule_bits_per_cm", &SimConfig::schedule_bits_per_cm));
    add("heartbeat_bits", number_field("heartbeat_bits", &SimConfig::heartbeat_bits));
    add("dsdv_entry_bits", number_field("dsdv_entry_bits", &SimConfig::dsdv_entry_bits));
    add("dsdv_update_interval_s",
        number_field("dsdv_update_interval_s", &SimConfig::dsdv_update_interval_s));
    add("rng_seed", number_field("rng_seed", &SimConfig::rng_seed));
    return t;
  }();
  return table;
}

void require(bool ok, const char* key, const std::string& message) {
  if (!ok) throw ConfigError(key, message);
}

void require_positive(double v, const char* key) {
  require(v > 0.0, key, std::string(key) + " must be positive");
}

void require_non_negative(double v, const char* key) {
  require(v >= 0.0, key, std::string(key) + " must not be negative");
}

}  // namespace

SimConfig validate_config(const SimConfig& raw) {
  SimConfig c = raw;
  require_positive(c.field_width_m, "field_width_m");
  require_positive(c.field_height_m, "field_height_m");
  require(c.node_count > 0, "node_count", "node_count must be positive");
  require(c.packet_size_bits > 0, "packet_size_bits", "packet_size_bits must be positive");
  require_positive(c.initial_energy_j, "initial_energy_j");
  require_positive(c.sim_duration_s, "sim_duration_s");
  require_positive(c.round_duration_s, "round_duration_s");
  require(c.p_ch_fraction > 0.0 && c.p_ch_fraction < 1.0, "p_ch_fraction",
          "p_ch_fraction must lie strictly between 0 and 1");
  require_positive(c.cluster_radius_rc_m, "cluster_radius_rc_m");
  require_positive(c.radio_range_rr_m, "radio_range_rr_m");
  require(c.cluster_radius_rc_m <= c.radio_range_rr_m, "cluster_radius_rc_m",
          "Rc must not exceed Rr");
  require_positive(c.e_elec_j_per_bit, "e_elec_j_per_bit");
  require_positive(c.eps_amp_j_per_bit_m2, "eps_amp_j_per_bit_m2");
  require_non_negative(c.filter_threshold, "filter_threshold");
  require_non_negative(c.speed_min, "speed_min");
  require(c.speed_max >= c.speed_min, "speed_max", "speed_max must not be below speed_min");
  require_non_negative(c.pause_s, "pause_s");
  require_positive(c.on_s, "on_s");
  require_positive(c.off_s, "off_s");
  require_non_negative(c.rate_pps, "rate_pps");
  require(c.hello_bits > 0, "hello_bits", "hello_bits must be positive");
  require(c.schedule_bits_per_cm > 0, "schedule_bits_per_cm",
          "schedule_bits_per_cm must be positive");
  require(c.heartbeat_bits > 0, "heartbeat_bits", "heartbeat_bits must be positive");
  require(c.dsdv_entry_bits > 0, "dsdv_entry_bits", "dsdv_entry_bits must be positive");
  require_positive(c.dsdv_update_interval_s, "dsdv_update_interval_s");

  const auto duration = SimTime::from_seconds(c.sim_duration_s).micros();
  const auto round = SimTime::from_seconds(c.round_duration_s).micros();
  require(round > 0, "round_duration_s", "round_duration_s must be at least 1 microsecond");
  require(duration % round == 0, "sim_duration_s",
          "sim_duration_s must be an integer multiple of round_duration_s");

  if (c.bs_position) {
    const auto p = *c.bs_position;
    require(p.x >= 0.0 && p.x <= c.field_width_m && p.y >= 0.0 && p.y <= c.field_height_m,
            "bs_position", "bs_position must lie inside the field");
  } else {
    auto rng = RandomStream::derive(c.rng_seed, "bs-placement");
    const double x = rng.uniform01() * c.field_width_m;
    const double y = rng.uniform01() * c.field_height_m;
    c.bs_position = Position{x, y};
  }
  return c;
}

SimConfig parse_config(std::string_view text) {
  SimConfig c;
  std::map<std::string_view, const Field*, std::less<>> lookup;
  for (const auto& [key, field] : field_table()) lookup.emplace(key, &field);

  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config", "line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    const auto it = lookup.find(key);
    if (it == lookup.end()) {
      throw ConfigError(std::string(key), "unknown key '" + std::string(key) + "'");
    }
    it->second->set(c, value);
  }
  return c;
}

std::string serialize_config(const SimConfig& config) {
  std::ostringstream out;
  for (const auto& [key, field] : field_table()) {
    out << key << " = " << field.get(config) << '\n';
  }
  return out.str();
}

SimConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config", "config not found: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::uint32_t round_count(const SimConfig& config) {
  const auto duration = SimTime::from_seconds(config.sim_duration_s).micros();
  const auto round = SimTime::from_seconds(config.round_duration_s).micros();
  return static_cast<std::uint32_t>(duration / round);
}

}  // namespace mleach
