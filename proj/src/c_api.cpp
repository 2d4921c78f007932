#include "mleach/mleach_c.h"

#include <cstring>
#include <filesystem>
#include <string>

#include "mleach/config.hpp"
#include "mleach/metrics.hpp"
#include "mleach/simulation.hpp"

struct mleach_config {
  mleach::SimConfig raw;        // as read, before resolution
  mleach::SimConfig validated;
};

struct mleach_result {
  mleach::RunResult run;
};

namespace {

thread_local std::string g_error;
thread_local std::string g_error_key;

mleach_status fail(mleach_status status, std::string message, std::string key = {}) {
  g_error = std::move(message);
  g_error_key = std::move(key);
  return status;
}

void clear_error() {
  g_error.clear();
  g_error_key.clear();
}

size_t copy_out(const std::string& text, char* buf, size_t cap) {
  if (buf && cap > text.size()) {
    std::memcpy(buf, text.data(), text.size());
    buf[text.size()] = '\0';
  }
  return text.size();
}

template <typename Fn>
mleach_status guarded(Fn&& fn) {
  clear_error();
  try {
    return fn();
  } catch (const mleach::ConfigError& e) {
    const auto status = e.key() == "config" && std::string(e.what()).rfind("config not found", 0) == 0
                            ? MLEACH_ERR_CONFIG_NOT_FOUND
                            : MLEACH_ERR_CONFIG_INVALID;
    return fail(status, e.what(), e.key());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(MLEACH_ERR_IO, e.what());
  } catch (const std::runtime_error& e) {
    return fail(MLEACH_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return fail(MLEACH_ERR_INTERNAL, e.what());
  }
}

mleach_status make_config(const mleach::SimConfig& raw, mleach_config** out) {
  auto validated = mleach::validate_config(raw);
  *out = new mleach_config{raw, std::move(validated)};
  return MLEACH_OK;
}

}  // namespace

extern "C" {

const char* mleach_version(void) { return "1.0.0"; }

const char* mleach_last_error(void) { return g_error.c_str(); }

const char* mleach_last_error_key(void) { return g_error_key.c_str(); }

mleach_status mleach_config_load(const char* path, mleach_config** out) {
  if (!path || !out) return fail(MLEACH_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { return make_config(mleach::load_config_file(path), out); });
}

mleach_status mleach_config_parse(const char* text, mleach_config** out) {
  if (!text || !out) return fail(MLEACH_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { return make_config(mleach::parse_config(text), out); });
}

mleach_config* mleach_config_clone(const mleach_config* config) {
  return config ? new mleach_config(*config) : nullptr;
}

void mleach_config_free(mleach_config* config) { delete config; }

mleach_status mleach_config_set_seed(mleach_config* config, uint64_t seed) {
  if (!config) return fail(MLEACH_ERR_INVALID_ARGUMENT, "null config");
  return guarded([&] {
    auto raw = config->raw;
    raw.rng_seed = seed;
    config->validated = mleach::validate_config(raw);
    config->raw = raw;
    return MLEACH_OK;
  });
}

uint64_t mleach_config_seed(const mleach_config* config) {
  return config ? config->validated.rng_seed : 0;
}

size_t mleach_config_serialize(const mleach_config* config, char* buf, size_t cap) {
  if (!config) return 0;
  return copy_out(mleach::serialize_config(config->validated), buf, cap);
}

mleach_status mleach_run(const mleach_config* config, mleach_protocol protocol,
                         mleach_result** out) {
  if (!config || !out) return fail(MLEACH_ERR_INVALID_ARGUMENT, "null argument");
  if (protocol != MLEACH_PROTOCOL_MLEACH && protocol != MLEACH_PROTOCOL_DSDV) {
    return fail(MLEACH_ERR_INVALID_ARGUMENT, "unknown protocol");
  }
  *out = nullptr;
  return guarded([&] {
    const auto p = protocol == MLEACH_PROTOCOL_MLEACH ? mleach::Protocol::Mleach
                                                      : mleach::Protocol::Dsdv;
    mleach::Simulation sim(config->validated, p);
    *out = new mleach_result{sim.run()};
    return MLEACH_OK;
  });
}

void mleach_result_free(mleach_result* result) { delete result; }

mleach_status mleach_result_summary(const mleach_result* result, mleach_summary* out) {
  if (!result || !out) return fail(MLEACH_ERR_INVALID_ARGUMENT, "null argument");
  clear_error();
  const auto& s = result->run.summary;
  *out = mleach_summary{};
  out->avg_energy_per_node_j = s.avg_energy_per_node_j;
  out->max_energy_per_node_j = s.max_energy_per_node_j;
  out->steady_throughput_pps = s.steady_throughput_pps;
  out->has_first_death = s.first_death_s.has_value() ? 1 : 0;
  out->first_death_s = s.first_death_s.value_or(0.0);
  out->node_count = s.node_count;
  out->generated = s.generated;
  out->delivered = s.delivered;
  out->dropped_filtered = s.dropped_filtered;
  out->dropped_unreachable = s.dropped_unreachable;
  out->dropped_dead = s.dropped_dead;
  out->pending_at_end = s.pending_at_end;
  return MLEACH_OK;
}

mleach_status mleach_result_export_csv(const mleach_result* result, const char* dir) {
  if (!result || !dir) return fail(MLEACH_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    mleach::export_csv(result->run.log, result->run.summary, dir);
    return MLEACH_OK;
  });
}

mleach_status mleach_write_comparison(const mleach_result* mleach_run_result,
                                      const mleach_result* dsdv_run_result, const char* dir) {
  if (!mleach_run_result || !dsdv_run_result || !dir) {
    return fail(MLEACH_ERR_INVALID_ARGUMENT, "null argument");
  }
  if (mleach_run_result->run.protocol != mleach::Protocol::Mleach ||
      dsdv_run_result->run.protocol != mleach::Protocol::Dsdv) {
    return fail(MLEACH_ERR_INVALID_ARGUMENT, "expected an MLEACH result and a DSDV result");
  }
  return guarded([&] {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) return fail(MLEACH_ERR_IO, std::string("cannot create ") + dir + ": " + ec.message());
    const auto c = mleach::compare(mleach_run_result->run.summary, dsdv_run_result->run.summary);
    mleach::write_comparison_csv(c, std::filesystem::path(dir) / "comparison.csv");
    return MLEACH_OK;
  });
}

size_t mleach_format_summary(const mleach_result* const* results, size_t count, char* buf,
                             size_t cap) {
  std::vector<mleach::RunSummary> runs;
  for (size_t i = 0; i < count; ++i) {
    if (results && results[i]) runs.push_back(results[i]->run.summary);
  }
  return copy_out(mleach::format_summary(runs), buf, cap);
}

}  // extern "C"
