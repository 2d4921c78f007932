/*
 * C interface to the flood-field WSN simulator.
 *
 * All handles are opaque. Functions returning mleach_status set a
 * thread-local message readable through mleach_last_error() on failure.
 */
#ifndef MLEACH_MLEACH_C_H_
#define MLEACH_MLEACH_C_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(MLEACH_BUILDING_LIBRARY)
#    define MLEACH_API __declspec(dllexport)
#  else
#    define MLEACH_API __declspec(dllimport)
#  endif
#else
#  define MLEACH_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mleach_status {
  MLEACH_OK = 0,
  MLEACH_ERR_INVALID_ARGUMENT = 1,
  MLEACH_ERR_CONFIG_NOT_FOUND = 2,
  MLEACH_ERR_CONFIG_INVALID = 3,
  MLEACH_ERR_IO = 4,
  MLEACH_ERR_INTERNAL = 5
} mleach_status;

typedef enum mleach_protocol {
  MLEACH_PROTOCOL_MLEACH = 0,
  MLEACH_PROTOCOL_DSDV = 1
} mleach_protocol;

typedef struct mleach_config mleach_config;
typedef struct mleach_result mleach_result;

typedef struct mleach_summary {
  double avg_energy_per_node_j;
  double max_energy_per_node_j;
  double steady_throughput_pps;
  double first_death_s;      /* valid only when has_first_death != 0 */
  int has_first_death;
  uint32_t node_count;
  uint64_t generated;
  uint64_t delivered;
  uint64_t dropped_filtered;
  uint64_t dropped_unreachable;
  uint64_t dropped_dead;
  uint64_t pending_at_end;
} mleach_summary;

MLEACH_API const char* mleach_version(void);

/* Message for the last failed call on this thread; empty if none. */
MLEACH_API const char* mleach_last_error(void);
/* Config key named by the last config error on this thread; empty if none. */
MLEACH_API const char* mleach_last_error_key(void);

/* Loads and validates a `key = value` config file. */
MLEACH_API mleach_status mleach_config_load(const char* path, mleach_config** out);
/* Parses and validates config text. */
MLEACH_API mleach_status mleach_config_parse(const char* text, mleach_config** out);
MLEACH_API mleach_config* mleach_config_clone(const mleach_config* config);
MLEACH_API void mleach_config_free(mleach_config* config);

/* Replaces the seed and re-resolves a random base-station position. */
MLEACH_API mleach_status mleach_config_set_seed(mleach_config* config, uint64_t seed);
MLEACH_API uint64_t mleach_config_seed(const mleach_config* config);

/* Writes the normalized config text into buf. Returns the length needed,
 * excluding the terminator; nothing is written when cap is too small. */
MLEACH_API size_t mleach_config_serialize(const mleach_config* config, char* buf, size_t cap);

/* Runs one protocol to completion. */
MLEACH_API mleach_status mleach_run(const mleach_config* config, mleach_protocol protocol,
                                    mleach_result** out);
MLEACH_API void mleach_result_free(mleach_result* result);

MLEACH_API mleach_status mleach_result_summary(const mleach_result* result, mleach_summary* out);

/* Writes energy.csv, throughput.csv, rounds.csv and summary.csv into dir
 * (created). */
MLEACH_API mleach_status mleach_result_export_csv(const mleach_result* result, const char* dir);

/* Writes comparison.csv into dir from a paired MLEACH and DSDV run. */
MLEACH_API mleach_status mleach_write_comparison(const mleach_result* mleach_run_result,
                                                 const mleach_result* dsdv_run_result,
                                                 const char* dir);

/* Human-readable summary table of the given runs (ratios when both
 * protocols are present). Same size convention as mleach_config_serialize. */
MLEACH_API size_t mleach_format_summary(const mleach_result* const* results, size_t count,
                                        char* buf, size_t cap);

#ifdef __cplusplus
}
#endif

#endif /* MLEACH_MLEACH_C_H_ */
