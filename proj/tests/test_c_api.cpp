// Uses the public C header and the shared library only.
#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mleach/mleach_c.h"

namespace fs = std::filesystem;

namespace {

const char* kSmall =
    "node_count = 48\n"
    "field_width_m = 3000\n"
    "field_height_m = 3000\n"
    "sim_duration_s = 30\n"
    "rng_seed = 5\n";

struct Config {
  mleach_config* p = nullptr;
  ~Config() { mleach_config_free(p); }
};
struct Result {
  mleach_result* p = nullptr;
  ~Result() { mleach_result_free(p); }
};

std::string serialize(const mleach_config* c) {
  const size_t n = mleach_config_serialize(c, nullptr, 0);
  std::string s(n + 1, '\0');
  CHECK(mleach_config_serialize(c, s.data(), s.size()) == n);
  s.resize(n);
  return s;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("version and clean error state") {
  CHECK(std::strlen(mleach_version()) > 0);
  Config c;
  REQUIRE(mleach_config_parse(kSmall, &c.p) == MLEACH_OK);
  CHECK(std::string(mleach_last_error()).empty());
}

TEST_CASE("argument and config errors") {
  mleach_config* c = nullptr;
  CHECK(mleach_config_parse(nullptr, &c) == MLEACH_ERR_INVALID_ARGUMENT);
  CHECK(mleach_config_load("/no/such/file.cfg", &c) == MLEACH_ERR_CONFIG_NOT_FOUND);
  CHECK(std::string(mleach_last_error()).find("config not found") != std::string::npos);
  CHECK(c == nullptr);

  CHECK(mleach_config_parse("node_count = 0\n", &c) == MLEACH_ERR_CONFIG_INVALID);
  CHECK(std::string(mleach_last_error()) == "node_count must be positive");
  CHECK(std::string(mleach_last_error_key()) == "node_count");
  CHECK(mleach_config_parse("cluster_radius_rc_m = 500\nradio_range_rr_m = 300\n", &c) ==
        MLEACH_ERR_CONFIG_INVALID);
  CHECK(std::string(mleach_last_error()) == "Rc must not exceed Rr");
  CHECK(mleach_config_parse("warp_factor = 9\n", &c) == MLEACH_ERR_CONFIG_INVALID);
  CHECK(std::string(mleach_last_error_key()) == "warp_factor");

  mleach_result* r = nullptr;
  CHECK(mleach_run(nullptr, MLEACH_PROTOCOL_MLEACH, &r) == MLEACH_ERR_INVALID_ARGUMENT);
  Config ok;
  REQUIRE(mleach_config_parse(kSmall, &ok.p) == MLEACH_OK);
  CHECK(mleach_run(ok.p, static_cast<mleach_protocol>(7), &r) == MLEACH_ERR_INVALID_ARGUMENT);
  CHECK(mleach_config_set_seed(nullptr, 1) == MLEACH_ERR_INVALID_ARGUMENT);
  mleach_summary s;
  CHECK(mleach_result_summary(nullptr, &s) == MLEACH_ERR_INVALID_ARGUMENT);
  mleach_config_free(nullptr);
  mleach_result_free(nullptr);
}

TEST_CASE("seed changes resolve a new base-station position") {
  Config c;
  REQUIRE(mleach_config_parse(kSmall, &c.p) == MLEACH_OK);
  CHECK(mleach_config_seed(c.p) == 5);
  const auto before = serialize(c.p);
  Config copy;
  copy.p = mleach_config_clone(c.p);
  REQUIRE(mleach_config_set_seed(copy.p, 6) == MLEACH_OK);
  CHECK(mleach_config_seed(copy.p) == 6);
  const auto after = serialize(copy.p);
  CHECK(before != after);
  CHECK(serialize(c.p) == before);
  CHECK(before.find("bs_position = random") == std::string::npos);

  // The serialized form is itself a loadable config.
  Config again;
  REQUIRE(mleach_config_parse(before.c_str(), &again.p) == MLEACH_OK);
  CHECK(serialize(again.p) == before);
}

TEST_CASE("paired runs, summaries and exports") {
  Config c;
  REQUIRE(mleach_config_parse(kSmall, &c.p) == MLEACH_OK);
  Result m, d;
  REQUIRE(mleach_run(c.p, MLEACH_PROTOCOL_MLEACH, &m.p) == MLEACH_OK);
  REQUIRE(mleach_run(c.p, MLEACH_PROTOCOL_DSDV, &d.p) == MLEACH_OK);
  mleach_summary sm, sd;
  REQUIRE(mleach_result_summary(m.p, &sm) == MLEACH_OK);
  REQUIRE(mleach_result_summary(d.p, &sd) == MLEACH_OK);
  CHECK(sm.node_count == 48);
  CHECK(sm.generated == sd.generated);
  CHECK(sm.generated == sm.delivered + sm.dropped_filtered + sm.dropped_unreachable +
                            sm.dropped_dead + sm.pending_at_end);
  CHECK(sd.generated == sd.delivered + sd.dropped_filtered + sd.dropped_unreachable +
                            sd.dropped_dead + sd.pending_at_end);

  const auto dir = fs::temp_directory_path() / "mleach-c-api-test";
  fs::remove_all(dir);
  REQUIRE(mleach_result_export_csv(m.p, (dir / "mleach").c_str()) == MLEACH_OK);
  REQUIRE(mleach_result_export_csv(d.p, (dir / "dsdv").c_str()) == MLEACH_OK);
  REQUIRE(mleach_write_comparison(m.p, d.p, dir.c_str()) == MLEACH_OK);
  CHECK(mleach_write_comparison(d.p, m.p, dir.c_str()) == MLEACH_ERR_INVALID_ARGUMENT);
  for (const char* f : {"energy.csv", "throughput.csv", "rounds.csv", "summary.csv"}) {
    CHECK(fs::exists(dir / "mleach" / f));
    CHECK(fs::exists(dir / "dsdv" / f));
  }
  CHECK(slurp(dir / "comparison.csv").rfind("metric,mleach,dsdv,ratio\n", 0) == 0);

  Result m2;
  REQUIRE(mleach_run(c.p, MLEACH_PROTOCOL_MLEACH, &m2.p) == MLEACH_OK);
  REQUIRE(mleach_result_export_csv(m2.p, (dir / "again").c_str()) == MLEACH_OK);
  for (const char* f : {"energy.csv", "throughput.csv", "rounds.csv", "summary.csv"}) {
    CHECK(slurp(dir / "mleach" / f) == slurp(dir / "again" / f));
  }

  const mleach_result* both[] = {m.p, d.p};
  const size_t need = mleach_format_summary(both, 2, nullptr, 0);
  std::string text(need + 1, '\0');
  CHECK(mleach_format_summary(both, 2, text.data(), text.size()) == need);
  text.resize(need);
  CHECK(text.find("mleach") != std::string::npos);
  CHECK(text.find("dsdv") != std::string::npos);
  CHECK(text.find("ratio") != std::string::npos);

  char tiny[4] = {'x', 'x', 'x', 'x'};
  CHECK(mleach_format_summary(both, 2, tiny, sizeof tiny) == need);
  CHECK(tiny[0] == 'x');

  CHECK(mleach_result_export_csv(m.p, "/proc/forbidden/dir") == MLEACH_ERR_IO);
  CHECK(std::string(mleach_last_error()).size() > 0);
}
