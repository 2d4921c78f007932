#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mleach/engine.hpp"
#include "mleach/metrics.hpp"
#include "oracles.hpp"

using namespace mleach;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const char* name) {
  auto dir = fs::temp_directory_path() / "mleach-metrics-test" / name;
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("half-open one-second buckets") {
  MetricsLog log;
  record_bs_rx(log, 4.2);
  record_bs_rx(log, 4.9);
  record_bs_rx(log, 5.0);
  CHECK(log.bs_rx[4] == 2);
  CHECK(log.bs_rx[5] == 1);
  CHECK(log.delivered == 3);
  std::uint64_t sum = 0;
  for (auto b : log.bs_rx) sum += b;
  CHECK(sum == log.delivered);
}

TEST_CASE("steady-state throughput") {
  MetricsLog log;
  log.bs_rx = {0, 0, 10, 10};
  CHECK(steady_state_throughput(log, 2) == 10.0);
  CHECK(steady_state_throughput(log, 0) == 5.0);
  MetricsLog zeros;
  zeros.bs_rx.assign(120, 0);
  CHECK(steady_state_throughput(zeros, 20) == 0.0);
  CHECK_THROWS_AS(steady_state_throughput(MetricsLog{}, 20), std::invalid_argument);
}

TEST_CASE("linearity against a long-double oracle") {
  MetricsLog log;
  std::vector<double> xs, ys;
  auto rng = RandomStream::derive(4, "r2");
  double total = 1e6;
  for (int t = 1; t <= 120; ++t) {
    total += 5000 + rng.uniform(-3000, 3000);
    log.energy_series.push_back({double(t), total, 0});
    if (t >= 20) {
      xs.push_back(t);
      ys.push_back(total);
    }
  }
  const double got = energy_linearity_r2(log, 20, 120);
  CHECK(got == doctest::Approx(oracle::r_squared(xs, ys)).epsilon(1e-12));
  CHECK(got > 0.99);

  MetricsLog flat;
  for (int t = 1; t <= 120; ++t) flat.energy_series.push_back({double(t), 7.0, 0});
  CHECK(energy_linearity_r2(flat, 20, 120) == 1.0);

  MetricsLog line;
  for (int t = 1; t <= 120; ++t) line.energy_series.push_back({double(t), 3.0 * t + 1, 0});
  CHECK(energy_linearity_r2(line, 20, 120) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("number formatting is shortest round-trip") {
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(120.0) == "120");
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(5.12e-3) == "0.00512");
  CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("empty log exports headers only") {
  const auto dir = scratch("empty");
  MetricsLog log;
  export_csv(log, summarize(log, "mleach", 0), dir);
  CHECK(slurp(dir / "energy.csv") == "t_s,total_j,max_node_j\n");
  CHECK(slurp(dir / "throughput.csv") == "t_s,packets\n");
  CHECK(slurp(dir / "rounds.csv") == "round,t_s,alive,cluster_heads\n");
  const auto back = read_summary_csv(dir / "summary.csv");
  CHECK(back.protocol == "mleach");
  CHECK(back.steady_throughput_pps == 0.0);
  CHECK_FALSE(back.first_death_s);
}

TEST_CASE("export is deterministic and round-trips the summary") {
  MetricsLog log;
  for (int t = 1; t <= 120; ++t) log.energy_series.push_back({double(t), t * 1.1, t * 0.01});
  for (int t = 0; t < 120; ++t) record_bs_rx(log, t + 0.5);
  log.alive_series.push_back({0, 0.0, 5});
  log.ch_count_series.push_back({0, 0.0, 1});
  log.generated = 200;
  log.dropped_filtered = 80;
  log.first_death_s = 17.25;
  const auto summary = summarize(log, "dsdv", 5);
  CHECK(summary.steady_throughput_pps == 1.0);
  CHECK(summary.avg_energy_per_node_j == doctest::Approx(132.0 / 5));

  const auto a = scratch("a");
  const auto b = scratch("b");
  export_csv(log, summary, a);
  export_csv(log, summary, b);
  for (const char* f : {"energy.csv", "throughput.csv", "rounds.csv", "summary.csv"}) {
    CHECK(slurp(a / f) == slurp(b / f));
  }
  CHECK(read_summary_csv(a / "summary.csv") == summary);

  std::istringstream energy(slurp(a / "energy.csv"));
  std::string line;
  int rows = -1;
  while (std::getline(energy, line)) ++rows;
  CHECK(rows == 120);
  CHECK(slurp(a / "energy.csv").find('\r') == std::string::npos);
}

TEST_CASE("comparison ratios") {
  RunSummary m, d;
  m.protocol = "mleach";
  d.protocol = "dsdv";
  m.steady_throughput_pps = 400;
  d.steady_throughput_pps = 200;
  m.max_energy_per_node_j = 0.836;
  d.max_energy_per_node_j = 0.819;
  const auto c = compare(m, d);
  REQUIRE(c.throughput_ratio);
  CHECK(*c.throughput_ratio == 2.0);
  CHECK(*c.max_energy_ratio == doctest::Approx(1.0208).epsilon(1e-4));
  CHECK_FALSE(c.avg_energy_ratio);

  const auto text = format_summary({m, d});
  CHECK(text.find("mleach") != std::string::npos);
  CHECK(text.find("throughput 2") != std::string::npos);
  CHECK(format_summary({m}).find("ratio") == std::string::npos);

  RunSummary idle;
  idle.protocol = "dsdv";
  const auto z = compare(m, idle);
  CHECK_FALSE(z.throughput_ratio);
  CHECK(format_summary({m, idle}).find("0.000") != std::string::npos);

  const auto dir = scratch("cmp");
  fs::create_directories(dir);
  write_comparison_csv(c, dir / "comparison.csv");
  const auto csv = slurp(dir / "comparison.csv");
  CHECK(csv.rfind("metric,mleach,dsdv,ratio\n", 0) == 0);
  CHECK(csv.find("steady_throughput_pps,400,200,2\n") != std::string::npos);
}

}  // TEST_SUITE
