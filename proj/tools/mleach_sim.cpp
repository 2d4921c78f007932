// Command-line runner: runs MLEACH and/or DSDV on a scenario file and writes
// per-protocol CSVs plus a comparison.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mleach/mleach_c.h"

namespace fs = std::filesystem;

namespace {

struct ConfigDeleter {
  void operator()(mleach_config* c) const { mleach_config_free(c); }
};
struct ResultDeleter {
  void operator()(mleach_result* r) const { mleach_result_free(r); }
};
using ConfigPtr = std::unique_ptr<mleach_config, ConfigDeleter>;
using ResultPtr = std::unique_ptr<mleach_result, ResultDeleter>;

struct Failure {
  std::string message;
};

std::string error_text(const char* what) {
  std::string msg = what;
  const std::string key = mleach_last_error_key();
  const std::string detail = mleach_last_error();
  if (!detail.empty()) msg += ": " + detail;
  if (!key.empty() && detail.find(key) == std::string::npos) msg += " (key " + key + ")";
  return msg;
}

// One seed: runs the requested protocols, writes their CSV trees.
struct SeedRun {
  uint64_t seed = 0;
  fs::path dir;
  ResultPtr mleach;
  ResultPtr dsdv;
};

void run_seed(const mleach_config* base, uint64_t seed, const std::vector<mleach_protocol>& protocols,
              SeedRun& out) {
  ConfigPtr cfg(mleach_config_clone(base));
  if (mleach_config_set_seed(cfg.get(), seed) != MLEACH_OK) throw Failure{error_text("seed")};
  out.seed = seed;
  // Protocols are independent simulations; run them side by side.
  auto run_one = [&](mleach_protocol p) {
    mleach_result* raw = nullptr;
    if (mleach_run(cfg.get(), p, &raw) != MLEACH_OK) throw Failure{error_text("run failed")};
    ResultPtr result(raw);
    const char* name = p == MLEACH_PROTOCOL_MLEACH ? "mleach" : "dsdv";
    const auto sub = (out.dir / name).string();
    if (mleach_result_export_csv(result.get(), sub.c_str()) != MLEACH_OK) {
      throw Failure{error_text("cannot write results")};
    }
    return result;
  };
  std::vector<std::future<ResultPtr>> jobs;
  for (const auto p : protocols) jobs.push_back(std::async(std::launch::async, run_one, p));
  for (std::size_t i = 0; i < protocols.size(); ++i) {
    (protocols[i] == MLEACH_PROTOCOL_MLEACH ? out.mleach : out.dsdv) = jobs[i].get();
  }
  if (out.mleach && out.dsdv) {
    const auto d = out.dir.string();
    if (mleach_write_comparison(out.mleach.get(), out.dsdv.get(), d.c_str()) != MLEACH_OK) {
      throw Failure{error_text("cannot write comparison")};
    }
  }
}

std::string summary_text(const SeedRun& run) {
  std::vector<const mleach_result*> results;
  if (run.mleach) results.push_back(run.mleach.get());
  if (run.dsdv) results.push_back(run.dsdv.get());
  const size_t need = mleach_format_summary(results.data(), results.size(), nullptr, 0);
  std::string text(need + 1, '\0');
  mleach_format_summary(results.data(), results.size(), text.data(), text.size());
  text.resize(need);
  return text;
}

struct Stat {
  double mean = 0.0;
  double stddev = 0.0;
};

Stat stat_of(const std::vector<double>& v) {
  Stat s;
  if (v.empty()) return s;
  for (double x : v) s.mean += x;
  s.mean /= static_cast<double>(v.size());
  if (v.size() > 1) {
    double acc = 0.0;
    for (double x : v) acc += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(acc / static_cast<double>(v.size() - 1));
  }
  return s;
}

// Mean and sample standard deviation over the seeds, per protocol.
std::string write_batch_summary(const std::vector<SeedRun>& runs, const fs::path& file) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw Failure{"cannot write " + file.string()};
  out << "protocol,metric,mean,stddev,runs\n";
  std::string text = "batch over " + std::to_string(runs.size()) + " seeds (mean +- stddev)\n";
  char line[256];
  for (const char* name : {"mleach", "dsdv"}) {
    std::vector<double> thr, avg, mx;
    for (const auto& r : runs) {
      const auto* res = std::string(name) == "mleach" ? r.mleach.get() : r.dsdv.get();
      if (!res) continue;
      mleach_summary s{};
      mleach_result_summary(res, &s);
      thr.push_back(s.steady_throughput_pps);
      avg.push_back(s.avg_energy_per_node_j);
      mx.push_back(s.max_energy_per_node_j);
    }
    if (thr.empty()) continue;
    const std::pair<const char*, Stat> rows[] = {{"steady_throughput_pps", stat_of(thr)},
                                                 {"avg_energy_per_node_j", stat_of(avg)},
                                                 {"max_energy_per_node_j", stat_of(mx)}};
    for (const auto& [metric, st] : rows) {
      std::snprintf(line, sizeof line, "%s,%s,%.17g,%.17g,%zu\n", name, metric, st.mean, st.stddev,
                    thr.size());
      out << line;
      std::snprintf(line, sizeof line, "%-8s %-24s %14.6f +- %.6f\n", name, metric, st.mean,
                    st.stddev);
      text += line;
    }
  }
  if (!out.flush()) throw Failure{"cannot write " + file.string()};
  return text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flood-field WSN simulator: MLEACH vs DSDV"};
  std::string config_path;
  std::string protocol = "both";
  std::string out_dir;
  std::optional<uint64_t> seed;
  unsigned repeat = 1;

  app.add_option("--config", config_path, "Scenario file (key = value)")->required();
  app.add_option("--protocol", protocol, "Protocol to run")
      ->check(CLI::IsMember({"mleach", "dsdv", "both"}));
  app.add_option("--out", out_dir, "Output directory (default: $MLEACH_SIM_OUT or ./results)");
  app.add_option("--seed", seed, "Override rng_seed");
  app.add_option("--repeat", repeat, "Number of seed-varied runs")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  if (out_dir.empty()) {
    const char* env = std::getenv("MLEACH_SIM_OUT");
    out_dir = env && *env ? env : "results";
  }

  try {
    if (!fs::exists(config_path)) throw Failure{"config not found: " + config_path};
    mleach_config* raw = nullptr;
    if (mleach_config_load(config_path.c_str(), &raw) != MLEACH_OK) {
      throw Failure{error_text("invalid config")};
    }
    ConfigPtr config(raw);
    if (seed && mleach_config_set_seed(config.get(), *seed) != MLEACH_OK) {
      throw Failure{error_text("invalid seed")};
    }

    std::vector<mleach_protocol> protocols;
    if (protocol != "dsdv") protocols.push_back(MLEACH_PROTOCOL_MLEACH);
    if (protocol != "mleach") protocols.push_back(MLEACH_PROTOCOL_DSDV);

    const uint64_t base_seed = mleach_config_seed(config.get());
    const fs::path root(out_dir);
    std::vector<SeedRun> runs(repeat);
    std::vector<std::future<void>> jobs;
    for (unsigned i = 0; i < repeat; ++i) {
      runs[i].dir = repeat == 1 ? root : root / ("seed_" + std::to_string(base_seed + i));
      jobs.push_back(std::async(std::launch::async, [&, i] {
        run_seed(config.get(), base_seed + i, protocols, runs[i]);
      }));
    }
    for (auto& j : jobs) j.get();

    for (const auto& r : runs) {
      if (repeat > 1) std::printf("seed %llu\n", static_cast<unsigned long long>(r.seed));
      std::fputs(summary_text(r).c_str(), stdout);
    }
    if (repeat > 1) std::fputs(write_batch_summary(runs, root / "batch_summary.csv").c_str(), stdout);
    std::printf("results written to %s\n", root.string().c_str());
  } catch (const Failure& f) {
    std::fprintf(stderr, "error: %s\n", f.message.c_str());
    return 1;
  }
  return 0;
}
