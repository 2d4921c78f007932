#include "mleach/metrics.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mleach {

void record_bs_rx(MetricsLog& log, double t_s) {
  const auto bucket = static_cast<std::size_t>(std::floor(t_s));
  if (bucket >= log.bs_rx.size()) log.bs_rx.resize(bucket + 1, 0);
  ++log.bs_rx[bucket];
  ++log.delivered;
}

double steady_state_throughput(const MetricsLog& log, double t_start_s) {
  const auto first = static_cast<std::size_t>(std::ceil(std::max(0.0, t_start_s)));
  if (first >= log.bs_rx.size()) {
    throw std::invalid_argument("steady_state_throughput: empty window");
  }
  std::uint64_t sum = 0;
  for (std::size_t t = first; t < log.bs_rx.size(); ++t) sum += log.bs_rx[t];
  return static_cast<double>(sum) / static_cast<double>(log.bs_rx.size() - first);
}

double energy_linearity_r2(const MetricsLog& log, double t_from_s, double t_to_s) {
  std::vector<const EnergySample*> window;
  for (const auto& s : log.energy_series) {
    if (s.t_s >= t_from_s && s.t_s <= t_to_s) window.push_back(&s);
  }
  if (window.size() < 2) return 0.0;
  // Two passes: centring first keeps large energy totals from cancelling.
  const auto n = static_cast<double>(window.size());
  double mx = 0, my = 0;
  for (const auto* s : window) {
    mx += s->t_s;
    my += s->total_j;
  }
  mx /= n;
  my /= n;
  double vx = 0, vy = 0, cxy = 0;
  for (const auto* s : window) {
    const double dx = s->t_s - mx;
    const double dy = s->total_j - my;
    vx += dx * dx;
    vy += dy * dy;
    cxy += dx * dy;
  }
  if (vy <= 0.0) return 1.0;
  if (vx <= 0.0) return 0.0;
  return (cxy * cxy) / (vx * vy);
}

RunSummary summarize(const MetricsLog& log, const std::string& protocol, std::uint32_t node_count,
                     double steady_start_s) {
  RunSummary s;
  s.protocol = protocol;
  s.node_count = node_count;
  if (!log.energy_series.empty()) {
    const auto& last = log.energy_series.back();
    s.avg_energy_per_node_j = node_count ? last.total_j / node_count : 0.0;
    s.max_energy_per_node_j = last.max_node_j;
  }
  if (static_cast<double>(log.bs_rx.size()) > steady_start_s) {
    s.steady_throughput_pps = steady_state_throughput(log, steady_start_s);
  }
  s.first_death_s = log.first_death_s;
  s.generated = log.generated;
  s.delivered = log.delivered;
  s.dropped_filtered = log.dropped_filtered;
  s.dropped_unreachable = log.dropped_unreachable;
  s.dropped_dead = log.dropped_dead;
  s.pending_at_end = log.pending_at_end;
  return s;
}

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

namespace {

std::ofstream open_for_write(const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& file) {
  out.flush();
  if (!out) throw std::runtime_error("cannot write " + file.string());
}

std::string optional_number(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string();
}

constexpr const char* kSummaryHeader =
    "protocol,node_count,avg_energy_per_node_j,max_energy_per_node_j,steady_throughput_pps,"
    "first_death_s,generated,delivered,dropped_filtered,dropped_unreachable,dropped_dead,"
    "pending_at_end";

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double to_double(const std::string& s) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{}) throw std::runtime_error("bad number in summary.csv: " + s);
  return v;
}

std::uint64_t to_u64(const std::string& s) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{}) throw std::runtime_error("bad integer in summary.csv: " + s);
  return v;
}

}  // namespace

void export_csv(const MetricsLog& log, const RunSummary& summary, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());

  {
    const auto file = dir / "energy.csv";
    auto out = open_for_write(file);
    out << "t_s,total_j,max_node_j\n";
    for (const auto& s : log.energy_series) {
      out << format_number(s.t_s) << ',' << format_number(s.total_j) << ','
          << format_number(s.max_node_j) << '\n';
    }
    finish(out, file);
  }
  {
    const auto file = dir / "throughput.csv";
    auto out = open_for_write(file);
    out << "t_s,packets\n";
    for (std::size_t t = 0; t < log.bs_rx.size(); ++t) out << t << ',' << log.bs_rx[t] << '\n';
    finish(out, file);
  }
  {
    const auto file = dir / "rounds.csv";
    auto out = open_for_write(file);
    out << "round,t_s,alive,cluster_heads\n";
    for (std::size_t i = 0; i < log.alive_series.size(); ++i) {
      const auto& a = log.alive_series[i];
      const auto ch = i < log.ch_count_series.size() ? log.ch_count_series[i].value : 0;
      out << a.round << ',' << format_number(a.t_s) << ',' << a.value << ',' << ch << '\n';
    }
    finish(out, file);
  }
  {
    const auto file = dir / "summary.csv";
    auto out = open_for_write(file);
    out << kSummaryHeader << '\n';
    out << summary.protocol << ',' << summary.node_count << ','
        << format_number(summary.avg_energy_per_node_j) << ','
        << format_number(summary.max_energy_per_node_j) << ','
        << format_number(summary.steady_throughput_pps) << ','
        << optional_number(summary.first_death_s) << ',' << summary.generated << ','
        << summary.delivered << ',' << summary.dropped_filtered << ','
        << summary.dropped_unreachable << ',' << summary.dropped_dead << ','
        << summary.pending_at_end << '\n';
    finish(out, file);
  }
}

RunSummary read_summary_csv(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + file.string());
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  if (header != kSummaryHeader) throw std::runtime_error("unexpected header in " + file.string());
  const auto cells = split_csv(row);
  if (cells.size() != 12) throw std::runtime_error("malformed row in " + file.string());
  RunSummary s;
  s.protocol = cells[0];
  s.node_count = static_cast<std::uint32_t>(to_u64(cells[1]));
  s.avg_energy_per_node_j = to_double(cells[2]);
  s.max_energy_per_node_j = to_double(cells[3]);
  s.steady_throughput_pps = to_double(cells[4]);
  if (!cells[5].empty()) s.first_death_s = to_double(cells[5]);
  s.generated = to_u64(cells[6]);
  s.delivered = to_u64(cells[7]);
  s.dropped_filtered = to_u64(cells[8]);
  s.dropped_unreachable = to_u64(cells[9]);
  s.dropped_dead = to_u64(cells[10]);
  s.pending_at_end = to_u64(cells[11]);
  return s;
}

Comparison compare(const RunSummary& mleach, const RunSummary& dsdv) {
  Comparison c{mleach, dsdv, {}, {}, {}};
  if (dsdv.steady_throughput_pps > 0.0) {
    c.throughput_ratio = mleach.steady_throughput_pps / dsdv.steady_throughput_pps;
  }
  if (dsdv.max_energy_per_node_j > 0.0) {
    c.max_energy_ratio = mleach.max_energy_per_node_j / dsdv.max_energy_per_node_j;
  }
  if (dsdv.avg_energy_per_node_j > 0.0) {
    c.avg_energy_ratio = mleach.avg_energy_per_node_j / dsdv.avg_energy_per_node_j;
  }
  return c;
}

void write_comparison_csv(const Comparison& c, const std::filesystem::path& file) {
  auto out = open_for_write(file);
  out << "metric,mleach,dsdv,ratio\n";
  out << "steady_throughput_pps," << format_number(c.mleach.steady_throughput_pps) << ','
      << format_number(c.dsdv.steady_throughput_pps) << ',' << optional_number(c.throughput_ratio)
      << '\n';
  out << "max_energy_per_node_j," << format_number(c.mleach.max_energy_per_node_j) << ','
      << format_number(c.dsdv.max_energy_per_node_j) << ',' << optional_number(c.max_energy_ratio)
      << '\n';
  out << "avg_energy_per_node_j," << format_number(c.mleach.avg_energy_per_node_j) << ','
      << format_number(c.dsdv.avg_energy_per_node_j) << ',' << optional_number(c.avg_energy_ratio)
      << '\n';
  out << "first_death_s," << optional_number(c.mleach.first_death_s) << ','
      << optional_number(c.dsdv.first_death_s) << ",\n";
  finish(out, file);
}

std::string format_summary(const std::vector<RunSummary>& runs) {
  std::string text;
  char line[256];
  std::snprintf(line, sizeof line, "%-8s %14s %14s %12s %10s %10s %10s %10s %10s\n", "protocol",
                "avg_energy_J", "max_energy_J", "thru_pps", "delivered", "filtered",
                "unreach", "dead", "1st_death");
  text += line;
  for (const auto& r : runs) {
    const std::string death = r.first_death_s ? format_number(*r.first_death_s) : "-";
    std::snprintf(line, sizeof line, "%-8s %14.6f %14.6f %12.3f %10llu %10llu %10llu %10llu %10s\n",
                  r.protocol.c_str(), r.avg_energy_per_node_j, r.max_energy_per_node_j,
                  r.steady_throughput_pps, static_cast<unsigned long long>(r.delivered),
                  static_cast<unsigned long long>(r.dropped_filtered),
                  static_cast<unsigned long long>(r.dropped_unreachable),
                  static_cast<unsigned long long>(r.dropped_dead), death.c_str());
    text += line;
  }
  const RunSummary* ml = nullptr;
  const RunSummary* ds = nullptr;
  for (const auto& r : runs) {
    if (r.protocol == "mleach") ml = &r;
    if (r.protocol == "dsdv") ds = &r;
  }
  if (ml && ds) {
    const auto c = compare(*ml, *ds);
    auto ratio = [](const std::optional<double>& v) {
      char b[32];
      if (!v) return std::string("n/a");
      std::snprintf(b, sizeof b, "%.3f", *v);
      return std::string(b);
    };
    text += "ratio mleach/dsdv: throughput " + ratio(c.throughput_ratio) + ", max energy " +
            ratio(c.max_energy_ratio) + ", avg energy " + ratio(c.avg_energy_ratio) + "\n";
  }
  return text;
}

}  // namespace mleach
