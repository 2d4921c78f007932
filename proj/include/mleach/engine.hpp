#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <random>
#include <string_view>
#include <vector>

namespace mleach {

/// Simulation time in whole microseconds.
class SimTime {
 public:
  constexpr SimTime() = default;
  static constexpr SimTime from_micros(std::int64_t us) { return SimTime(us); }
  static SimTime from_seconds(double s);

  constexpr std::int64_t micros() const { return us_; }
  constexpr double seconds() const { return static_cast<double>(us_) * 1e-6; }

  constexpr auto operator<=>(const SimTime&) const = default;
  constexpr SimTime operator+(SimTime other) const { return SimTime(us_ + other.us_); }

 private:
  constexpr explicit SimTime(std::int64_t us) : us_(us) {}
  std::int64_t us_ = 0;
};

enum class EventKind : std::uint8_t {
  RoundStart,
  SlotStart,
  RoundFlush,
  MetricSample,
  DsdvPeriodicUpdate,
  SimEnd,
};

struct Event {
  SimTime fire_at;
  std::uint64_t seq = 0;
  EventKind kind = EventKind::SimEnd;
  // Kind-specific: node index for DSDV updates and slots, cluster index for slots.
  std::uint32_t a = 0;
  std::uint32_t b = 0;
};

/// Time-ordered queue with FIFO tie-break on insertion order.
class EventQueue {
 public:
  /// Throws std::logic_error if `at` is earlier than the current clock.
  void schedule(SimTime at, EventKind kind, std::uint32_t a = 0, std::uint32_t b = 0);

  /// Processes events in (time, seq) order while fire time <= t_end.
  /// Returns the number of events processed.
  std::uint64_t run_until(SimTime t_end, const std::function<void(const Event&)>& handler);

  SimTime now() const { return now_; }
  std::size_t size() const { return heap_.size(); }
  bool empty() const { return heap_.empty(); }

 private:
  struct Later {
    bool operator()(const Event& l, const Event& r) const {
      if (l.fire_at != r.fire_at) return l.fire_at > r.fire_at;
      return l.seq > r.seq;
    }
  };

  std::priority_queue<Event, std::vector<Event>, Later> heap_;
  SimTime now_;
  std::uint64_t next_seq_ = 0;
};

/// Seeded random stream. Uses mt19937_64 (fully specified by the standard)
/// and hand-rolled variate transforms so sequences are identical on every
/// platform.
class RandomStream {
 public:
  RandomStream() = default;
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Independent stream for a named purpose, e.g. "election".
  static RandomStream derive(std::uint64_t root_seed, std::string_view name,
                             std::uint64_t index = 0);

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform in [0, 1).
  double uniform01();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  /// Standard normal via Box-Muller.
  double normal();

 private:
  std::mt19937_64 engine_{0};
};

}  // namespace mleach
