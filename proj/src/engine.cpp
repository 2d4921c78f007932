#include "mleach/engine.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mleach {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

SimTime SimTime::from_seconds(double s) {
  return SimTime(static_cast<std::int64_t>(std::llround(s * 1e6)));
}

void EventQueue::schedule(SimTime at, EventKind kind, std::uint32_t a, std::uint32_t b) {
  if (at < now_) {
    throw std::logic_error("event scheduled in the past: t=" + std::to_string(at.seconds()) +
                           " now=" + std::to_string(now_.seconds()));
  }
  heap_.push(Event{at, next_seq_++, kind, a, b});
}

std::uint64_t EventQueue::run_until(SimTime t_end,
                                    const std::function<void(const Event&)>& handler) {
  std::uint64_t processed = 0;
  while (!heap_.empty() && heap_.top().fire_at <= t_end) {
    const Event ev = heap_.top();
    heap_.pop();
    now_ = ev.fire_at;
    handler(ev);
    ++processed;
  }
  return processed;
}

RandomStream RandomStream::derive(std::uint64_t root_seed, std::string_view name,
                                  std::uint64_t index) {
  std::uint64_t s = splitmix64(root_seed);
  s = splitmix64(s ^ fnv1a(name));
  s = splitmix64(s ^ index);
  return RandomStream(s);
}

double RandomStream::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::normal() {
  double u1 = uniform01();
  while (u1 <= 0.0) u1 = uniform01();
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace mleach
