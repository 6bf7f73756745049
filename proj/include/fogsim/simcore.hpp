#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <queue>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fogsim {

/// Simulation time in milliseconds.
using SimTime = double;

/// Raised when a caller breaks an operation's precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline void require(bool condition, const char* what) {
  if (!condition) throw ContractViolation(what);
}

struct EventHandle {
  std::uint64_t seq = 0;
};

/**
 * Pending-event set ordered by (fire_at, seq).
 *
 * seq is assigned at schedule time, so events sharing a timestamp pop in
 * insertion order. The queue owns the simulation clock: pop_next() moves it
 * to the popped event's time and schedule() refuses times behind it.
 */
template <typename Payload>
class EventQueue {
 public:
  struct Event {
    SimTime fire_at;
    std::uint64_t seq;
    Payload payload;
  };

  EventHandle schedule(SimTime at, Payload payload) {
    require(std::isfinite(at), "EventQueue::schedule: time must be finite");
    require(at >= now_, "EventQueue::schedule: time is in the past");
    const std::uint64_t seq = next_seq_++;
    pending_.push(Event{at, seq, std::move(payload)});
    return EventHandle{seq};
  }

  std::optional<Event> pop_next() {
    if (pending_.empty()) return std::nullopt;
    Event ev = pending_.top();
    pending_.pop();
    now_ = ev.fire_at;
    return ev;
  }

  std::optional<SimTime> peek_time() const {
    if (pending_.empty()) return std::nullopt;
    return pending_.top().fire_at;
  }

  SimTime now() const { return now_; }
  std::size_t size() const { return pending_.size(); }
  bool empty() const { return pending_.empty(); }

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.fire_at != b.fire_at) return a.fire_at > b.fire_at;
      return a.seq > b.seq;
    }
  };

  std::priority_queue<Event, std::vector<Event>, Later> pending_;
  SimTime now_ = 0.0;
  std::uint64_t next_seq_ = 0;
};

/**
 * Seeded random stream backed by std::mt19937_64.
 *
 * The engine's state transition is fixed by the C++ standard. Real-valued
 * draws are built from the raw 64-bit output here rather than through
 * <random> distributions, whose algorithms are implementation-defined, so a
 * seed reproduces the same values on every conforming toolchain.
 */
class RngStream {
 public:
  static constexpr std::string_view kAlgorithm = "mt19937_64";

  explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double next_unit();

  /// Uniform on the open interval (0, 1).
  double next_open_unit();

  /// Uniform on [lo, hi). Requires lo < hi.
  double next_uniform(double lo, double hi);

  /// Exponential with the given rate (mean 1/rate). Always > 0.
  double next_exponential(double rate);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer; used to derive independent seeds.
std::uint64_t mix64(std::uint64_t x);

/// Seed for substream `index` of a parent seed.
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index);

/// Canonical 64-bit key for a real-valued parameter (treats -0.0 as 0.0).
std::uint64_t value_key(double value);

}  // namespace fogsim
