#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <random>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace oceansim {

/// Simulated time in seconds.
using SimTime = double;

using NodeId = std::uint32_t;

enum class EventKind : std::uint8_t {
  TransmissionComplete,
  Reception,
  WatchExpiry,
  SecondChanceExpiry,
  RreqRetry,
  BufferExpiry,
  TrafficSend,
  ChipAccrualTick,
  SimEnd,
  Generic,
};

struct EventHandle {
  std::uint64_t seq = 0;
  bool valid() const { return seq != 0; }
};

/// Single-threaded event queue ordered by (fire_at, insertion seq).
///
/// Cancellation is lazy: a cancelled handle is remembered and the event is
/// discarded when it reaches the head of the queue.
class Scheduler {
 public:
  using Action = std::function<void()>;

  SimTime now() const { return m_now; }

  /// Throws std::logic_error when `fire_at` lies before the current clock.
  EventHandle schedule(SimTime fire_at, EventKind kind, Action action);
  EventHandle schedule_in(SimTime delay, EventKind kind, Action action) {
    return schedule(m_now + delay, kind, std::move(action));
  }

  void cancel(EventHandle handle);

  /// Dispatches every event with fire_at <= until, then sets the clock to `until`.
  void run(SimTime until);

  /// Includes cancelled entries not yet discarded.
  std::size_t queued() const { return m_queue.size(); }
  std::uint64_t dispatched() const { return m_dispatched; }

 private:
  struct Entry {
    SimTime fire_at;
    std::uint64_t seq;
    EventKind kind;
    Action action;
  };
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.fire_at != b.fire_at) return a.fire_at > b.fire_at;
      return a.seq > b.seq;
    }
  };

  SimTime m_now = 0.0;
  std::uint64_t m_next_seq = 1;
  std::uint64_t m_dispatched = 0;
  std::priority_queue<Entry, std::vector<Entry>, Later> m_queue;
  std::unordered_set<std::uint64_t> m_cancelled;
};

enum class StreamId : std::uint32_t {
  Mobility = 1,
  Workload = 2,
  Placement = 3,
  AdversarySelection = 4,
  AdversaryDrop = 5,
};

std::string_view to_string(StreamId id);

/// Seeded uniform stream.
///
/// Generator: std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The 64-bit engine seed is splitmix64(seed ^ (stream_id << 32) ^
/// index), where `index` separates per-node substreams. Uniform reals use
/// the top 53 bits of each draw, so values are identical on every platform.
class RngStream {
 public:
  static constexpr std::string_view kAlgorithm =
      "mt19937_64; engine_seed = splitmix64(seed ^ (stream_id << 32) ^ index); "
      "uniform = (draw >> 11) * 2^-53";

  RngStream(std::uint64_t seed, StreamId id, std::uint32_t index = 0);

  /// Uniform in [0, 1).
  double next();
  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * next(); }
  /// Uniform integer in [0, n). `n` must be positive.
  std::uint64_t below(std::uint64_t n);

  std::uint64_t seed() const { return m_seed; }
  StreamId id() const { return m_id; }

 private:
  std::uint64_t m_seed;
  StreamId m_id;
  std::mt19937_64 m_engine;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace oceansim
