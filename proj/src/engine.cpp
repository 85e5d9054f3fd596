#include "oceansim/engine.hpp"

#include <sstream>
#include <stdexcept>

namespace oceansim {

EventHandle Scheduler::schedule(SimTime fire_at, EventKind kind, Action action) {
  if (fire_at < m_now) {
    std::ostringstream os;
    os << "event scheduled in the past: fire_at=" << fire_at << " now=" << m_now;
    throw std::logic_error(os.str());
  }
  const std::uint64_t seq = m_next_seq++;
  m_queue.push(Entry{fire_at, seq, kind, std::move(action)});
  return EventHandle{seq};
}

void Scheduler::cancel(EventHandle handle) {
  if (handle.valid()) m_cancelled.insert(handle.seq);
}

void Scheduler::run(SimTime until) {
  while (!m_queue.empty() && m_queue.top().fire_at <= until) {
    // priority_queue::top is const; the entry is popped right after the move.
    Entry entry = std::move(const_cast<Entry&>(m_queue.top()));
    m_queue.pop();
    if (auto it = m_cancelled.find(entry.seq); it != m_cancelled.end()) {
      m_cancelled.erase(it);
      continue;
    }
    m_now = entry.fire_at;
    ++m_dispatched;
    entry.action();
  }
  if (until > m_now) m_now = until;
}

std::string_view to_string(StreamId id) {
  switch (id) {
    case StreamId::Mobility: return "mobility";
    case StreamId::Workload: return "workload";
    case StreamId::Placement: return "placement";
    case StreamId::AdversarySelection: return "adversary-selection";
    case StreamId::AdversaryDrop: return "adversary-drop";
  }
  return "unknown";
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t seed, StreamId id, std::uint32_t index)
    : m_seed(seed),
      m_id(id),
      m_engine(splitmix64(seed ^ (static_cast<std::uint64_t>(id) << 32) ^ index)) {}

double RngStream::next() {
  return static_cast<double>(m_engine() >> 11) * 0x1.0p-53;
}

std::uint64_t RngStream::below(std::uint64_t n) {
  // Rejection sampling keeps the result unbiased and platform independent.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t x;
  do {
    x = m_engine();
  } while (x >= limit);
  return x % n;
}

}  // namespace oceansim
