#pragma once

#include <cstddef>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "oceansim/engine.hpp"
#include "oceansim/packet.hpp"

namespace oceansim::dsr {

struct Params {
  std::size_t send_buffer_capacity = 64;
  SimTime send_buffer_timeout = 30.0;
  SimTime rreq_retry_base = 0.5;
  double rreq_retry_factor = 2.0;
  std::size_t rreq_max_retries = 3;
  /// After a discovery gives up, no new request for the same target is sent
  /// for this long; packets arriving meanwhile wait in the send buffer.
  SimTime rreq_holdoff = 10.0;
  std::size_t rreq_hop_limit = 16;
  std::size_t control_packet_size = 64;

  void validate() const;
  /// Offset from the initial request at which retry `attempt` (1-based)
  /// fires; attempt rreq_max_retries + 1 is the give-up time.
  SimTime retry_offset(std::size_t attempt) const;
};

/// True when the route has no repeated node.
bool loop_free(std::span<const NodeId> route);
bool contains_link(std::span<const NodeId> route, NodeId from, NodeId to);

/// Source routes known to one node, grouped by destination.
class RouteCache {
 public:
  explicit RouteCache(NodeId owner) : m_owner(owner) {}

  /// Stores a route from the owner; rejects malformed or looping routes and
  /// ignores exact duplicates. Returns true if the route was added.
  bool add(const Route& route, SimTime now);

  std::span<const Route> routes_to(NodeId dst) const;
  bool empty() const { return m_routes.empty(); }
  std::size_t size() const;

  /// Drops every route that uses the directed link from -> to.
  std::size_t evict_link(NodeId from, NodeId to);

 private:
  struct Entry {
    std::vector<Route> routes;
    std::vector<SimTime> inserted;
  };
  NodeId m_owner;
  std::map<NodeId, Entry> m_routes;
};

/// Route requests already handled, never forgotten during a run.
class RreqSeen {
 public:
  /// Returns false when the pair had been seen before.
  bool insert(NodeId origin, std::uint32_t request_id) { return m_seen.emplace(origin, request_id).second; }
  bool contains(NodeId origin, std::uint32_t request_id) const { return m_seen.contains({origin, request_id}); }

 private:
  std::set<std::pair<NodeId, std::uint32_t>> m_seen;
};

/// Data waiting for a route at its origin, FIFO by buffering time.
class SendBuffer {
 public:
  struct Entry {
    Packet packet;
    SimTime enqueued = 0.0;
  };

  explicit SendBuffer(std::size_t capacity) : m_capacity(capacity) {}

  /// Appends a packet; when full, the oldest entry is evicted and returned.
  std::optional<Packet> push(Packet p, SimTime now);
  /// Removes and returns all packets for `dst`, oldest first.
  std::vector<Packet> take_for(NodeId dst);
  /// Removes and returns packets buffered for at least `timeout`.
  std::vector<Packet> expire(SimTime now, SimTime timeout);
  std::vector<Packet> take_all();

  bool has_for(NodeId dst) const;
  std::set<NodeId> destinations() const;
  std::optional<SimTime> oldest() const;
  std::size_t size() const { return m_entries.size(); }
  bool empty() const { return m_entries.empty(); }

 private:
  std::size_t m_capacity;
  std::deque<Entry> m_entries;
};

}  // namespace oceansim::dsr
