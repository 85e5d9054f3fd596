#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "oceansim/dsr.hpp"

namespace oceansim::dsr {

void Params::validate() const {
  if (send_buffer_capacity == 0) throw std::invalid_argument("send_buffer_capacity must be positive");
  if (!(send_buffer_timeout > 0)) throw std::invalid_argument("send_buffer_timeout must be positive");
  if (!(rreq_retry_base > 0) || !(rreq_retry_factor >= 1))
    throw std::invalid_argument("rreq retry backoff must be positive and non-shrinking");
  if (!(rreq_holdoff >= 0)) throw std::invalid_argument("rreq_holdoff must be non-negative");
  if (rreq_hop_limit == 0) throw std::invalid_argument("rreq_hop_limit must be positive");
  if (control_packet_size == 0) throw std::invalid_argument("control_packet_size must be positive");
}

SimTime Params::retry_offset(std::size_t attempt) const {
  return rreq_retry_base * std::pow(rreq_retry_factor, static_cast<double>(attempt - 1));
}

bool loop_free(std::span<const NodeId> route) {
  std::vector<NodeId> sorted(route.begin(), route.end());
  std::sort(sorted.begin(), sorted.end());
  return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
}

bool contains_link(std::span<const NodeId> route, NodeId from, NodeId to) {
  for (std::size_t i = 0; i + 1 < route.size(); ++i)
    if (route[i] == from && route[i + 1] == to) return true;
  return false;
}

bool RouteCache::add(const Route& route, SimTime now) {
  if (route.size() < 2 || route.front() != m_owner || !loop_free(route)) return false;
  Entry& e = m_routes[route.back()];
  if (std::find(e.routes.begin(), e.routes.end(), route) != e.routes.end()) return false;
  e.routes.push_back(route);
  e.inserted.push_back(now);
  return true;
}

std::span<const Route> RouteCache::routes_to(NodeId dst) const {
  auto it = m_routes.find(dst);
  if (it == m_routes.end()) return {};
  return it->second.routes;
}

std::size_t RouteCache::size() const {
  std::size_t n = 0;
  for (const auto& [_, e] : m_routes) n += e.routes.size();
  return n;
}

std::size_t RouteCache::evict_link(NodeId from, NodeId to) {
  std::size_t removed = 0;
  for (auto it = m_routes.begin(); it != m_routes.end();) {
    Entry& e = it->second;
    for (std::size_t i = e.routes.size(); i-- > 0;) {
      if (contains_link(e.routes[i], from, to)) {
        e.routes.erase(e.routes.begin() + static_cast<std::ptrdiff_t>(i));
        e.inserted.erase(e.inserted.begin() + static_cast<std::ptrdiff_t>(i));
        ++removed;
      }
    }
    it = e.routes.empty() ? m_routes.erase(it) : std::next(it);
  }
  return removed;
}

std::optional<Packet> SendBuffer::push(Packet p, SimTime now) {
  std::optional<Packet> evicted;
  if (m_entries.size() >= m_capacity) {
    evicted = std::move(m_entries.front().packet);
    m_entries.pop_front();
  }
  m_entries.push_back({std::move(p), now});
  return evicted;
}

std::vector<Packet> SendBuffer::take_for(NodeId dst) {
  std::vector<Packet> out;
  std::deque<Entry> keep;
  for (Entry& e : m_entries) {
    if (e.packet.target == dst)
      out.push_back(std::move(e.packet));
    else
      keep.push_back(std::move(e));
  }
  m_entries = std::move(keep);
  return out;
}

std::vector<Packet> SendBuffer::expire(SimTime now, SimTime timeout) {
  std::vector<Packet> out;
  while (!m_entries.empty() && m_entries.front().enqueued + timeout <= now) {
    out.push_back(std::move(m_entries.front().packet));
    m_entries.pop_front();
  }
  return out;
}

std::vector<Packet> SendBuffer::take_all() {
  std::vector<Packet> out;
  for (Entry& e : m_entries) out.push_back(std::move(e.packet));
  m_entries.clear();
  return out;
}

bool SendBuffer::has_for(NodeId dst) const {
  return std::any_of(m_entries.begin(), m_entries.end(), [dst](const Entry& e) { return e.packet.target == dst; });
}

std::set<NodeId> SendBuffer::destinations() const {
  std::set<NodeId> out;
  for (const Entry& e : m_entries) out.insert(e.packet.target);
  return out;
}

std::optional<SimTime> SendBuffer::oldest() const {
  if (m_entries.empty()) return std::nullopt;
  return m_entries.front().enqueued;
}

}  // namespace oceansim::dsr
