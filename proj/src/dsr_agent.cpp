// Route discovery, source-routed forwarding and route maintenance.

#include <algorithm>

#include "node.hpp"
#include "oceansim/simulation.hpp"

namespace oceansim {

using metrics::DropReason;

void Simulation::send_data(NodeId src, NodeId dst, std::size_t size, std::uint32_t flow) {
  ++m_metrics.data_sent;
  if (flow < m_metrics.flows.size()) ++m_metrics.flows[flow].sent;
  Packet p;
  p.kind = PacketKind::Data;
  p.origin = src;
  p.target = dst;
  p.uid = m_next_uid++;
  p.flow = flow;
  p.size = size;
  p.sent_at = now();
  detail::Node& n = node(src);
  if (!alive(n)) {
    drop(p, DropReason::DeadNode);
    return;
  }
  originate(n, std::move(p));
}

void Simulation::originate(detail::Node& n, Packet p) {
  if (auto route = choose_route(n, p.target)) {
    send_on_route(n, std::move(p), *route);
    return;
  }
  const NodeId dst = p.target;
  buffer_packet(n, std::move(p));
  if (!n.discoveries.contains(dst)) start_discovery(n, dst);
}

std::optional<Route> Simulation::choose_route(const detail::Node& n, NodeId dst) const {
  const auto candidates = n.cache.routes_to(dst);
  if (n.ocean) return n.ocean->select_route(candidates);
  return ocean::select_min_hop(candidates, [](NodeId) { return true; });
}

void Simulation::send_on_route(detail::Node& n, Packet p, const Route& route) {
  p.route = route;
  p.hop_index = 1;
  p.contaminated =
      n.ocean && std::any_of(route.begin(), route.end(), [&](NodeId m) { return n.ocean->is_faulty(m); });
  enqueue(n, std::move(p), route[1]);
}

void Simulation::buffer_packet(detail::Node& n, Packet p) {
  p.route.clear();
  p.hop_index = 0;
  if (auto evicted = n.buffer.push(std::move(p), now())) drop(*evicted, DropReason::NoRoute);
  arm_buffer_timer(n);
}

void Simulation::arm_buffer_timer(detail::Node& n) {
  if (n.buffer_timer.valid()) return;
  const auto oldest = n.buffer.oldest();
  if (!oldest) return;
  const SimTime timeout = m_cfg.dsr.send_buffer_timeout;
  n.buffer_timer = m_scheduler.schedule(std::max(now(), *oldest + timeout), EventKind::BufferExpiry,
                                        [this, id = n.id, timeout] {
                                          detail::Node& self = node(id);
                                          self.buffer_timer = {};
                                          if (!alive(self)) return;
                                          for (const Packet& p : self.buffer.expire(now(), timeout))
                                            drop(p, DropReason::NoRoute);
                                          arm_buffer_timer(self);
                                        });
}

bool Simulation::flush(detail::Node& n, NodeId dst) {
  const auto route = choose_route(n, dst);
  if (!route) return false;
  for (Packet& p : n.buffer.take_for(dst)) send_on_route(n, std::move(p), *route);
  if (auto it = n.discoveries.find(dst); it != n.discoveries.end()) {
    m_scheduler.cancel(it->second.timer);
    n.discoveries.erase(it);
  }
  return true;
}

void Simulation::start_discovery(detail::Node& n, NodeId dst) {
  detail::Discovery& d = n.discoveries[dst];
  d.retries = 0;
  d.started = now();
  send_rreq(n, dst);
  d.timer = m_scheduler.schedule(d.started + m_cfg.dsr.retry_offset(1), EventKind::RreqRetry,
                                 [this, id = n.id, dst] { on_retry_timer(id, dst); });
}

void Simulation::send_rreq(detail::Node& n, NodeId dst) {
  Packet rreq;
  rreq.kind = PacketKind::Rreq;
  rreq.origin = n.id;
  rreq.target = dst;
  rreq.route = {n.id};
  rreq.request_id = n.next_request_id++;
  if (n.ocean) rreq.avoid_list = n.ocean->build_avoid_list();
  rreq.size = m_cfg.dsr.control_packet_size;
  rreq.sent_at = now();
  n.seen.insert(n.id, rreq.request_id);
  enqueue(n, std::move(rreq), std::nullopt);
}

void Simulation::on_retry_timer(NodeId id, NodeId dst) {
  detail::Node& n = node(id);
  if (!alive(n)) return;
  auto it = n.discoveries.find(dst);
  if (it == n.discoveries.end()) return;
  if (flush(n, dst)) return;
  detail::Discovery& d = it->second;
  if (d.retries > m_cfg.dsr.rreq_max_retries) {
    // Hold-off over: whatever arrived meanwhile gets a fresh discovery.
    n.discoveries.erase(it);
    if (n.buffer.has_for(dst)) start_discovery(n, dst);
    return;
  }
  if (!n.buffer.has_for(dst)) {
    n.discoveries.erase(it);
    return;
  }
  ++d.retries;
  if (d.retries > m_cfg.dsr.rreq_max_retries) {
    for (const Packet& p : n.buffer.take_for(dst)) drop(p, DropReason::NoRoute);
    d.timer = m_scheduler.schedule_in(m_cfg.dsr.rreq_holdoff, EventKind::RreqRetry,
                                      [this, id, dst] { on_retry_timer(id, dst); });
    return;
  }
  send_rreq(n, dst);
  d.timer = m_scheduler.schedule(d.started + m_cfg.dsr.retry_offset(d.retries + 1), EventKind::RreqRetry,
                                 [this, id, dst] { on_retry_timer(id, dst); });
}

void Simulation::handle_rreq(detail::Node& n, const Packet& rreq) {
  if (!n.seen.insert(rreq.origin, rreq.request_id)) return;
  if (std::find(rreq.avoid_list.begin(), rreq.avoid_list.end(), n.id) != rreq.avoid_list.end()) return;
  if (adversary::decide_rreq_participation(n.profile) == adversary::RreqDecision::Ignore) return;
  if (std::find(rreq.route.begin(), rreq.route.end(), n.id) != rreq.route.end()) return;
  // Forwarders enforce their own faulty list without widening the avoid-list.
  if (n.ocean &&
      std::any_of(rreq.route.begin(), rreq.route.end(), [&](NodeId m) { return n.ocean->is_faulty(m); }))
    return;

  if (n.id == rreq.target) {
    Packet rrep;
    rrep.kind = PacketKind::Rrep;
    rrep.origin = rreq.origin;
    rrep.target = rreq.target;
    rrep.route = rreq.route;
    rrep.route.push_back(n.id);
    rrep.hop_index = static_cast<std::uint32_t>(rrep.route.size() - 2);
    rrep.request_id = rreq.request_id;
    rrep.size = m_cfg.dsr.control_packet_size;
    rrep.sent_at = now();
    const NodeId next = rrep.route[rrep.hop_index];
    enqueue(n, std::move(rrep), next);
    return;
  }
  if (rreq.route.size() >= m_cfg.dsr.rreq_hop_limit) return;
  Packet fwd = rreq;
  fwd.route.push_back(n.id);
  enqueue(n, std::move(fwd), std::nullopt);
}

void Simulation::handle_rrep(detail::Node& n, const Packet& rrep) {
  if (rrep.hop_index == 0) {
    if (n.id != rrep.origin) return;
    if (n.cache.add(rrep.route, now()) && m_observer.on_route_installed)
      m_observer.on_route_installed(n.id, rrep.route, now());
    flush(n, rrep.target);
    return;
  }
  if (n.profile == adversary::Profile::Selfish) return;
  if (n.ocean && n.ocean->is_faulty(rrep.route[rrep.hop_index + 1])) return;
  Packet fwd = rrep;
  --fwd.hop_index;
  const NodeId next = fwd.route[fwd.hop_index];
  enqueue(n, std::move(fwd), next);
}

void Simulation::handle_data(detail::Node& n, Packet p, NodeId from) {
  if (n.id == p.target) {
    deliver(n, p);
    return;
  }
  forward_data(n, std::move(p), from);
}

void Simulation::forward_data(detail::Node& n, Packet p, NodeId from) {
  if (adversary::decide_data_forward(n.profile, m_cfg.drop_prob, n.drop_rng) == adversary::ForwardDecision::Drop) {
    drop(p, DropReason::AdversaryDrop);
    return;
  }
  if (p.hop_index + 1 >= p.route.size()) {
    drop(p, DropReason::BrokenLink);
    return;
  }
  const NodeId next = p.route[p.hop_index + 1];
  if (n.ocean) {
    if (n.ocean->admit_traffic(p.origin, from) != ocean::Admission::Admit) {
      drop(p, DropReason::OceanRejection);
      return;
    }
    if (n.ocean->is_faulty(next)) {
      drop(p, DropReason::OceanRejection);
      send_rerr(n, p, next);
      return;
    }
  }
  ++p.hop_index;
  enqueue(n, std::move(p), next);
}

void Simulation::link_failure(detail::Node& n, detail::Frame f) {
  if (f.packet.kind != PacketKind::Data) return;  // lost control traffic is recovered by retries
  Packet& p = f.packet;
  const NodeId next = *f.next_hop;
  n.cache.evict_link(n.id, next);
  if (n.id == p.origin) {
    originate(n, std::move(p));
    return;
  }
  drop(p, DropReason::BrokenLink);
  send_rerr(n, p, next);
}

void Simulation::send_rerr(detail::Node& n, const Packet& data, NodeId unreachable) {
  const auto at = std::find(data.route.begin(), data.route.end(), n.id);
  if (at == data.route.end() || at == data.route.begin()) return;
  Packet rerr;
  rerr.kind = PacketKind::Rerr;
  rerr.origin = n.id;
  rerr.target = data.origin;
  rerr.route.assign(std::make_reverse_iterator(at + 1), data.route.rend());
  rerr.hop_index = 1;
  rerr.link_from = n.id;
  rerr.link_to = unreachable;
  rerr.size = m_cfg.dsr.control_packet_size;
  rerr.sent_at = now();
  const NodeId next = rerr.route[1];
  enqueue(n, std::move(rerr), next);
}

void Simulation::handle_rerr(detail::Node& n, const Packet& rerr) {
  n.cache.evict_link(rerr.link_from, rerr.link_to);
  if (n.id != rerr.target) {
    if (rerr.hop_index + 1 >= rerr.route.size()) return;
    Packet fwd = rerr;
    ++fwd.hop_index;
    const NodeId next = fwd.route[fwd.hop_index];
    enqueue(n, std::move(fwd), next);
    return;
  }
  for (NodeId dst : n.buffer.destinations())
    if (!flush(n, dst) && !n.discoveries.contains(dst)) start_discovery(n, dst);
}

}  // namespace oceansim
