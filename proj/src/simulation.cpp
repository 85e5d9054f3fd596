#include "oceansim/simulation.hpp"

#include <algorithm>
#include <stdexcept>

#include "node.hpp"

namespace oceansim {

using metrics::DropReason;

Simulation::Simulation(const ScenarioConfig& cfg, std::uint64_t seed, Setup setup)
    : m_cfg(cfg), m_seed(seed) {
  m_cfg.validate();
  const std::size_t n = m_cfg.n_nodes;
  if (setup.positions && setup.positions->size() != n)
    throw std::invalid_argument("scripted positions must cover every node");
  if (setup.profiles && setup.profiles->size() != n)
    throw std::invalid_argument("scripted profiles must cover every node");

  RngStream selection(seed, StreamId::AdversarySelection);
  const std::vector<adversary::Profile> profiles =
      setup.profiles ? *setup.profiles
                     : adversary::assign_profiles(selection, n, m_cfg.malicious_fraction, m_cfg.malicious_kind);

  RngStream placement(seed, StreamId::Placement);
  m_nodes.reserve(n);
  for (NodeId i = 0; i < n; ++i) {
    auto motion = setup.positions
                      ? mobility::RandomWaypoint::fixed((*setup.positions)[i])
                      : mobility::RandomWaypoint(m_cfg.mobility, placement, RngStream(seed, StreamId::Mobility, i));
    auto node = std::make_unique<detail::Node>(i, std::move(motion), m_cfg, profiles[i], seed);
    if (m_cfg.ocean_enabled) node->ocean = std::make_unique<ocean::Agent>(i, m_cfg.ocean, m_scheduler);
    m_nodes.push_back(std::move(node));
  }

  if (setup.flows) {
    m_flows = *setup.flows;
  } else {
    std::vector<NodeId> pool;
    for (NodeId i = 0; i < n; ++i)
      if (!m_cfg.exclude_malicious_endpoints || profiles[i] == adversary::Profile::Cooperative) pool.push_back(i);
    const std::size_t want = m_cfg.workload.max_connections;
    if (pool.size() < 2 || pool.size() * (pool.size() - 1) < want) {
      pool.resize(n);
      for (NodeId i = 0; i < n; ++i) pool[i] = i;
    }
    RngStream traffic(seed, StreamId::Workload);
    m_flows = workload::build_flows(traffic, pool, want, m_cfg.workload);
  }
  for (const workload::CbrFlow& f : m_flows) {
    if (f.src >= n || f.dst >= n || f.src == f.dst) throw std::invalid_argument("flow endpoints out of range");
    m_metrics.flows.push_back({f.src, f.dst, 0, 0});
  }

  m_max_propagation = radio::nominal_range(m_cfg.radio) / radio::kSpeedOfLight;

  for (std::size_t i = 0; i < m_flows.size(); ++i) schedule_emission(i, 0);
  if (m_cfg.ocean_enabled) schedule_chip_tick();
}

Simulation::~Simulation() = default;

void Simulation::enable_rating_logs() {
  for (auto& n : m_nodes)
    if (n->ocean) n->ocean->enable_log();
}

void Simulation::schedule_emission(std::size_t flow, std::uint32_t k) {
  const workload::CbrFlow& f = m_flows[flow];
  if (!workload::emission_allowed(f, k, m_cfg.sim_duration())) return;
  m_scheduler.schedule(f.emission_time(k), EventKind::TrafficSend, [this, flow, k] {
    workload::CbrFlow& fl = m_flows[flow];
    fl.seq = k + 1;
    send_data(fl.src, fl.dst, fl.size, static_cast<std::uint32_t>(flow));
    schedule_emission(flow, k + 1);
  });
}

void Simulation::schedule_chip_tick() {
  const SimTime period = m_cfg.ocean.chip_accrual_period;
  if (now() + period > m_cfg.sim_duration()) return;
  m_scheduler.schedule_in(period, EventKind::ChipAccrualTick, [this, period] {
    for (auto& n : m_nodes)
      if (n->ocean) n->ocean->chip_accrual_tick(period);
    schedule_chip_tick();
  });
}

void Simulation::run_until(SimTime t) {
  if (m_finished) throw std::logic_error("simulation already finished");
  m_scheduler.run(std::min(t, m_cfg.sim_duration()));
}

metrics::RunMetrics Simulation::run() {
  run_until(m_cfg.sim_duration());
  return finish();
}

const metrics::RunMetrics& Simulation::finish() {
  if (m_finished) return m_metrics;
  m_scheduler.run(m_cfg.sim_duration());
  m_finished = true;
  std::uint64_t pending = 0;
  for (auto& np : m_nodes) {
    detail::Node& n = *np;
    if (!alive(n)) continue;
    for (const detail::Frame& f : n.tx_queue) {
      if (f.packet.kind != PacketKind::Data) continue;
      ++pending;
      m_metrics.record_outcome(f.packet.route_hops(), false);
    }
    for (const Packet& p : n.buffer.take_all()) {
      ++pending;
      m_metrics.record_outcome(p.route_hops(), false);
    }
  }
  for (const auto& [uid, hops] : m_in_air) {
    ++pending;
    m_metrics.record_outcome(hops, false);
  }
  m_in_air.clear();
  m_metrics.pending_at_end = pending;

  m_metrics.final_energy.clear();
  m_metrics.energy.clear();
  for (auto& np : m_nodes) {
    const radio::EnergyMeter& e = np->energy;
    m_metrics.final_energy.push_back(e.remaining());
    m_metrics.energy.push_back({e.initial(), e.remaining(), e.time_tx(), e.time_rx(), e.time_idle(), e.unpaid(),
                                np->tx_bytes, np->rx_bytes, e.alive() ? -1.0 : e.death_time()});
  }
  m_metrics.events_dispatched = m_scheduler.dispatched();
  return m_metrics;
}

bool Simulation::alive(detail::Node& n) {
  n.energy.settle(now());
  if (!n.energy.alive()) handle_death(n);
  return n.energy.alive();
}

void Simulation::handle_death(detail::Node& n) {
  if (n.dead_handled) return;
  n.dead_handled = true;
  std::deque<detail::Frame> queued;
  queued.swap(n.tx_queue);
  for (const detail::Frame& f : queued)
    if (f.packet.kind == PacketKind::Data) drop(f.packet, DropReason::DeadNode);
  for (const Packet& p : n.buffer.take_all()) drop(p, DropReason::DeadNode);
  for (auto& [_, d] : n.discoveries) m_scheduler.cancel(d.timer);
  n.discoveries.clear();
  m_scheduler.cancel(n.buffer_timer);
  n.buffer_timer = {};
}

void Simulation::enqueue(detail::Node& n, Packet p, std::optional<NodeId> next_hop) {
  n.tx_queue.push_back({std::move(p), next_hop});
  if (!n.pumping) pump(n);
}

void Simulation::pump(detail::Node& n) {
  n.pumping = true;
  while (!n.transmitting && !n.tx_queue.empty()) {
    detail::Frame f = std::move(n.tx_queue.front());
    n.tx_queue.pop_front();
    transmit(n, std::move(f));
  }
  n.pumping = false;
}

void Simulation::transmit(detail::Node& n, detail::Frame f) {
  const SimTime t = now();
  if (!alive(n)) {
    if (f.packet.kind == PacketKind::Data) drop(f.packet, DropReason::DeadNode);
    return;
  }
  const radio::RadioParams& rp = m_cfg.radio;
  const Vec2 here = n.motion.position_at(t);
  double hop_distance = 0.0;
  if (f.next_hop) {
    detail::Node& nh = node(*f.next_hop);
    hop_distance = distance(here, nh.motion.position_at(t));
    if (!alive(nh) || !radio::in_range(hop_distance, rp)) {
      link_failure(n, std::move(f));
      return;
    }
  }

  const SimTime dur = radio::tx_duration(f.packet.size, rp);
  n.energy.charge_tx(t, dur);
  if (!n.energy.alive()) {
    handle_death(n);
    if (f.packet.kind == PacketKind::Data) drop(f.packet, DropReason::DeadNode);
    return;
  }
  n.tx_bytes += f.packet.size;
  switch (f.packet.kind) {
    case PacketKind::Rreq: ++m_metrics.rreq_tx; break;
    case PacketKind::Rrep: ++m_metrics.rrep_tx; break;
    case PacketKind::Rerr: ++m_metrics.rerr_tx; break;
    case PacketKind::Data: break;
  }
  if (is_control(f.packet.kind)) ++m_metrics.routing_tx;
  if (m_observer.on_transmit) m_observer.on_transmit(n.id, f.packet, t);

  const PacketPtr pkt = std::make_shared<const Packet>(std::move(f.packet));
  bool addressee_reached = false;
  for (auto& op : m_nodes) {
    detail::Node& other = *op;
    if (other.id == n.id || !alive(other)) continue;
    const double d = distance(here, other.motion.position_at(t));
    if (!radio::in_range(d, rp)) continue;
    other.energy.charge_rx(t, dur);
    other.rx_bytes += pkt->size;
    if (!other.energy.alive()) {
      handle_death(other);
      continue;
    }
    if (f.next_hop && *f.next_hop == other.id) addressee_reached = true;
    m_scheduler.schedule(t + dur + d / radio::kSpeedOfLight, EventKind::Reception,
                         [this, to = other.id, pkt, from = n.id, t] { receive(to, pkt, from, t); });
  }

  if (pkt->kind == PacketKind::Data && f.next_hop) {
    if (addressee_reached)
      m_in_air.emplace(pkt->uid, pkt->route_hops());
    else
      drop(*pkt, DropReason::DeadNode);
    if (n.ocean && *f.next_hop != pkt->target) {
      const SimTime deadline = t + dur + hop_distance / radio::kSpeedOfLight + m_cfg.ocean.watch_timeout;
      n.ocean->register_watch({pkt->origin, pkt->target, pkt->uid, pkt->hop_index}, *f.next_hop, deadline,
                              deadline + dur + m_max_propagation);
    }
  }

  n.transmitting = true;
  m_scheduler.schedule(t + dur, EventKind::TransmissionComplete, [this, id = n.id] {
    detail::Node& self = node(id);
    self.transmitting = false;
    pump(self);
  });
}

void Simulation::receive(NodeId at, const PacketPtr& p, NodeId from, SimTime tx_start) {
  detail::Node& n = node(at);
  const bool addressed = p->kind != PacketKind::Rreq && p->hop_index < p->route.size() && p->route[p->hop_index] == at;
  if (!alive(n)) {
    if (addressed && p->kind == PacketKind::Data) {
      m_in_air.erase(p->uid);
      drop(*p, DropReason::DeadNode);
    }
    return;
  }
  if (p->kind == PacketKind::Data && n.ocean && p->hop_index >= 1)
    n.ocean->on_overhear({p->origin, p->target, p->uid, p->hop_index - 1}, from, tx_start);

  switch (p->kind) {
    case PacketKind::Rreq:
      handle_rreq(n, *p);
      break;
    case PacketKind::Data:
      if (!addressed) break;
      m_in_air.erase(p->uid);
      if (p->target != at) {
        if (ocean::Agent* sender = node(from).ocean.get()) sender->on_optimistic_accept(at);
      }
      handle_data(n, *p, from);
      break;
    case PacketKind::Rrep:
      if (addressed) handle_rrep(n, *p);
      break;
    case PacketKind::Rerr:
      if (addressed) handle_rerr(n, *p);
      break;
  }
}

void Simulation::drop(const Packet& p, DropReason reason) {
  if (p.kind != PacketKind::Data) return;
  ++m_metrics.drop(reason);
  m_metrics.record_outcome(p.route_hops(), false);
}

void Simulation::deliver(detail::Node& n, const Packet& p) {
  ++m_metrics.data_delivered;
  m_metrics.delay_samples.push_back(now() - p.sent_at);
  m_metrics.per_delivery_hops.push_back(p.route_hops());
  m_metrics.record_outcome(p.route_hops(), true);
  if (p.flow < m_metrics.flows.size()) ++m_metrics.flows[p.flow].delivered;
  if (p.contaminated) ++m_metrics.contaminated_deliveries;
  if (m_observer.on_deliver) m_observer.on_deliver(n.id, p, now());
}

const dsr::RouteCache& Simulation::route_cache(NodeId n) const { return node(n).cache; }
const ocean::Agent* Simulation::ocean_agent(NodeId n) const { return node(n).ocean.get(); }
ocean::Agent* Simulation::ocean_agent(NodeId n) { return node(n).ocean.get(); }
adversary::Profile Simulation::profile(NodeId n) const { return node(n).profile; }
const radio::EnergyMeter& Simulation::energy(NodeId n) const { return node(n).energy; }
bool Simulation::discovery_outstanding(NodeId n, NodeId dst) const { return node(n).discoveries.contains(dst); }
std::size_t Simulation::buffered(NodeId n) const { return node(n).buffer.size(); }
Vec2 Simulation::position(NodeId n) { return node(n).motion.position_at(now()); }

bool Simulation::linked(NodeId a, NodeId b) {
  return radio::in_range(distance(position(a), position(b)), m_cfg.radio);
}

}  // namespace oceansim
