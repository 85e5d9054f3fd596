#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "oceansim/config.hpp"
#include "oceansim/metrics.hpp"
#include "oceansim/packet.hpp"

namespace oceansim {

/// Scripted overrides, used by tests and the `validate` subcommand.
struct Setup {
  std::optional<std::vector<Vec2>> positions;  // nodes stay fixed here
  std::optional<std::vector<workload::CbrFlow>> flows;
  std::optional<std::vector<adversary::Profile>> profiles;
};

struct Observer {
  std::function<void(NodeId origin, const Route& route, SimTime at)> on_route_installed;
  std::function<void(NodeId transmitter, const Packet& packet, SimTime at)> on_transmit;
  std::function<void(NodeId receiver, const Packet& packet, SimTime at)> on_deliver;
};

namespace detail {
struct Node;
struct Frame;
}

/// One isolated run: nodes, radio channel, DSR with optional OCEAN, traffic
/// and metrics, all driven by a private scheduler.
class Simulation {
 public:
  static constexpr std::uint32_t kNoFlow = std::numeric_limits<std::uint32_t>::max();

  Simulation(const ScenarioConfig& cfg, std::uint64_t seed, Setup setup = {});
  ~Simulation();
  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  void set_observer(Observer observer) { m_observer = std::move(observer); }
  void enable_rating_logs();

  /// Runs to the configured duration and returns the final metrics.
  metrics::RunMetrics run();
  void run_until(SimTime t);
  /// Settles energy at the end of the run and counts packets still pending.
  /// Idempotent.
  const metrics::RunMetrics& finish();

  /// Application hand-off of one data packet at the current time.
  void send_data(NodeId src, NodeId dst, std::size_t size, std::uint32_t flow = kNoFlow);

  Scheduler& scheduler() { return m_scheduler; }
  SimTime now() const { return m_scheduler.now(); }
  const ScenarioConfig& config() const { return m_cfg; }
  std::size_t node_count() const { return m_nodes.size(); }
  const std::vector<workload::CbrFlow>& flows() const { return m_flows; }
  const metrics::RunMetrics& metrics() const { return m_metrics; }

  const dsr::RouteCache& route_cache(NodeId n) const;
  /// Null when OCEAN is disabled.
  const ocean::Agent* ocean_agent(NodeId n) const;
  ocean::Agent* ocean_agent(NodeId n);
  adversary::Profile profile(NodeId n) const;
  const radio::EnergyMeter& energy(NodeId n) const;
  bool discovery_outstanding(NodeId n, NodeId dst) const;
  std::size_t buffered(NodeId n) const;
  /// Position at the current time.
  Vec2 position(NodeId n);
  /// Radio connectivity at the current time, ignoring energy.
  bool linked(NodeId a, NodeId b);

 private:
  using PacketPtr = std::shared_ptr<const Packet>;

  detail::Node& node(NodeId n) { return *m_nodes.at(n); }
  const detail::Node& node(NodeId n) const { return *m_nodes.at(n); }

  // channel and energy
  bool alive(detail::Node& n);
  void handle_death(detail::Node& n);
  void enqueue(detail::Node& n, Packet p, std::optional<NodeId> next_hop);
  void pump(detail::Node& n);
  void transmit(detail::Node& n, detail::Frame f);
  void receive(NodeId at, const PacketPtr& p, NodeId from, SimTime tx_start);

  // routing
  void originate(detail::Node& n, Packet p);
  std::optional<Route> choose_route(const detail::Node& n, NodeId dst) const;
  void send_on_route(detail::Node& n, Packet p, const Route& route);
  void buffer_packet(detail::Node& n, Packet p);
  void arm_buffer_timer(detail::Node& n);
  bool flush(detail::Node& n, NodeId dst);
  void start_discovery(detail::Node& n, NodeId dst);
  void send_rreq(detail::Node& n, NodeId dst);
  void on_retry_timer(NodeId n, NodeId dst);
  void handle_rreq(detail::Node& n, const Packet& rreq);
  void handle_rrep(detail::Node& n, const Packet& rrep);
  void handle_data(detail::Node& n, Packet p, NodeId from);
  void forward_data(detail::Node& n, Packet p, NodeId from);
  void handle_rerr(detail::Node& n, const Packet& rerr);
  void link_failure(detail::Node& n, detail::Frame f);
  void send_rerr(detail::Node& n, const Packet& data, NodeId unreachable);
  void deliver(detail::Node& n, const Packet& p);
  void drop(const Packet& p, metrics::DropReason reason);

  void schedule_emission(std::size_t flow, std::uint32_t k);
  void schedule_chip_tick();

  ScenarioConfig m_cfg;
  std::uint64_t m_seed;
  Scheduler m_scheduler;
  std::vector<std::unique_ptr<detail::Node>> m_nodes;
  std::vector<workload::CbrFlow> m_flows;
  metrics::RunMetrics m_metrics;
  Observer m_observer;
  std::unordered_map<std::uint64_t, std::uint32_t> m_in_air;  // data uid -> route hops
  std::uint64_t m_next_uid = 0;
  SimTime m_max_propagation = 0.0;
  bool m_finished = false;
};

}  // namespace oceansim
