// Whole-simulation scenarios on scripted topologies.
#include <doctest.h>

#include <map>

#include "oceansim/simulation.hpp"

using namespace oceansim;

namespace {

ScenarioConfig static_config(std::size_t n, SimTime duration, bool ocean) {
  ScenarioConfig cfg;
  cfg.n_nodes = n;
  cfg.mobility.sim_duration = duration;
  cfg.mobility.pause_time = duration;
  cfg.ocean_enabled = ocean;
  return cfg;
}

workload::CbrFlow flow(NodeId src, NodeId dst, SimTime start, double rate) {
  workload::CbrFlow f;
  f.src = src;
  f.dst = dst;
  f.start = start;
  f.rate = rate;
  return f;
}

// Two disjoint 2-hop paths from 0 to 3: via 1 (above) and via 2 (below).
std::vector<Vec2> diamond() { return {{0, 150}, {200, 300}, {200, 0}, {400, 150}}; }

}  // namespace

TEST_CASE("a misleading relay is listed and traffic moves to the clean path") {
  auto cfg = static_config(4, 60.0, true);
  Setup setup;
  setup.positions = diamond();
  setup.flows = std::vector<workload::CbrFlow>{flow(0, 3, 1.0, 4.0)};
  using adversary::Profile;
  setup.profiles = std::vector<Profile>{Profile::Cooperative, Profile::Misleading, Profile::Cooperative,
                                        Profile::Cooperative};
  Simulation sim(cfg, 1, setup);
  std::map<NodeId, std::size_t> via;
  sim.set_observer({{}, {}, [&](NodeId, const Packet& p, SimTime) { ++via[p.route[1]]; }});
  const auto m = sim.run();
  CHECK(metrics::packets_conserved(m));
  CHECK(m.contaminated_deliveries == 0);
  CHECK(via[1] == 0);
  CHECK(via[2] > 0);
  // Losses are bounded by the misses needed to list the relay, once per
  // second-chance cycle.
  CHECK(*metrics::throughput_pct(m) > 80.0);
  CHECK(m.drop(metrics::DropReason::AdversaryDrop) < 40);
  if (m.drop(metrics::DropReason::AdversaryDrop) > 0) CHECK(sim.ocean_agent(0)->is_faulty(1));
}

TEST_CASE("plain DSR keeps losing packets to a black-hole relay on the only path") {
  auto cfg = static_config(3, 30.0, false);
  Setup setup;
  setup.positions = std::vector<Vec2>{{0, 0}, {200, 0}, {400, 0}};
  setup.flows = std::vector<workload::CbrFlow>{flow(0, 2, 1.0, 4.0)};
  using adversary::Profile;
  setup.profiles = std::vector<Profile>{Profile::Cooperative, Profile::Misleading, Profile::Cooperative};
  Simulation sim(cfg, 1, setup);
  const auto m = sim.run();
  CHECK(m.data_delivered == 0);
  CHECK(m.drop(metrics::DropReason::AdversaryDrop) > 0);
  CHECK(metrics::packets_conserved(m));
}

TEST_CASE("without adversaries OCEAN and plain DSR behave identically on a static network") {
  for (std::uint64_t seed : {1, 2, 3}) {
    auto ocean = static_config(20, 120.0, true);
    ocean.mobility.arena = {800, 400};
    ocean.workload.max_connections = 8;
    auto plain = ocean;
    plain.ocean_enabled = false;
    Simulation a(ocean, seed), b(plain, seed);
    const auto ma = a.run();
    const auto mb = b.run();
    CHECK(ma.data_sent == mb.data_sent);
    CHECK(ma.data_delivered == mb.data_delivered);
    CHECK(ma.routing_tx == mb.routing_tx);
    CHECK(ma.delay_samples == mb.delay_samples);
  }
}

TEST_CASE("one request flood and one reply relay install a two-hop chain route") {
  auto cfg = static_config(3, 30.0, false);
  Setup setup;
  setup.positions = std::vector<Vec2>{{0, 0}, {200, 0}, {400, 0}};
  setup.flows = std::vector<workload::CbrFlow>{};
  Simulation sim(cfg, 1, setup);
  sim.scheduler().schedule(1.0, EventKind::Generic, [&] { sim.send_data(0, 2, 512); });
  sim.run_until(2.0);
  REQUIRE(sim.route_cache(0).routes_to(2).size() == 1);
  CHECK(sim.metrics().data_delivered == 1);
  CHECK(sim.metrics().rreq_tx == 2);
  CHECK(sim.metrics().rrep_tx == 2);
}

TEST_CASE("the send buffer times out packets when retries never give up") {
  auto cfg = static_config(2, 100.0, false);
  cfg.dsr.rreq_max_retries = 1000;
  Setup setup;
  setup.positions = std::vector<Vec2>{{0, 0}, {1000, 0}};
  setup.flows = std::vector<workload::CbrFlow>{};
  Simulation sim(cfg, 1, setup);
  sim.scheduler().schedule(1.0, EventKind::Generic, [&] { sim.send_data(0, 1, 512); });
  sim.run_until(31.0 - 1e-6);
  CHECK(sim.buffered(0) == 1);
  sim.run_until(31.0 + 1e-6);
  CHECK(sim.buffered(0) == 0);
  CHECK(sim.metrics().drop(metrics::DropReason::NoRoute) == 1);
}

TEST_CASE("after giving up a node waits out the hold-off before asking again") {
  auto cfg = static_config(2, 100.0, false);
  Setup setup;
  setup.positions = std::vector<Vec2>{{0, 0}, {1000, 0}};
  setup.flows = std::vector<workload::CbrFlow>{flow(0, 1, 1.0, 1.0)};
  Simulation sim(cfg, 1, setup);
  std::vector<SimTime> requests;
  sim.set_observer({{}, [&](NodeId, const Packet& p, SimTime at) {
                      if (p.kind == PacketKind::Rreq) requests.push_back(at);
                    },
                    {}});
  sim.run_until(30.0);
  REQUIRE(requests.size() >= 5);
  // Initial request and three retries, then nothing until give-up + hold-off.
  CHECK(requests[3] - requests[0] == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(requests[4] - requests[0] == doctest::Approx(4.0 + cfg.dsr.rreq_holdoff).epsilon(1e-3));
}

TEST_CASE("energy is conserved per node and dead nodes stop transmitting") {
  auto cfg = static_config(6, 200.0, true);
  cfg.energy.initial = 0.05;
  cfg.mobility.arena = {500, 200};
  cfg.workload.max_connections = 4;
  Simulation sim(cfg, 5);
  std::map<NodeId, SimTime> last_tx;
  sim.set_observer({{}, [&](NodeId n, const Packet&, SimTime at) { last_tx[n] = at; }, {}});
  const auto m = sim.run();
  CHECK(metrics::energy_ledger_error(m, cfg.energy.p_tx, cfg.energy.p_rx, cfg.energy.p_idle) <= 1e-6);
  CHECK(metrics::packets_conserved(m));
  for (NodeId n = 0; n < 6; ++n) {
    CHECK(m.final_energy[n] >= 0.0);
    if (m.energy[n].death_time >= 0 && last_tx.contains(n)) CHECK(last_tx[n] <= m.energy[n].death_time);
  }
  CHECK(metrics::dead_nodes(m) > 0);
}

TEST_CASE("run_until refuses to go backwards after finish") {
  auto cfg = static_config(2, 10.0, false);
  Setup setup;
  setup.flows = std::vector<workload::CbrFlow>{};
  Simulation sim(cfg, 1, setup);
  sim.run();
  CHECK_THROWS(sim.run_until(5.0));
}
