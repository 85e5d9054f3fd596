#include "oceansim/validate.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <map>
#include <sstream>

#include "oceansim/simulation.hpp"

namespace oceansim::harness {

namespace {

ScenarioConfig static_config(std::size_t n, SimTime duration) {
  ScenarioConfig cfg;
  cfg.n_nodes = n;
  cfg.mobility.sim_duration = duration;
  cfg.mobility.pause_time = duration;
  cfg.ocean_enabled = false;
  return cfg;
}

workload::CbrFlow one_shot(NodeId src, NodeId dst, SimTime start, double rate = 1.0) {
  workload::CbrFlow f;
  f.src = src;
  f.dst = dst;
  f.rate = rate;
  f.start = start;
  return f;
}

// Hop distance from `src` in the connectivity graph; -1 when unreachable.
std::vector<int> bfs(const std::vector<Vec2>& pos, const radio::RadioParams& radio, NodeId src) {
  std::vector<int> dist(pos.size(), -1);
  std::deque<NodeId> queue{src};
  dist[src] = 0;
  while (!queue.empty()) {
    const NodeId u = queue.front();
    queue.pop_front();
    for (NodeId v = 0; v < pos.size(); ++v)
      if (dist[v] < 0 && radio::in_range(distance(pos[u], pos[v]), radio)) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
  }
  return dist;
}

CheckResult chain_discovery() {
  ScenarioConfig cfg = static_config(3, 5.0);
  Setup setup;
  setup.positions = std::vector<Vec2>{{0, 0}, {200, 0}, {400, 0}};
  setup.flows = std::vector<workload::CbrFlow>{one_shot(0, 2, 0.0)};
  Simulation sim(cfg, 1, setup);
  Route installed;
  sim.set_observer({[&](NodeId, const Route& r, SimTime) {
                      if (installed.empty()) installed = r;
                    },
                    {},
                    {}});
  const auto m = sim.run();
  const bool ok = installed == Route{0, 1, 2} && m.data_delivered == m.data_sent && m.data_sent > 0;
  return {"chain-discovery", ok, "route to 2 installed via 1, every packet delivered"};
}

CheckResult bfs_oracle(unsigned topologies) {
  const std::size_t n = 12;
  unsigned compared = 0;
  std::ostringstream why;
  RngStream rng(2024, StreamId::Placement);
  for (unsigned t = 0; t < topologies; ++t) {
    std::vector<Vec2> pos;
    // Redraw until connected so every pair has a route.
    for (;;) {
      pos.clear();
      for (std::size_t i = 0; i < n; ++i) pos.push_back({rng.uniform(0, 700), rng.uniform(0, 700)});
      const auto d = bfs(pos, radio::RadioParams{}, 0);
      if (std::all_of(d.begin(), d.end(), [](int x) { return x >= 0; })) break;
    }
    ScenarioConfig cfg = static_config(n, 6.0);
    std::vector<workload::CbrFlow> flows;
    for (NodeId s = 0; s < 3; ++s) {
      NodeId dst = static_cast<NodeId>(rng.below(n));
      if (dst == s) dst = static_cast<NodeId>((s + 1 + n / 2) % n);
      flows.push_back(one_shot(s, dst, 0.5 * s));
    }
    Setup setup;
    setup.positions = pos;
    setup.flows = flows;
    Simulation sim(cfg, t + 1, setup);
    std::map<std::pair<NodeId, NodeId>, std::size_t> first;
    sim.set_observer({[&](NodeId origin, const Route& r, SimTime) { first.try_emplace({origin, r.back()}, r.size() - 1); },
                      {},
                      {}});
    sim.run();
    for (const auto& f : flows) {
      const auto d = bfs(pos, cfg.radio, f.src);
      auto it = first.find({f.src, f.dst});
      if (it == first.end() || static_cast<int>(it->second) != d[f.dst]) {
        why << "topology " << t << " flow " << f.src << "->" << f.dst << " expected " << d[f.dst] << " hops";
        return {"bfs-oracle", false, why.str()};
      }
      ++compared;
    }
  }
  why << compared << " first routes equal breadth-first hop counts";
  return {"bfs-oracle", true, why.str()};
}

CheckResult partition() {
  ScenarioConfig cfg = static_config(4, 200.0);
  Setup setup;
  setup.positions = std::vector<Vec2>{{0, 0}, {200, 0}, {1000, 0}, {1200, 0}};
  setup.flows = std::vector<workload::CbrFlow>{one_shot(0, 3, 1.0, 0.01)};
  Simulation sim(cfg, 1, setup);
  sim.run_until(1.0 + cfg.dsr.retry_offset(cfg.dsr.rreq_max_retries + 1) - 1e-6);
  const bool waiting = sim.buffered(0) == 1 && sim.metrics().drop(metrics::DropReason::NoRoute) == 0;
  sim.run_until(1.0 + cfg.dsr.retry_offset(cfg.dsr.rreq_max_retries + 1) + 1e-6);
  const bool dropped = sim.buffered(0) == 0 && sim.metrics().drop(metrics::DropReason::NoRoute) == 1;
  const auto& m = sim.finish();
  const bool ok = waiting && dropped && m.rreq_tx == 2 * (1 + cfg.dsr.rreq_max_retries);
  std::ostringstream why;
  why << "unreachable packet held through the retries, dropped as no-route at give-up; rreq_tx=" << m.rreq_tx;
  return {"partition-no-route", ok, why.str()};
}

CheckResult conservation_and_determinism() {
  ScenarioConfig cfg;
  cfg.n_nodes = 20;
  cfg.mobility.arena = {800, 300};
  cfg.mobility.sim_duration = 120.0;
  cfg.mobility.pause_time = 10.0;
  cfg.workload.max_connections = 8;
  cfg.malicious_fraction = 0.25;
  auto once = [&] {
    Simulation sim(cfg, 11);
    return sim.run();
  };
  const auto a = once();
  const auto b = once();
  const double ledger = metrics::energy_ledger_error(a, cfg.energy.p_tx, cfg.energy.p_rx, cfg.energy.p_idle);
  const bool ok = metrics::packets_conserved(a) && ledger <= 1e-6 && a.contaminated_deliveries == 0 &&
                  metrics::run_csv_cells(11, a) == metrics::run_csv_cells(11, b);
  std::ostringstream why;
  why << "sent " << a.data_sent << " = delivered " << a.data_delivered << " + drops " << a.total_drops()
      << " + pending " << a.pending_at_end << "; energy ledger error " << ledger << " J; repeat run identical";
  return {"conservation-determinism", ok, why.str()};
}

CheckResult second_chance_rows() {
  for (int threshold : {0, -40, -80, -120, -160, -200}) {
    ocean::Params p;
    std::tie(p.second_chance_timeout, p.reentry_rating) = ocean::paired_second_chance(threshold, 30.0);
    p.faulty_threshold = threshold;
    Scheduler sched;
    ocean::Agent agent(0, p, sched);
    agent.enable_log();
    std::uint64_t uid = 0;
    // Unanswered watches every 10 ms until the neighbour is listed.
    std::function<void()> offend = [&] {
      if (agent.is_faulty(1)) return;
      agent.register_watch({0, 9, uid++, 1}, 1, sched.now(), sched.now() + 1e-3);
      sched.schedule_in(0.01, EventKind::Generic, offend);
    };
    sched.schedule(0.0, EventKind::Generic, offend);
    sched.run(1e6);
    SimTime entered = -1.0, left = -1.0;
    int entered_rating = 0;
    for (const auto& e : agent.log()) {
      if (e.kind == ocean::RatingEventKind::EnterFaulty) {
        entered = e.at;
        entered_rating = e.rating_after;
      }
      if (e.kind == ocean::RatingEventKind::LeaveFaulty) left = e.at;
    }
    const bool ok = entered >= 0 && entered_rating == threshold - 2 && std::abs(left - entered - p.second_chance_timeout) < 1e-9 &&
                    !agent.is_faulty(1) && agent.rating(1) == p.reentry_rating;
    if (!ok) return {"second-chance", false, "threshold " + std::to_string(threshold)};
  }
  return {"second-chance", true, "all six threshold rows re-enter at their paired rating"};
}

CheckResult two_ray() {
  const radio::RadioParams p;
  const double dc = radio::crossover_distance(p);
  const double below = radio::received_power(std::nextafter(dc, 0.0), p);
  const double at = radio::received_power(dc, p);
  const bool continuous = std::abs(below - at) <= 1e-9 * at;
  const bool range = radio::in_range(250.0, p) && !radio::in_range(251.0, p);
  return {"two-ray", continuous && range, "continuous at the crossover distance, range 250 m"};
}

}  // namespace

std::vector<CheckResult> run_validation(unsigned topologies) {
  std::vector<CheckResult> out;
  auto guarded = [&](const char* name, const std::function<CheckResult()>& check) {
    try {
      out.push_back(check());
    } catch (const std::exception& e) {
      out.push_back({name, false, e.what()});
    }
  };
  guarded("two-ray", two_ray);
  guarded("chain-discovery", chain_discovery);
  guarded("bfs-oracle", [&] { return bfs_oracle(topologies); });
  guarded("partition-no-route", partition);
  guarded("second-chance", second_chance_rows);
  guarded("conservation-determinism", conservation_and_determinism);
  return out;
}

}  // namespace oceansim::harness
