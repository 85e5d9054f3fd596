// Adversary profiles, traffic generation, metrics and scenario parsing.
#include <doctest.h>

#include <algorithm>
#include <set>

#include "oceansim/adversary.hpp"
#include "oceansim/config.hpp"
#include "oceansim/metrics.hpp"
#include "oceansim/workload.hpp"

using namespace oceansim;

TEST_CASE("profile assignment marks the rounded share and is seed stable") {
  for (double f : {0.0, 0.125, 0.25, 0.5, 0.75, 1.0}) {
    RngStream a(9, StreamId::AdversarySelection), b(9, StreamId::AdversarySelection);
    const auto pa = adversary::assign_profiles(a, 40, f, adversary::Profile::Misleading);
    CHECK(pa == adversary::assign_profiles(b, 40, f, adversary::Profile::Misleading));
    CHECK(static_cast<std::size_t>(std::count(pa.begin(), pa.end(), adversary::Profile::Misleading)) ==
          adversary::malicious_count(40, f));
  }
  CHECK(adversary::malicious_count(40, 0.125) == 5);
  CHECK(adversary::malicious_count(40, 0.375) == 15);
}

TEST_CASE("forwarding decisions per profile") {
  using adversary::Profile;
  RngStream s(1, StreamId::AdversaryDrop);
  CHECK(adversary::decide_data_forward(Profile::Cooperative, 1.0, s) == adversary::ForwardDecision::Forward);
  CHECK(adversary::decide_data_forward(Profile::Misleading, 1.0, s) == adversary::ForwardDecision::Drop);
  CHECK(adversary::decide_data_forward(Profile::Selfish, 1.0, s) == adversary::ForwardDecision::Drop);
  CHECK(adversary::decide_data_forward(Profile::Misleading, 0.0, s) == adversary::ForwardDecision::Forward);
  CHECK(adversary::decide_rreq_participation(Profile::Misleading) == adversary::RreqDecision::Participate);
  CHECK(adversary::decide_rreq_participation(Profile::Selfish) == adversary::RreqDecision::Ignore);

  int drops = 0;
  for (int i = 0; i < 20000; ++i)
    drops += adversary::decide_data_forward(Profile::Misleading, 0.3, s) == adversary::ForwardDecision::Drop;
  CHECK(drops / 20000.0 == doctest::Approx(0.3).epsilon(0.05));
  CHECK(adversary::parse_profile("selfish") == Profile::Selfish);
  CHECK_FALSE(adversary::parse_profile("evil"));
}

TEST_CASE("flows are distinct ordered pairs from the pool") {
  RngStream s(3, StreamId::Workload);
  const std::vector<NodeId> pool{1, 4, 6, 9, 12};
  const auto flows = workload::build_flows(s, pool, 20, workload::Params{});
  std::set<std::pair<NodeId, NodeId>> pairs;
  for (const auto& f : flows) {
    CHECK(f.src != f.dst);
    CHECK(std::count(pool.begin(), pool.end(), f.src) == 1);
    CHECK(std::count(pool.begin(), pool.end(), f.dst) == 1);
    CHECK(f.start >= 0.0);
    CHECK(f.start <= 10.0);
    pairs.insert({f.src, f.dst});
  }
  CHECK(pairs.size() == 20);
  RngStream t(3, StreamId::Workload);
  CHECK_THROWS_AS(workload::build_flows(t, pool, 21, workload::Params{}), std::invalid_argument);
}

TEST_CASE("offered packet count matches the closed form") {
  workload::CbrFlow f;
  f.rate = 4.0;
  f.start = 2.5;
  // Emissions at 2.5 + k/4 while emission + 0.25 <= 1000: k = 0 .. 3989.
  CHECK(workload::offered_packets(f, 1000.0) == 3990);
  CHECK(f.emission_time(4) == 3.5);
  f.start = 999.9;
  CHECK(workload::offered_packets(f, 1000.0) == 0);
}

TEST_CASE("metric formulas") {
  metrics::RunMetrics m;
  CHECK_FALSE(metrics::throughput_pct(m));
  CHECK_FALSE(metrics::avg_delay(m));
  CHECK_FALSE(metrics::normalized_overhead(m));
  m.data_sent = 10;
  m.data_delivered = 6;
  m.drop(metrics::DropReason::NoRoute) = 1;
  m.drop(metrics::DropReason::AdversaryDrop) = 2;
  m.pending_at_end = 1;
  m.routing_tx = 30;
  m.delay_samples = {0.1, 0.2, 0.3};
  m.per_delivery_hops = {1, 2, 3, 2, 2, 2};
  m.record_outcome(1, true);
  m.record_outcome(2, true);
  m.record_outcome(2, false);
  m.record_outcome(3, false);
  m.final_energy = {1.0, 2.0, 0.0};
  m.energy.resize(3);
  m.energy[2].death_time = 10.0;
  CHECK(*metrics::throughput_pct(m) == doctest::Approx(60.0));
  CHECK(*metrics::throughput_pct_min_hops(m, 2) == doctest::Approx(100.0 / 3.0));
  CHECK(*metrics::avg_delay(m) == doctest::Approx(0.2));
  CHECK(*metrics::normalized_overhead(m) == doctest::Approx(5.0));
  CHECK(*metrics::mean_hops(m) == doctest::Approx(2.0));
  CHECK(metrics::final_energy_avg(m) == doctest::Approx(1.0));
  CHECK(metrics::dead_nodes(m) == 1);
  CHECK(metrics::packets_conserved(m));
  ++m.data_sent;
  CHECK_FALSE(metrics::packets_conserved(m));
}

TEST_CASE("run csv cells align with columns and leave absent values empty") {
  metrics::RunMetrics m;
  const auto cells = metrics::run_csv_cells(4, m);
  const auto& cols = metrics::run_csv_columns();
  REQUIRE(cells.size() == cols.size());
  CHECK(cells[0] == "4");
  const auto at = std::find(cols.begin(), cols.end(), "throughput_pct") - cols.begin();
  CHECK(cells[static_cast<std::size_t>(at)].empty());
  CHECK(metrics::format_number(0.1) == "0.1");
  CHECK(metrics::format_number(400) == "400");
}

TEST_CASE("energy ledger error") {
  metrics::RunMetrics m;
  metrics::NodeEnergy e;
  e.initial = 5.0;
  e.time_tx = 1.0;
  e.time_rx = 2.0;
  e.time_idle = 3.0;
  e.remaining = 5.0 - (1.4 + 2 * 1.0 + 3 * 0.83);
  m.energy.push_back(e);
  CHECK(metrics::energy_ledger_error(m, 1.4, 1.0, 0.83) < 1e-12);
  m.energy[0].remaining -= 0.5;
  CHECK(metrics::energy_ledger_error(m, 1.4, 1.0, 0.83) == doctest::Approx(0.5));
}

TEST_CASE("scenario text round-trips through describe") {
  const ScenarioConfig cfg = parse_scenario(
      "# comment\n"
      "n_nodes = 12\n"
      "pause_time = 400   # trailing comment\n"
      "malicious_fraction = 0.25\n"
      "faulty_threshold = -120\n"
      "chip_scheme = optimistic\n");
  CHECK(cfg.n_nodes == 12);
  CHECK(cfg.mobility.pause_time == 400.0);
  CHECK(cfg.ocean.second_chance_timeout == 120.0);
  CHECK(cfg.ocean.reentry_rating == -110);
  CHECK(cfg.ocean.chip_scheme == ocean::ChipScheme::Optimistic);

  // describe() emits "# key = value [tag]"; strip the comment marks and tags.
  std::string stripped;
  std::size_t pos = 0;
  const std::string d = describe(cfg);
  while (pos < d.size()) {
    const auto end = d.find('\n', pos);
    std::string line = d.substr(pos, end - pos);
    pos = end + 1;
    if (line.rfind("# ", 0) != 0) continue;
    line = line.substr(2);
    const auto tag = line.find(" [");
    if (tag == std::string::npos || line.find(" = ") == std::string::npos) continue;
    stripped += line.substr(0, tag) + '\n';
  }
  const ScenarioConfig again = parse_scenario(stripped);
  CHECK(describe(again) == d);
}

TEST_CASE("explicit second-chance keys beat the tabulated pair") {
  const ScenarioConfig cfg = parse_scenario("faulty_threshold = -80\nsecond_chance_timeout = 5\n");
  CHECK(cfg.ocean.second_chance_timeout == 5.0);
  CHECK(cfg.ocean.reentry_rating == -70);
}

TEST_CASE("scenario errors name the line") {
  CHECK_THROWS_WITH_AS(parse_scenario("n_nodes = 5\nbogus = 1\n"), doctest::Contains("line 2"), ConfigError);
  CHECK_THROWS_AS(parse_scenario("n_nodes = -3\n"), ConfigError);
  CHECK_THROWS_AS(parse_scenario("malicious_fraction = 1.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_scenario("pause_time\n"), ConfigError);
  CHECK_THROWS_AS(parse_scenario("ocean_enabled = maybe\n"), ConfigError);
}

TEST_CASE("every field carries a provenance tag") {
  const std::string d = describe(ScenarioConfig{});
  for (const auto& f : config_fields()) {
    CHECK(d.find("# " + std::string(f.key) + " = ") != std::string::npos);
  }
  CHECK(d.find("[published]") != std::string::npos);
  CHECK(d.find("[implementation]") != std::string::npos);
}
