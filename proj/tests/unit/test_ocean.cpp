#include <doctest.h>

#include <functional>

#include "oceansim/ocean.hpp"

using namespace oceansim;
using namespace oceansim::ocean;

namespace {

struct Bench {
  explicit Bench(Params p = {}) : agent(0, p, sched) { agent.enable_log(); }
  Scheduler sched;
  Agent agent;
  std::uint64_t uid = 0;

  // A forward handed to `n` that is never observed.
  void miss(NodeId n) {
    agent.register_watch({0, 99, uid++, 1}, n, sched.now(), sched.now() + 1e-3);
    sched.run(sched.now() + 2e-3);
  }
  // A forward handed to `n` and overheard in time.
  void hit(NodeId n) {
    const Fingerprint fp{0, 99, uid++, 1};
    agent.register_watch(fp, n, sched.now() + 1e-3, sched.now() + 2e-3);
    CHECK(agent.on_overhear(fp, n, sched.now() + 5e-4));
    sched.run(sched.now() + 3e-3);
  }
};

}  // namespace

TEST_CASE("observed forwards raise the rating, missed ones lower it") {
  Bench b;
  b.hit(1);
  CHECK(b.agent.rating(1) == 1);
  b.miss(1);
  CHECK(b.agent.rating(1) == -1);
  b.miss(2);
  CHECK(b.agent.rating(2) == -2);
  CHECK(b.agent.pending_watch_count() == 0);
}

TEST_CASE("no watch on the final target and none twice for a fingerprint") {
  Bench b;
  b.agent.register_watch({0, 5, 1, 1}, 5, 1.0, 1.0);
  CHECK(b.agent.pending_watch_count() == 0);
  b.agent.register_watch({0, 9, 1, 1}, 5, 1.0, 1.0);
  b.agent.register_watch({0, 9, 1, 1}, 5, 1.0, 1.0);
  CHECK(b.agent.pending_watch_count() == 1);
  b.sched.run(2.0);
  CHECK(b.agent.rating(5) == -2);
}

TEST_CASE("overhearing an unrelated or late packet changes nothing") {
  Bench b;
  const Fingerprint fp{0, 9, 1, 1};
  b.agent.register_watch(fp, 5, 1e-3, 2e-3);
  CHECK_FALSE(b.agent.on_overhear({0, 9, 2, 1}, 5, 0.0));
  CHECK_FALSE(b.agent.on_overhear(fp, 6, 0.0));
  CHECK_FALSE(b.agent.on_overhear(fp, 5, 1.5e-3));
  CHECK(b.agent.rating(5) == 0);
  b.sched.run(1.0);
  CHECK(b.agent.rating(5) == -2);
}

TEST_CASE("faulty strictly below the threshold, listed for exactly the timeout") {
  Bench b;
  for (int i = 0; i < 20; ++i) b.miss(1);
  CHECK(b.agent.rating(1) == -40);
  CHECK_FALSE(b.agent.is_faulty(1));
  b.miss(1);
  CHECK(b.agent.rating(1) == -42);
  CHECK(b.agent.is_faulty(1));
  const SimTime since = *b.agent.record(1)->faulty_since;
  b.miss(1);  // more misses while listed do not move the release
  CHECK(*b.agent.record(1)->faulty_since == since);
  b.sched.run(since + 30.0 - 1e-9);
  CHECK(b.agent.is_faulty(1));
  b.sched.run(since + 30.0);
  CHECK_FALSE(b.agent.is_faulty(1));
  CHECK(b.agent.rating(1) == -30);
  // Five more misses take -30 to -40, still not faulty; the sixth lists it.
  for (int i = 0; i < 5; ++i) b.miss(1);
  CHECK(b.agent.rating(1) == -40);
  CHECK_FALSE(b.agent.is_faulty(1));
  b.miss(1);
  CHECK(b.agent.is_faulty(1));
}

TEST_CASE("threshold zero lists a neighbour after one miss") {
  Params p;
  p.faulty_threshold = 0;
  std::tie(p.second_chance_timeout, p.reentry_rating) = paired_second_chance(0, 30.0);
  Bench b(p);
  b.miss(3);
  CHECK(b.agent.is_faulty(3));
  b.sched.run(b.sched.now() + 10.0);
  CHECK(b.agent.rating(3) == 10);
}

TEST_CASE("tabulated second-chance pairs") {
  CHECK(paired_second_chance(0, 1) == std::pair<SimTime, int>{10.0, 10});
  CHECK(paired_second_chance(-40, 1) == std::pair<SimTime, int>{30.0, -30});
  CHECK(paired_second_chance(-80, 1) == std::pair<SimTime, int>{80.0, -70});
  CHECK(paired_second_chance(-120, 1) == std::pair<SimTime, int>{120.0, -110});
  CHECK(paired_second_chance(-160, 1) == std::pair<SimTime, int>{160.0, -150});
  CHECK(paired_second_chance(-200, 1) == std::pair<SimTime, int>{200.0, -190});
  CHECK(paired_second_chance(-55, 42) == std::pair<SimTime, int>{42.0, -45});
}

TEST_CASE("avoid list is a snapshot of the faulty set") {
  Params p;
  p.faulty_threshold = 0;
  p.reentry_rating = 10;
  p.second_chance_timeout = 5;
  Bench b(p);
  CHECK(b.agent.build_avoid_list().empty());
  b.miss(7);
  CHECK(b.agent.build_avoid_list() == std::vector<NodeId>{7});
  b.sched.run(b.sched.now() + 5.0);
  CHECK(b.agent.build_avoid_list().empty());
}

TEST_CASE("route selection skips faulty members and prefers short, then smallest") {
  Params p;
  p.faulty_threshold = 0;
  p.reentry_rating = 10;
  Bench b(p);
  const std::vector<Route> routes{{0, 5, 9}, {0, 2, 3, 9}, {0, 1, 4, 9}};
  CHECK(*b.agent.select_route(routes) == Route{0, 5, 9});
  b.miss(5);
  CHECK(*b.agent.select_route(routes) == Route{0, 1, 4, 9});
  b.miss(1);
  b.miss(2);
  CHECK_FALSE(b.agent.select_route(routes));
  CHECK(*select_min_hop(std::span<const Route>(routes), [](NodeId) { return true; }) == Route{0, 5, 9});
}

TEST_CASE("admission rejects faulty origins and empty chip balances") {
  Params p;
  p.faulty_threshold = 0;
  p.reentry_rating = 10;
  p.chip_initial = 2;
  Bench b(p);
  CHECK(b.agent.admit_traffic(3, 4) == Admission::Admit);
  CHECK(b.agent.chips(4) == 1);
  CHECK(b.agent.admit_traffic(3, 4) == Admission::Admit);
  CHECK(b.agent.admit_traffic(3, 4) == Admission::RejectNoChips);
  CHECK(b.agent.chips(4) == 0);  // a rejection never overdraws
  b.agent.chip_accrual_tick(10.0);
  CHECK(b.agent.admit_traffic(3, 4) == Admission::Admit);
  b.miss(3);
  CHECK(b.agent.admit_traffic(3, 4) == Admission::RejectFaultyOrigin);
}

TEST_CASE("default chip balance admits and debits by one") {
  Bench b;
  CHECK(b.agent.admit_traffic(1, 2) == Admission::Admit);
  CHECK(b.agent.chips(2) == 49);
}

TEST_CASE("chip credit follows the selected scheme and respects the cap") {
  Params p;
  p.chip_scheme = ChipScheme::Optimistic;
  Bench opt(p);
  opt.agent.on_optimistic_accept(4);
  CHECK(opt.agent.chips(4) == 51);
  opt.hit(4);  // observation earns nothing under the optimistic scheme
  CHECK(opt.agent.chips(4) == 51);
  opt.agent.chip_accrual_tick(1000.0);
  CHECK(opt.agent.chips(4) == p.chip_cap);
  opt.agent.on_optimistic_accept(4);
  CHECK(opt.agent.chips(4) == p.chip_cap);

  Bench pes;
  pes.agent.on_optimistic_accept(4);
  CHECK(pes.agent.chips(4) == 50);
  pes.hit(4);
  CHECK(pes.agent.chips(4) == 51);
}

TEST_CASE("accrual adds rate times period to every known neighbour") {
  Params p;
  p.chip_accrual_rate = 0.1;
  p.chip_initial = 0;
  Bench b(p);
  b.agent.admit_traffic(1, 2);
  b.agent.chip_accrual_tick(10.0);
  CHECK(b.agent.chips(2) == doctest::Approx(1.0));
}

TEST_CASE("random event sequences obey the rating grammar") {
  for (int threshold : {0, -40, -80, -120, -160, -200}) {
    Params p;
    p.faulty_threshold = threshold;
    std::tie(p.second_chance_timeout, p.reentry_rating) = paired_second_chance(threshold, 30.0);
    Bench b(p);
    RngStream rng(static_cast<std::uint64_t>(-threshold) + 1, StreamId::Workload);
    for (int i = 0; i < 3000; ++i) {
      const NodeId n = 1 + static_cast<NodeId>(rng.below(3));
      if (rng.next() < 0.3)
        b.hit(n);
      else
        b.miss(n);
      if (rng.next() < 0.01) b.sched.run(b.sched.now() + rng.uniform(0, 2 * p.second_chance_timeout));
    }
    b.sched.run(b.sched.now() + 1000);
    std::map<NodeId, int> rating;
    std::map<NodeId, SimTime> entered;
    for (const RatingEvent& e : b.agent.log()) {
      const int before = rating[e.neighbor];
      switch (e.kind) {
        case RatingEventKind::Positive: REQUIRE(e.rating_after == before + 1); break;
        case RatingEventKind::Negative: REQUIRE(e.rating_after == before - 2); break;
        case RatingEventKind::Reset: REQUIRE(e.rating_after == p.reentry_rating); break;
        case RatingEventKind::EnterFaulty:
          REQUIRE(e.rating_after < threshold);
          REQUIRE(before - 2 < threshold);
          entered[e.neighbor] = e.at;
          break;
        case RatingEventKind::LeaveFaulty:
          REQUIRE(e.at - entered[e.neighbor] == doctest::Approx(p.second_chance_timeout).epsilon(1e-12));
          break;
      }
      if (e.kind != RatingEventKind::EnterFaulty && e.kind != RatingEventKind::LeaveFaulty)
        rating[e.neighbor] = e.rating_after;
    }
  }
}

TEST_CASE("parameter validation") {
  Params p;
  p.reentry_rating = p.faulty_threshold;
  CHECK_THROWS(p.validate());
  Params q;
  q.rating_decrement = 1;
  CHECK_THROWS(q.validate());
  Params r;
  r.watch_timeout = 0;
  CHECK_THROWS(r.validate());
  CHECK(parse_chip_scheme("optimistic") == ChipScheme::Optimistic);
  CHECK_FALSE(parse_chip_scheme("greedy"));
}
