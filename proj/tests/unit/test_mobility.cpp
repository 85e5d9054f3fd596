#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "oceansim/mobility.hpp"

using namespace oceansim;
using namespace oceansim::mobility;

TEST_CASE("waypoints are uniform over the arena with bounded speed") {
  RngStream s(9, StreamId::Mobility);
  const Arena arena;
  double sx = 0, sy = 0, sv = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const Waypoint w = sample_waypoint(s, arena, 0.1, 20.0);
    REQUIRE(arena.contains(w.destination));
    REQUIRE(w.speed > 0.1);
    REQUIRE(w.speed <= 20.0);
    sx += w.destination.x;
    sy += w.destination.y;
    sv += w.speed;
  }
  CHECK(sx / n == doctest::Approx(750.0).epsilon(0.02));
  CHECK(sy / n == doctest::Approx(150.0).epsilon(0.02));
  CHECK(sv / n == doctest::Approx((0.1 + 20.0) / 2).epsilon(0.02));
}

TEST_CASE("pause equal to the run length keeps nodes static") {
  Params p;
  p.pause_time = 1000.0;
  RngStream placement(1, StreamId::Placement);
  RandomWaypoint w(p, placement, RngStream(1, StreamId::Mobility, 0));
  const Vec2 start = w.position_at(0.0);
  for (double t = 0; t <= 1000.0; t += 37.5) {
    const Vec2 q = w.position_at(t);
    CHECK(q.x == start.x);
    CHECK(q.y == start.y);
  }
}

TEST_CASE("legs take distance over speed and end with a pause") {
  Params p;
  p.pause_time = 5.0;
  RngStream placement(2, StreamId::Placement);
  RandomWaypoint w(p, placement, RngStream(2, StreamId::Mobility, 0));
  double t = 0;
  // Walk until the first leg begins.
  while (w.state().phase != Phase::Moving) w.position_at(t += 0.01);
  const WaypointState leg = w.state();
  CHECK(leg.phase_end - leg.phase_start ==
        doctest::Approx(distance(leg.origin, leg.destination) / leg.speed).epsilon(1e-12));
  w.position_at(leg.phase_end);
  CHECK(w.state().phase == Phase::Paused);
  CHECK(w.state().phase_end - w.state().phase_start == doctest::Approx(5.0));
  const Vec2 at = w.position_at(leg.phase_end);
  CHECK(at.x == doctest::Approx(leg.destination.x));
  CHECK(at.y == doctest::Approx(leg.destination.y));
}

TEST_CASE("zero pause re-departs on arrival") {
  Params p;
  p.pause_time = 0.0;
  RngStream placement(3, StreamId::Placement);
  RandomWaypoint w(p, placement, RngStream(3, StreamId::Mobility, 0));
  w.position_at(0.0);
  CHECK(w.state().phase == Phase::Moving);
  const SimTime arrival = w.state().phase_end;
  w.position_at(arrival);
  CHECK(w.state().phase == Phase::Moving);
  CHECK(w.state().phase_start == arrival);
}

TEST_CASE("trajectories stay inside the arena and respect the speed limit") {
  for (std::uint32_t node = 0; node < 20; ++node) {
    Params p;
    p.pause_time = node % 2 ? 0.0 : 30.0;
    RngStream placement(11, StreamId::Placement);
    RandomWaypoint w(p, placement, RngStream(11, StreamId::Mobility, node));
    RngStream steps(node, StreamId::Workload);
    double t = 0;
    Vec2 prev = w.position_at(0);
    while (t < 1000) {
      const double dt = steps.uniform(0, 5);
      t += dt;
      const Vec2 q = w.position_at(t);
      REQUIRE(p.arena.contains(q));
      REQUIRE(distance(prev, q) <= p.max_speed * dt + 1e-9);
      prev = q;
    }
  }
}

TEST_CASE("querying the past is an error") {
  Params p;
  RngStream placement(4, StreamId::Placement);
  RandomWaypoint w(p, placement, RngStream(4, StreamId::Mobility, 0));
  w.position_at(100.0);
  CHECK_THROWS_AS(w.position_at(w.state().phase_start - 1.0), std::logic_error);
}

TEST_CASE("fixed nodes never move") {
  RandomWaypoint w = RandomWaypoint::fixed({10, 20});
  CHECK(w.position_at(0).x == 10);
  CHECK(w.position_at(1e6).y == 20);
}
