#include <doctest.h>

#include "oceansim/dsr.hpp"

using namespace oceansim;
using namespace oceansim::dsr;

namespace {
Packet data_to(NodeId dst, std::uint64_t uid) {
  Packet p;
  p.target = dst;
  p.uid = uid;
  return p;
}
}  // namespace

TEST_CASE("route cache keeps well-formed loop-free routes only") {
  RouteCache c(0);
  CHECK(c.add({0, 1, 2}, 0.0));
  CHECK_FALSE(c.add({0, 1, 2}, 1.0));  // duplicate
  CHECK(c.add({0, 3, 4, 2}, 1.0));
  CHECK_FALSE(c.add({1, 2}, 0.0));        // does not start at owner
  CHECK_FALSE(c.add({0, 1, 0, 2}, 0.0));  // loop
  CHECK_FALSE(c.add({0}, 0.0));
  CHECK(c.routes_to(2).size() == 2);
  CHECK(c.routes_to(9).empty());
  CHECK(c.size() == 2);
}

TEST_CASE("evicting a broken link removes exactly the routes using it") {
  RouteCache c(0);
  c.add({0, 1, 2, 3}, 0.0);
  c.add({0, 4, 3}, 0.0);
  c.add({0, 1, 5}, 0.0);
  CHECK(c.evict_link(1, 2) == 1);
  REQUIRE(c.routes_to(3).size() == 1);
  CHECK(c.routes_to(3)[0] == Route{0, 4, 3});
  CHECK(c.routes_to(5).size() == 1);
  CHECK(c.evict_link(7, 8) == 0);  // unknown link
  CHECK(c.evict_link(2, 1) == 0);  // links are directed
  CHECK(c.evict_link(4, 3) == 1);
  CHECK(c.routes_to(3).empty());
}

TEST_CASE("loop detection and link search") {
  CHECK(loop_free(Route{0, 1, 2}));
  CHECK_FALSE(loop_free(Route{0, 1, 2, 1}));
  CHECK(contains_link(Route{0, 1, 2}, 1, 2));
  CHECK_FALSE(contains_link(Route{0, 1, 2}, 0, 2));
}

TEST_CASE("request dedup never forgets") {
  RreqSeen s;
  CHECK(s.insert(1, 7));
  CHECK_FALSE(s.insert(1, 7));
  CHECK(s.insert(1, 8));
  CHECK(s.insert(2, 7));
  CHECK(s.contains(1, 7));
  CHECK_FALSE(s.contains(3, 7));
}

TEST_CASE("send buffer evicts the oldest when full and expires by age") {
  SendBuffer b(3);
  CHECK_FALSE(b.push(data_to(5, 1), 0.0));
  CHECK_FALSE(b.push(data_to(6, 2), 1.0));
  CHECK_FALSE(b.push(data_to(5, 3), 2.0));
  auto evicted = b.push(data_to(5, 4), 3.0);
  REQUIRE(evicted);
  CHECK(evicted->uid == 1);
  CHECK(b.oldest() == 1.0);
  CHECK(b.has_for(6));
  CHECK(b.destinations() == std::set<NodeId>{5, 6});

  const auto old = b.expire(31.5, 30.0);
  REQUIRE(old.size() == 1);
  CHECK(old[0].uid == 2);
  const auto to5 = b.take_for(5);
  REQUIRE(to5.size() == 2);
  CHECK(to5[0].uid == 3);  // FIFO
  CHECK(to5[1].uid == 4);
  CHECK(b.empty());
}

TEST_CASE("retry offsets double from half a second") {
  Params p;
  CHECK(p.retry_offset(1) == 0.5);
  CHECK(p.retry_offset(2) == 1.0);
  CHECK(p.retry_offset(3) == 2.0);
  CHECK(p.retry_offset(4) == 4.0);
  p.rreq_retry_factor = 0.5;
  CHECK_THROWS(p.validate());
}
