#pragma once

#include <cmath>

#include "oceansim/engine.hpp"

namespace oceansim {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

struct Arena {
  double width = 1500.0;
  double height = 300.0;

  bool contains(Vec2 p) const { return p.x >= 0 && p.x <= width && p.y >= 0 && p.y <= height; }
};

namespace mobility {

struct Params {
  Arena arena;
  double max_speed = 20.0;
  double min_speed = 0.1;
  double pause_time = 0.0;
  SimTime sim_duration = 1000.0;
};

struct Waypoint {
  Vec2 destination;
  double speed = 0.0;
};

/// Destination uniform over the arena, speed uniform over (min_speed, max_speed].
Waypoint sample_waypoint(RngStream& stream, const Arena& arena, double min_speed, double max_speed);

enum class Phase { Moving, Paused };

struct WaypointState {
  Vec2 origin;  // position at phase_start
  Vec2 destination;
  double speed = 0.0;
  Phase phase = Phase::Paused;
  SimTime phase_start = 0.0;
  SimTime phase_end = 0.0;
};

/// RandomWaypoint trajectory of a single node, advanced lazily on query.
class RandomWaypoint {
 public:
  /// Places the node uniformly using `placement` and draws later legs from `legs`.
  /// With pause_time >= sim_duration the node never leaves its start point.
  RandomWaypoint(const Params& params, RngStream& placement, RngStream legs);

  /// Fixed node that never moves.
  static RandomWaypoint fixed(Vec2 position);

  /// Queries must be non-decreasing in `t`.
  Vec2 position_at(SimTime t);

  const WaypointState& state() const { return m_state; }

 private:
  RandomWaypoint(Vec2 position, RngStream legs);
  void advance_to(SimTime t);

  Params m_params;
  RngStream m_legs;
  WaypointState m_state;
  bool m_fixed = false;
};

}  // namespace mobility
}  // namespace oceansim
