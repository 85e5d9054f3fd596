#include "oceansim/mobility.hpp"

#include <limits>
#include <stdexcept>

namespace oceansim::mobility {

Waypoint sample_waypoint(RngStream& stream, const Arena& arena, double min_speed, double max_speed) {
  Waypoint w;
  w.destination.x = stream.uniform(0.0, arena.width);
  w.destination.y = stream.uniform(0.0, arena.height);
  // 1 - u lies in (0, 1], so the speed lands in (min_speed, max_speed].
  w.speed = min_speed + (max_speed - min_speed) * (1.0 - stream.next());
  return w;
}

RandomWaypoint::RandomWaypoint(const Params& params, RngStream& placement, RngStream legs)
    : m_params(params), m_legs(std::move(legs)) {
  if (params.arena.width <= 0 || params.arena.height <= 0)
    throw std::invalid_argument("arena dimensions must be positive");
  if (params.min_speed <= 0 || params.max_speed < params.min_speed)
    throw std::invalid_argument("speeds must satisfy 0 < min_speed <= max_speed");
  m_state.origin = {placement.uniform(0.0, params.arena.width),
                    placement.uniform(0.0, params.arena.height)};
  m_state.destination = m_state.origin;
  m_state.phase = Phase::Paused;
  m_state.phase_start = 0.0;
  if (params.pause_time >= params.sim_duration)
    m_state.phase_end = std::numeric_limits<double>::infinity();
  else
    m_state.phase_end = placement.uniform(0.0, params.pause_time);
}

RandomWaypoint::RandomWaypoint(Vec2 position, RngStream legs) : m_legs(std::move(legs)), m_fixed(true) {
  m_state.origin = position;
  m_state.destination = position;
  m_state.phase_end = std::numeric_limits<double>::infinity();
}

RandomWaypoint RandomWaypoint::fixed(Vec2 position) {
  return RandomWaypoint(position, RngStream(0, StreamId::Mobility));
}

void RandomWaypoint::advance_to(SimTime t) {
  while (t >= m_state.phase_end) {
    const SimTime boundary = m_state.phase_end;
    if (m_state.phase == Phase::Moving) {
      m_state.origin = m_state.destination;
      m_state.phase = Phase::Paused;
      m_state.phase_start = boundary;
      m_state.phase_end = boundary + m_params.pause_time;
    } else {
      const Waypoint w = sample_waypoint(m_legs, m_params.arena, m_params.min_speed, m_params.max_speed);
      m_state.destination = w.destination;
      m_state.speed = w.speed;
      m_state.phase = Phase::Moving;
      m_state.phase_start = boundary;
      m_state.phase_end = boundary + distance(m_state.origin, w.destination) / w.speed;
    }
  }
}

Vec2 RandomWaypoint::position_at(SimTime t) {
  if (m_fixed) return m_state.origin;
  if (t < m_state.phase_start) throw std::logic_error("position query earlier than last state update");
  advance_to(t);
  if (m_state.phase == Phase::Paused) return m_state.origin;
  const double total = m_state.phase_end - m_state.phase_start;
  const double frac = total > 0 ? (t - m_state.phase_start) / total : 1.0;
  return {m_state.origin.x + (m_state.destination.x - m_state.origin.x) * frac,
          m_state.origin.y + (m_state.destination.y - m_state.origin.y) * frac};
}

}  // namespace oceansim::mobility
