#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "oceansim/engine.hpp"

namespace oceansim {

using Route = std::vector<NodeId>;

enum class PacketKind : std::uint8_t { Data, Rreq, Rrep, Rerr };

inline bool is_control(PacketKind k) { return k != PacketKind::Data; }

/// One frame's worth of network-layer state.
///
/// Data: `route` is the source route and `hop_index` names the node currently
/// addressed. Rreq: `route` is the path accumulated so far. Rrep: `route` is
/// the discovered path and travels backwards, so `hop_index` decreases.
/// Rerr: `route` leads from the detecting node back to the data origin.
struct Packet {
  PacketKind kind = PacketKind::Data;
  NodeId origin = 0;
  NodeId target = 0;
  Route route;
  std::uint32_t hop_index = 0;
  std::uint64_t uid = 0;  // unique per data packet within a run
  std::uint32_t flow = 0;
  std::uint32_t request_id = 0;
  std::vector<NodeId> avoid_list;
  std::size_t size = 0;
  SimTime sent_at = 0.0;
  // Rerr only: the link that failed.
  NodeId link_from = 0;
  NodeId link_to = 0;
  // Data only: set at origination when the chosen route crossed a node the
  // originator had listed as faulty.
  bool contaminated = false;

  std::uint32_t route_hops() const { return route.empty() ? 0 : static_cast<std::uint32_t>(route.size() - 1); }
};

}  // namespace oceansim
