#pragma once

#include <deque>
#include <map>
#include <memory>

#include "oceansim/simulation.hpp"

namespace oceansim::detail {

struct Discovery {
  std::size_t retries = 0;
  SimTime started = 0.0;
  EventHandle timer;
};

struct Frame {
  Packet packet;
  std::optional<NodeId> next_hop;  // empty for broadcasts
};

struct Node {
  Node(NodeId id, mobility::RandomWaypoint motion, const ScenarioConfig& cfg, adversary::Profile profile,
       std::uint64_t seed)
      : id(id),
        motion(std::move(motion)),
        energy(cfg.energy),
        profile(profile),
        drop_rng(seed, StreamId::AdversaryDrop, id),
        cache(id),
        buffer(cfg.dsr.send_buffer_capacity) {}

  NodeId id;
  mobility::RandomWaypoint motion;
  radio::EnergyMeter energy;
  adversary::Profile profile;
  RngStream drop_rng;

  std::deque<Frame> tx_queue;
  bool transmitting = false;
  bool pumping = false;
  bool dead_handled = false;

  dsr::RouteCache cache;
  dsr::RreqSeen seen;
  dsr::SendBuffer buffer;
  std::uint32_t next_request_id = 1;
  std::map<NodeId, Discovery> discoveries;
  EventHandle buffer_timer;

  std::unique_ptr<ocean::Agent> ocean;

  std::uint64_t tx_bytes = 0;
  std::uint64_t rx_bytes = 0;
};

}  // namespace oceansim::detail
