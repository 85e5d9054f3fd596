#pragma once

#include <cstddef>
#include <vector>

#include "oceansim/engine.hpp"

namespace oceansim::workload {

struct Params {
  std::size_t max_connections = 20;
  double send_rate = 4.0;         // packets per second per connection
  std::size_t packet_size = 512;  // bytes
  SimTime start_window = 10.0;    // flows start uniformly in [0, start_window]
};

struct CbrFlow {
  NodeId src = 0;
  NodeId dst = 0;
  double rate = 4.0;
  std::size_t size = 512;
  SimTime start = 0.0;
  std::uint32_t seq = 0;  // packets emitted so far

  SimTime interval() const { return 1.0 / rate; }
  /// Emission time of the k-th packet, computed without accumulation error.
  SimTime emission_time(std::uint32_t k) const { return start + static_cast<double>(k) / rate; }
};

/// Draws `n_connections` distinct ordered pairs from `pool`.
/// Throws std::invalid_argument when the pool cannot supply that many pairs.
std::vector<CbrFlow> build_flows(RngStream& stream, const std::vector<NodeId>& pool, std::size_t n_connections,
                                 const Params& params);

/// Number of packets a flow offers before `sim_duration` under the rule that
/// an emission at t happens only when t + 1/rate <= sim_duration.
std::uint64_t offered_packets(const CbrFlow& flow, SimTime sim_duration);

/// True when the k-th emission falls inside the run.
bool emission_allowed(const CbrFlow& flow, std::uint32_t k, SimTime sim_duration);

}  // namespace oceansim::workload
