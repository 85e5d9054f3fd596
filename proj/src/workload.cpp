#include "oceansim/workload.hpp"

#include <set>
#include <stdexcept>
#include <utility>

namespace oceansim::workload {

namespace {
constexpr double kSlack = 1e-9;
}

std::vector<CbrFlow> build_flows(RngStream& stream, const std::vector<NodeId>& pool, std::size_t n_connections,
                                 const Params& params) {
  const std::size_t n = pool.size();
  if (n_connections > 0 && (n < 2 || n_connections > n * (n - 1)))
    throw std::invalid_argument("endpoint pool too small for the requested connections");
  std::vector<CbrFlow> flows;
  std::set<std::pair<NodeId, NodeId>> used;
  while (flows.size() < n_connections) {
    const NodeId src = pool[stream.below(n)];
    const NodeId dst = pool[stream.below(n)];
    if (src == dst || !used.emplace(src, dst).second) continue;
    CbrFlow f;
    f.src = src;
    f.dst = dst;
    f.rate = params.send_rate;
    f.size = params.packet_size;
    f.start = stream.uniform(0.0, params.start_window);
    flows.push_back(f);
  }
  return flows;
}

bool emission_allowed(const CbrFlow& flow, std::uint32_t k, SimTime sim_duration) {
  return flow.emission_time(k) + flow.interval() <= sim_duration + kSlack;
}

std::uint64_t offered_packets(const CbrFlow& flow, SimTime sim_duration) {
  std::uint64_t k = 0;
  while (emission_allowed(flow, static_cast<std::uint32_t>(k), sim_duration)) ++k;
  return k;
}

}  // namespace oceansim::workload
