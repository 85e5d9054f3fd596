#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "oceansim/engine.hpp"

namespace oceansim::metrics {

enum class DropReason : std::uint8_t { NoRoute, BrokenLink, AdversaryDrop, OceanRejection, DeadNode };
inline constexpr std::size_t kDropReasonCount = 5;

std::string_view to_string(DropReason r);

struct HopBucket {
  std::uint64_t sent = 0;
  std::uint64_t delivered = 0;
};

struct FlowCounts {
  NodeId src = 0;
  NodeId dst = 0;
  std::uint64_t sent = 0;
  std::uint64_t delivered = 0;
};

struct NodeEnergy {
  double initial = 0.0;
  double remaining = 0.0;
  double time_tx = 0.0;
  double time_rx = 0.0;
  double time_idle = 0.0;
  double unpaid = 0.0;
  std::uint64_t tx_bytes = 0;
  std::uint64_t rx_bytes = 0;
  double death_time = -1.0;  // negative while alive
};

struct RunMetrics {
  std::uint64_t data_sent = 0;
  std::uint64_t data_delivered = 0;
  std::vector<double> delay_samples;
  std::vector<std::uint32_t> per_delivery_hops;
  std::uint64_t routing_tx = 0;
  std::uint64_t rreq_tx = 0;
  std::uint64_t rrep_tx = 0;
  std::uint64_t rerr_tx = 0;
  std::array<std::uint64_t, kDropReasonCount> drops{};
  std::uint64_t pending_at_end = 0;  // still buffered, queued or on the air at the end
  /// Outcome population per source-route hop count; index 0 holds packets
  /// that never left their origin with a route.
  std::vector<HopBucket> by_hops;
  std::vector<FlowCounts> flows;
  std::vector<double> final_energy;
  std::vector<NodeEnergy> energy;
  std::uint64_t contaminated_deliveries = 0;
  std::uint64_t events_dispatched = 0;

  std::uint64_t& drop(DropReason r) { return drops[static_cast<std::size_t>(r)]; }
  std::uint64_t drop(DropReason r) const { return drops[static_cast<std::size_t>(r)]; }
  std::uint64_t total_drops() const;
  void record_outcome(std::uint32_t hops, bool delivered);
};

/// Packet delivery ratio in percent; absent when nothing was sent.
std::optional<double> throughput_pct(const RunMetrics& m);
/// Delivery ratio over packets whose source route spans at least `min_hops`.
std::optional<double> throughput_pct_min_hops(const RunMetrics& m, std::uint32_t min_hops);
std::optional<double> avg_delay(const RunMetrics& m);
std::uint64_t routing_packets(const RunMetrics& m);
std::optional<double> normalized_overhead(const RunMetrics& m);
double final_energy_avg(const RunMetrics& m);
std::optional<double> mean_hops(const RunMetrics& m);
std::size_t dead_nodes(const RunMetrics& m);

/// sent == delivered + every categorized drop + pending_at_end.
bool packets_conserved(const RunMetrics& m);

/// Largest |initial - remaining - (sum of power x time - unpaid)| over nodes.
double energy_ledger_error(const RunMetrics& m, double p_tx, double p_rx, double p_idle);

/// Column names of the one-row-per-run CSV, in output order.
const std::vector<std::string>& run_csv_columns();
/// Cells aligned with run_csv_columns(); absent statistics are empty strings.
std::vector<std::string> run_csv_cells(std::uint64_t seed, const RunMetrics& m);

/// Per-node and per-flow detail listing.
std::string detail_report(const RunMetrics& m);

/// Shortest round-trip decimal form of `v`.
std::string format_number(double v);

}  // namespace oceansim::metrics
