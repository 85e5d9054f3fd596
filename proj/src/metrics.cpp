#include "oceansim/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>

namespace oceansim::metrics {

std::string_view to_string(DropReason r) {
  switch (r) {
    case DropReason::NoRoute: return "no_route";
    case DropReason::BrokenLink: return "broken_link";
    case DropReason::AdversaryDrop: return "adversary";
    case DropReason::OceanRejection: return "ocean_rejection";
    case DropReason::DeadNode: return "dead_node";
  }
  return "unknown";
}

std::uint64_t RunMetrics::total_drops() const {
  return std::accumulate(drops.begin(), drops.end(), std::uint64_t{0});
}

void RunMetrics::record_outcome(std::uint32_t hops, bool delivered) {
  if (by_hops.size() <= hops) by_hops.resize(hops + 1);
  ++by_hops[hops].sent;
  if (delivered) ++by_hops[hops].delivered;
}

std::optional<double> throughput_pct(const RunMetrics& m) {
  if (m.data_sent == 0) return std::nullopt;
  return 100.0 * static_cast<double>(m.data_delivered) / static_cast<double>(m.data_sent);
}

std::optional<double> throughput_pct_min_hops(const RunMetrics& m, std::uint32_t min_hops) {
  std::uint64_t sent = 0, delivered = 0;
  for (std::size_t h = min_hops; h < m.by_hops.size(); ++h) {
    sent += m.by_hops[h].sent;
    delivered += m.by_hops[h].delivered;
  }
  if (sent == 0) return std::nullopt;
  return 100.0 * static_cast<double>(delivered) / static_cast<double>(sent);
}

std::optional<double> avg_delay(const RunMetrics& m) {
  if (m.delay_samples.empty()) return std::nullopt;
  const double sum = std::accumulate(m.delay_samples.begin(), m.delay_samples.end(), 0.0);
  return sum / static_cast<double>(m.delay_samples.size());
}

std::uint64_t routing_packets(const RunMetrics& m) { return m.routing_tx; }

std::optional<double> normalized_overhead(const RunMetrics& m) {
  if (m.data_delivered == 0) return std::nullopt;
  return static_cast<double>(m.routing_tx) / static_cast<double>(m.data_delivered);
}

double final_energy_avg(const RunMetrics& m) {
  if (m.final_energy.empty()) return 0.0;
  return std::accumulate(m.final_energy.begin(), m.final_energy.end(), 0.0) /
         static_cast<double>(m.final_energy.size());
}

std::optional<double> mean_hops(const RunMetrics& m) {
  if (m.per_delivery_hops.empty()) return std::nullopt;
  const double sum = std::accumulate(m.per_delivery_hops.begin(), m.per_delivery_hops.end(), 0.0);
  return sum / static_cast<double>(m.per_delivery_hops.size());
}

std::size_t dead_nodes(const RunMetrics& m) {
  return static_cast<std::size_t>(
      std::count_if(m.energy.begin(), m.energy.end(), [](const NodeEnergy& e) { return e.death_time >= 0; }));
}

bool packets_conserved(const RunMetrics& m) {
  return m.data_sent == m.data_delivered + m.total_drops() + m.pending_at_end;
}

double energy_ledger_error(const RunMetrics& m, double p_tx, double p_rx, double p_idle) {
  double worst = 0.0;
  for (const NodeEnergy& e : m.energy) {
    const double spent = p_tx * e.time_tx + p_rx * e.time_rx + p_idle * e.time_idle - e.unpaid;
    worst = std::max(worst, std::abs(e.initial - e.remaining - spent));
  }
  return worst;
}

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

namespace {

std::string cell(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }
std::string cell(std::uint64_t v) { return std::to_string(v); }

}  // namespace

const std::vector<std::string>& run_csv_columns() {
  static const std::vector<std::string> cols = {
      "seed",           "data_sent",         "data_delivered",    "throughput_pct",      "throughput_pct_2hop",
      "avg_delay",      "routing_packets",   "rreq_tx",           "rrep_tx",             "rerr_tx",
      "normalized_overhead", "final_energy_avg", "mean_hops",     "dead_nodes",          "drop_no_route",
      "drop_broken_link", "drop_adversary",  "drop_ocean_rejection", "drop_dead_node",   "pending_at_end",
      "contaminated_deliveries"};
  return cols;
}

std::vector<std::string> run_csv_cells(std::uint64_t seed, const RunMetrics& m) {
  return {cell(seed),
          cell(m.data_sent),
          cell(m.data_delivered),
          cell(throughput_pct(m)),
          cell(throughput_pct_min_hops(m, 2)),
          cell(avg_delay(m)),
          cell(routing_packets(m)),
          cell(m.rreq_tx),
          cell(m.rrep_tx),
          cell(m.rerr_tx),
          cell(normalized_overhead(m)),
          format_number(final_energy_avg(m)),
          cell(mean_hops(m)),
          cell(static_cast<std::uint64_t>(dead_nodes(m))),
          cell(m.drop(DropReason::NoRoute)),
          cell(m.drop(DropReason::BrokenLink)),
          cell(m.drop(DropReason::AdversaryDrop)),
          cell(m.drop(DropReason::OceanRejection)),
          cell(m.drop(DropReason::DeadNode)),
          cell(m.pending_at_end),
          cell(m.contaminated_deliveries)};
}

std::string detail_report(const RunMetrics& m) {
  std::ostringstream os;
  os << "node,remaining,time_tx,time_rx,time_idle,unpaid,tx_bytes,rx_bytes,death_time\n";
  for (std::size_t i = 0; i < m.energy.size(); ++i) {
    const NodeEnergy& e = m.energy[i];
    os << i << ',' << format_number(e.remaining) << ',' << format_number(e.time_tx) << ','
       << format_number(e.time_rx) << ',' << format_number(e.time_idle) << ',' << format_number(e.unpaid) << ','
       << e.tx_bytes << ',' << e.rx_bytes << ',' << (e.death_time >= 0 ? format_number(e.death_time) : "")
       << '\n';
  }
  os << "\nflow,src,dst,sent,delivered\n";
  for (std::size_t i = 0; i < m.flows.size(); ++i) {
    const FlowCounts& f = m.flows[i];
    os << i << ',' << f.src << ',' << f.dst << ',' << f.sent << ',' << f.delivered << '\n';
  }
  os << "\nhops,sent,delivered\n";
  for (std::size_t h = 0; h < m.by_hops.size(); ++h)
    os << h << ',' << m.by_hops[h].sent << ',' << m.by_hops[h].delivered << '\n';
  return os.str();
}

}  // namespace oceansim::metrics
