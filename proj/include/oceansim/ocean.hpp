#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "oceansim/engine.hpp"
#include "oceansim/packet.hpp"

namespace oceansim::ocean {

enum class ChipScheme { Optimistic, Pessimistic };

std::string_view to_string(ChipScheme s);
std::optional<ChipScheme> parse_chip_scheme(std::string_view s);

struct Params {
  int rating_increment = 1;
  int rating_decrement = -2;
  int faulty_threshold = -40;
  SimTime second_chance_timeout = 30.0;
  int reentry_rating = -30;
  SimTime watch_timeout = 1e-3;
  ChipScheme chip_scheme = ChipScheme::Pessimistic;
  double chip_initial = 50.0;
  double chip_debit = 1.0;
  double chip_credit = 1.0;
  double chip_accrual_rate = 20.0;   // chips per second
  SimTime chip_accrual_period = 1.0;
  double chip_cap = 100.0;

  void validate() const;
};

/// Second-chance timeout and re-entry rating paired with a faulty threshold.
/// The six studied thresholds use their tabulated values; any other
/// threshold keeps `fallback_timeout` and re-enters ten points above it.
std::pair<SimTime, int> paired_second_chance(int faulty_threshold, SimTime fallback_timeout);

/// Identifies one handed-over data packet.
struct Fingerprint {
  NodeId origin = 0;
  NodeId target = 0;
  std::uint64_t uid = 0;
  std::uint32_t hop_index = 0;

  auto operator<=>(const Fingerprint&) const = default;
};

struct PendingWatch {
  EventHandle expiry;
  SimTime forward_deadline = 0.0;
};

struct NeighborRecord {
  NodeId neighbor = 0;
  int rating = 0;
  bool faulty = false;
  std::optional<SimTime> faulty_since;
  double chips = 0.0;
  EventHandle second_chance;
  std::map<Fingerprint, PendingWatch> pending_watches;
};

enum class RatingEventKind { Positive, Negative, Reset, EnterFaulty, LeaveFaulty };

struct RatingEvent {
  SimTime at = 0.0;
  NodeId neighbor = 0;
  RatingEventKind kind = RatingEventKind::Positive;
  int rating_after = 0;
};

enum class Admission { Admit, RejectFaultyOrigin, RejectNoChips };

/// Min-hop route whose members pass `allowed`, ties broken by the
/// lexicographically smallest node sequence.
template <typename Pred>
std::optional<Route> select_min_hop(std::span<const Route> candidates, Pred allowed) {
  const Route* best = nullptr;
  for (const Route& r : candidates) {
    bool ok = true;
    for (NodeId n : r)
      if (!allowed(n)) {
        ok = false;
        break;
      }
    if (!ok) continue;
    if (!best || r.size() < best->size() || (r.size() == best->size() && r < *best)) best = &r;
  }
  if (!best) return std::nullopt;
  return *best;
}

/// Per-node cooperation enforcement state: neighbour watching, ratings,
/// faulty list with second chance, and the chip ledger.
class Agent {
 public:
  Agent(NodeId self, const Params& params, Scheduler& scheduler);

  NodeId self() const { return m_self; }

  /// Starts watching `next_hop` for the forward of the packet identified by
  /// `fp`. The neighbour must begin retransmitting by `forward_deadline`;
  /// the verdict is taken at `expiry_at`. No watch is kept when `next_hop`
  /// is the packet's final target, and a fingerprint is watched only once.
  void register_watch(const Fingerprint& fp, NodeId next_hop, SimTime forward_deadline, SimTime expiry_at);

  /// Promiscuous reception of a data packet transmitted by `transmitter`
  /// whose transmission began at `tx_start`. `fp` is the packet as the
  /// transmitter received it (hop index one less than on the air).
  /// Returns true if it satisfied a pending watch.
  bool on_overhear(const Fingerprint& fp, NodeId transmitter, SimTime tx_start);

  std::vector<NodeId> build_avoid_list() const;

  std::optional<Route> select_route(std::span<const Route> candidates) const;

  /// Decides whether to forward a packet from `origin` handed over by
  /// `previous_hop`; admission spends one debit from the requester's chips.
  Admission admit_traffic(NodeId origin, NodeId previous_hop);

  /// Optimistic credit when `neighbor` accepted a packet from this node.
  void on_optimistic_accept(NodeId neighbor);

  void chip_accrual_tick(SimTime dt);

  bool is_faulty(NodeId n) const;
  int rating(NodeId n) const;
  double chips(NodeId n) const;
  const NeighborRecord* record(NodeId n) const;
  std::size_t pending_watch_count() const;

  /// Rating history, kept only after enable_log().
  void enable_log() { m_log_enabled = true; }
  const std::vector<RatingEvent>& log() const { return m_log; }

  const Params& params() const { return m_params; }

 private:
  NeighborRecord& record_for(NodeId n);
  void on_watch_expire(NodeId neighbor, const Fingerprint& fp);
  void faulty_check(NeighborRecord& rec);
  void second_chance(NodeId neighbor);
  void note(NodeId n, RatingEventKind kind, int rating);

  NodeId m_self;
  Params m_params;
  Scheduler& m_scheduler;
  std::map<NodeId, NeighborRecord> m_records;
  bool m_log_enabled = false;
  std::vector<RatingEvent> m_log;
};

}  // namespace oceansim::ocean
