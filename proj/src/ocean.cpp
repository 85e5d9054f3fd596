#include "oceansim/ocean.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace oceansim::ocean {

std::string_view to_string(ChipScheme s) {
  return s == ChipScheme::Optimistic ? "optimistic" : "pessimistic";
}

std::optional<ChipScheme> parse_chip_scheme(std::string_view s) {
  if (s == "optimistic") return ChipScheme::Optimistic;
  if (s == "pessimistic") return ChipScheme::Pessimistic;
  return std::nullopt;
}

void Params::validate() const {
  if (rating_increment <= 0) throw std::invalid_argument("rating_increment must be positive");
  if (rating_decrement >= 0) throw std::invalid_argument("rating_decrement must be negative");
  if (reentry_rating <= faulty_threshold)
    throw std::invalid_argument("reentry_rating must exceed faulty_threshold");
  if (!(watch_timeout > 0)) throw std::invalid_argument("watch_timeout must be positive");
  if (!(second_chance_timeout > 0)) throw std::invalid_argument("second_chance_timeout must be positive");
  if (chip_cap < 0 || chip_initial < 0 || chip_initial > chip_cap)
    throw std::invalid_argument("chip_initial must lie in [0, chip_cap]");
  if (chip_debit < 0 || chip_credit < 0 || chip_accrual_rate < 0)
    throw std::invalid_argument("chip amounts must be non-negative");
  if (!(chip_accrual_period > 0)) throw std::invalid_argument("chip_accrual_period must be positive");
}

std::pair<SimTime, int> paired_second_chance(int faulty_threshold, SimTime fallback_timeout) {
  struct Row {
    int threshold;
    SimTime timeout;
    int reentry;
  };
  static constexpr std::array<Row, 6> kRows{{
      {0, 10.0, 10},
      {-40, 30.0, -30},
      {-80, 80.0, -70},
      {-120, 120.0, -110},
      {-160, 160.0, -150},
      {-200, 200.0, -190},
  }};
  for (const Row& r : kRows)
    if (r.threshold == faulty_threshold) return {r.timeout, r.reentry};
  return {fallback_timeout, faulty_threshold + 10};
}

Agent::Agent(NodeId self, const Params& params, Scheduler& scheduler)
    : m_self(self), m_params(params), m_scheduler(scheduler) {}

NeighborRecord& Agent::record_for(NodeId n) {
  auto [it, inserted] = m_records.try_emplace(n);
  if (inserted) {
    it->second.neighbor = n;
    it->second.chips = m_params.chip_initial;
  }
  return it->second;
}

const NeighborRecord* Agent::record(NodeId n) const {
  auto it = m_records.find(n);
  return it == m_records.end() ? nullptr : &it->second;
}

bool Agent::is_faulty(NodeId n) const {
  const NeighborRecord* r = record(n);
  return r && r->faulty;
}

int Agent::rating(NodeId n) const {
  const NeighborRecord* r = record(n);
  return r ? r->rating : 0;
}

double Agent::chips(NodeId n) const {
  const NeighborRecord* r = record(n);
  return r ? r->chips : m_params.chip_initial;
}

std::size_t Agent::pending_watch_count() const {
  std::size_t total = 0;
  for (const auto& [_, rec] : m_records) total += rec.pending_watches.size();
  return total;
}

void Agent::note(NodeId n, RatingEventKind kind, int rating) {
  if (m_log_enabled) m_log.push_back({m_scheduler.now(), n, kind, rating});
}

void Agent::register_watch(const Fingerprint& fp, NodeId next_hop, SimTime forward_deadline, SimTime expiry_at) {
  if (next_hop == fp.target) return;
  NeighborRecord& rec = record_for(next_hop);
  if (rec.pending_watches.contains(fp)) return;
  const EventHandle h = m_scheduler.schedule(expiry_at, EventKind::WatchExpiry,
                                             [this, next_hop, fp] { on_watch_expire(next_hop, fp); });
  rec.pending_watches.emplace(fp, PendingWatch{h, forward_deadline});
}

bool Agent::on_overhear(const Fingerprint& fp, NodeId transmitter, SimTime tx_start) {
  auto rit = m_records.find(transmitter);
  if (rit == m_records.end()) return false;
  NeighborRecord& rec = rit->second;
  auto wit = rec.pending_watches.find(fp);
  if (wit == rec.pending_watches.end()) return false;
  if (tx_start > wit->second.forward_deadline) return false;  // too late; the expiry will judge it
  m_scheduler.cancel(wit->second.expiry);
  rec.pending_watches.erase(wit);
  rec.rating += m_params.rating_increment;
  note(transmitter, RatingEventKind::Positive, rec.rating);
  if (m_params.chip_scheme == ChipScheme::Pessimistic)
    rec.chips = std::min(m_params.chip_cap, rec.chips + m_params.chip_credit);
  return true;
}

void Agent::on_watch_expire(NodeId neighbor, const Fingerprint& fp) {
  NeighborRecord& rec = record_for(neighbor);
  if (rec.pending_watches.erase(fp) == 0) return;
  rec.rating += m_params.rating_decrement;
  note(neighbor, RatingEventKind::Negative, rec.rating);
  faulty_check(rec);
}

void Agent::faulty_check(NeighborRecord& rec) {
  if (rec.faulty || rec.rating >= m_params.faulty_threshold) return;
  rec.faulty = true;
  rec.faulty_since = m_scheduler.now();
  const NodeId n = rec.neighbor;
  rec.second_chance = m_scheduler.schedule_in(m_params.second_chance_timeout, EventKind::SecondChanceExpiry,
                                              [this, n] { second_chance(n); });
  note(n, RatingEventKind::EnterFaulty, rec.rating);
}

void Agent::second_chance(NodeId neighbor) {
  NeighborRecord& rec = record_for(neighbor);
  if (!rec.faulty) return;
  rec.faulty = false;
  rec.faulty_since.reset();
  rec.second_chance = {};
  note(neighbor, RatingEventKind::LeaveFaulty, rec.rating);
  rec.rating = m_params.reentry_rating;
  note(neighbor, RatingEventKind::Reset, rec.rating);
}

std::vector<NodeId> Agent::build_avoid_list() const {
  std::vector<NodeId> out;
  for (const auto& [n, rec] : m_records)
    if (rec.faulty) out.push_back(n);
  return out;
}

std::optional<Route> Agent::select_route(std::span<const Route> candidates) const {
  return select_min_hop(candidates, [this](NodeId n) { return !is_faulty(n); });
}

Admission Agent::admit_traffic(NodeId origin, NodeId previous_hop) {
  if (is_faulty(origin)) return Admission::RejectFaultyOrigin;
  NeighborRecord& rec = record_for(previous_hop);
  if (rec.chips < m_params.chip_debit) return Admission::RejectNoChips;
  rec.chips -= m_params.chip_debit;
  return Admission::Admit;
}

void Agent::on_optimistic_accept(NodeId neighbor) {
  if (m_params.chip_scheme != ChipScheme::Optimistic) return;
  NeighborRecord& rec = record_for(neighbor);
  rec.chips = std::min(m_params.chip_cap, rec.chips + m_params.chip_credit);
}

void Agent::chip_accrual_tick(SimTime dt) {
  const double gain = m_params.chip_accrual_rate * dt;
  for (auto& [_, rec] : m_records) rec.chips = std::min(m_params.chip_cap, rec.chips + gain);
}

}  // namespace oceansim::ocean
