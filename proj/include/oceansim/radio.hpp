#pragma once

#include <cstddef>

#include "oceansim/engine.hpp"

namespace oceansim::radio {

inline constexpr double kSpeedOfLight = 299792458.0;

/// Defaults reproduce the classic ns-2 two-ray setup with a 250 m range.
struct RadioParams {
  double tx_power_signal = 0.281838;  // W
  double antenna_gain_tx = 1.0;
  double antenna_gain_rx = 1.0;
  double antenna_height = 1.5;  // m, both ends
  double wavelength = 0.328;    // m
  double rx_threshold = 3.652e-10;  // W
  double link_rate = 2.0e6;     // bit/s

  void validate() const;
};

/// Distance where the free-space and two-ray predictions meet: 4*pi*ht*hr/lambda.
double crossover_distance(const RadioParams& p);

/// Friis below the crossover distance, two-ray ground at and beyond it.
/// Throws std::invalid_argument for d <= 0.
double received_power(double d, const RadioParams& p);

/// Connectivity for a pair separated by `d` metres; d == 0 is connected.
bool in_range(double d, const RadioParams& p);

/// Largest distance that still satisfies in_range.
double nominal_range(const RadioParams& p);

/// Airtime of a frame. Throws std::invalid_argument for size 0.
SimTime tx_duration(std::size_t size_bytes, const RadioParams& p);

struct EnergyParams {
  double initial = 5.0;      // J
  double p_tx = 31.32e-3;    // W
  double p_rx = 35.28e-3;    // W
  double p_idle = 712e-6;    // W
  double p_sleep = 144e-9;   // W, no sleep scheduling uses it yet

  void validate() const;
};

/// Per-node battery with lazy idle accounting.
///
/// Idle power is paid for time not covered by any tx/rx interval; during a
/// tx or rx interval the node pays that mode's power instead. Charges must
/// be issued in non-decreasing start time. Once depleted the node stays dead.
class EnergyMeter {
 public:
  explicit EnergyMeter(const EnergyParams& params = {});

  /// Charges idle power up to `t`.
  void settle(SimTime t);
  /// Convenience form of settle for a known idle gap.
  void idle_drain(SimTime dt) { settle(m_frontier + dt); }
  void charge_tx(SimTime start, SimTime duration);
  void charge_rx(SimTime start, SimTime duration);

  bool alive() const { return m_alive; }
  double remaining() const { return m_remaining; }
  double initial() const { return m_params.initial; }
  SimTime death_time() const { return m_death_time; }

  SimTime time_tx() const { return m_time_tx; }
  SimTime time_rx() const { return m_time_rx; }
  SimTime time_idle() const { return m_time_idle; }
  /// Energy requested after depletion that could not be paid.
  double unpaid() const { return m_unpaid; }
  const EnergyParams& params() const { return m_params; }

 private:
  // Draws `power` over [start, start + duration); death lands where the
  // remaining charge runs out.
  void debit(double power, SimTime start, SimTime duration);

  EnergyParams m_params;
  double m_remaining;
  bool m_alive = true;
  SimTime m_frontier = 0.0;
  SimTime m_death_time = -1.0;
  SimTime m_time_tx = 0.0;
  SimTime m_time_rx = 0.0;
  SimTime m_time_idle = 0.0;
  double m_unpaid = 0.0;
};

}  // namespace oceansim::radio
