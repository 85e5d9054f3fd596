#include "oceansim/radio.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace oceansim::radio {

void RadioParams::validate() const {
  if (!(tx_power_signal > 0 && antenna_gain_tx > 0 && antenna_gain_rx > 0 && antenna_height > 0 &&
        wavelength > 0 && rx_threshold > 0 && link_rate > 0))
    throw std::invalid_argument("radio parameters must be strictly positive");
}

double crossover_distance(const RadioParams& p) {
  return 4.0 * std::numbers::pi * p.antenna_height * p.antenna_height / p.wavelength;
}

double received_power(double d, const RadioParams& p) {
  if (!(d > 0)) throw std::invalid_argument("received_power requires a positive distance");
  const double gains = p.tx_power_signal * p.antenna_gain_tx * p.antenna_gain_rx;
  if (d < crossover_distance(p)) {
    const double four_pi_d = 4.0 * std::numbers::pi * d;
    return gains * p.wavelength * p.wavelength / (four_pi_d * four_pi_d);
  }
  const double h2 = p.antenna_height * p.antenna_height;
  const double d2 = d * d;
  return gains * h2 * h2 / (d2 * d2);
}

bool in_range(double d, const RadioParams& p) {
  return d <= 0 || received_power(d, p) >= p.rx_threshold;
}

double nominal_range(const RadioParams& p) {
  const double gains = p.tx_power_signal * p.antenna_gain_tx * p.antenna_gain_rx;
  const double h2 = p.antenna_height * p.antenna_height;
  double d = std::pow(gains * h2 * h2 / p.rx_threshold, 0.25);
  if (d < crossover_distance(p))
    d = p.wavelength / (4.0 * std::numbers::pi) * std::sqrt(gains / p.rx_threshold);
  // Step inward past any rounding at the boundary.
  while (d > 0 && !in_range(d, p)) d = std::nextafter(d, 0.0);
  return d;
}

SimTime tx_duration(std::size_t size_bytes, const RadioParams& p) {
  if (size_bytes == 0) throw std::invalid_argument("tx_duration requires a non-empty frame");
  return static_cast<double>(size_bytes) * 8.0 / p.link_rate;
}

void EnergyParams::validate() const {
  if (!(initial > 0)) throw std::invalid_argument("initial energy must be positive");
  if (p_tx < 0 || p_rx < 0 || p_idle < 0 || p_sleep < 0)
    throw std::invalid_argument("power draws must be non-negative");
}

EnergyMeter::EnergyMeter(const EnergyParams& params) : m_params(params), m_remaining(params.initial) {}

void EnergyMeter::debit(double power, SimTime start, SimTime duration) {
  const double joules = power * duration;
  if (!m_alive) {
    m_unpaid += joules;
    return;
  }
  if (joules < m_remaining) {
    m_remaining -= joules;
    return;
  }
  m_unpaid += joules - m_remaining;
  m_death_time = start + (power > 0.0 ? std::min(duration, m_remaining / power) : 0.0);
  m_remaining = 0.0;
  m_alive = false;
}

void EnergyMeter::settle(SimTime t) {
  if (!m_alive || t <= m_frontier) return;
  const SimTime gap = t - m_frontier;
  const SimTime from = m_frontier;
  m_frontier = t;
  m_time_idle += gap;
  debit(m_params.p_idle, from, gap);
}

void EnergyMeter::charge_tx(SimTime start, SimTime duration) {
  settle(start);
  if (!m_alive) return;
  m_time_tx += duration;
  m_frontier = std::max(m_frontier, start + duration);
  debit(m_params.p_tx, start, duration);
}

void EnergyMeter::charge_rx(SimTime start, SimTime duration) {
  settle(start);
  if (!m_alive) return;
  m_time_rx += duration;
  m_frontier = std::max(m_frontier, start + duration);
  debit(m_params.p_rx, start, duration);
}

}  // namespace oceansim::radio
