#pragma once

// Physical layer: power decay, SINR, reception, and the three ranges
// (transmission, interference, carrier sensing). All power arithmetic is
// linear; dBm conversions exist only for configuration and reporting.

#include <cmath>
#include <compare>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>

#include "pwrcap/geometry.hpp"

namespace pwrcap {

inline double dbm_to_linear(double dbm) { return std::pow(10.0, dbm / 10.0); }
inline double linear_to_dbm(double mw) { return 10.0 * std::log10(mw); }

// Linear power (mW) with the antenna constant folded in.
class Power {
 public:
  constexpr Power() = default;
  constexpr explicit Power(double value) : value_(value) {}

  static Power from_dbm(double dbm) { return Power(dbm_to_linear(dbm)); }

  constexpr double value() const { return value_; }
  double dbm() const { return linear_to_dbm(value_); }

  friend constexpr Power operator*(double k, Power p) { return Power(k * p.value_); }
  friend constexpr Power operator+(Power a, Power b) { return Power(a.value_ + b.value_); }
  friend constexpr auto operator<=>(Power, Power) = default;

 private:
  double value_ = 0.0;
};

struct PhysicalParams {
  double alpha = 4.0;                   // path-loss exponent
  double beta = 10.0;                   // SINR threshold
  double h_r = dbm_to_linear(-81.0);    // receive threshold
  double h_s = dbm_to_linear(-91.0);    // carrier-sense threshold
  double n0 = 0.0;                      // white noise
  double w = 1.0;                       // channel rate, packets per slot

  // alpha = 4, beta = 10, H_r = -81 dBm, H_s = H_r / beta, N0 = 0.
  static PhysicalParams defaults() { return with_thresholds(4.0, 10.0, dbm_to_linear(-81.0)); }

  // Carrier-sense threshold derived as h_r / beta.
  static PhysicalParams with_thresholds(double alpha, double beta, double h_r, double n0 = 0.0) {
    PhysicalParams p;
    p.alpha = alpha;
    p.beta = beta;
    p.h_r = h_r;
    p.h_s = h_r / beta;
    p.n0 = n0;
    p.validate();
    return p;
  }

  void validate() const {
    auto fail = [](const std::string& what) {
      throw std::invalid_argument("PhysicalParams: " + what);
    };
    if (!(alpha >= 2.0)) fail("alpha must be >= 2");
    if (!(beta > 1.0)) fail("beta must be > 1");
    if (!(h_r > 0.0)) fail("h_r must be > 0");
    if (!(h_s > 0.0)) fail("h_s must be > 0");
    if (!(n0 >= 0.0)) fail("n0 must be >= 0");
    if (!(w > 0.0)) fail("w must be > 0");
  }

  // Spacing factor between receivers of simultaneous links: beta^(1/alpha) - 1.
  double delta() const { return std::pow(beta, 1.0 / alpha) - 1.0; }
};

struct LinkGeom {
  Point tx;
  Point rx;

  double length() const { return distance(tx, rx); }
};

// Compares greater than every finite threshold.
inline constexpr double kInfiniteSinr = std::numeric_limits<double>::infinity();

// P_r = P_t / d^alpha
inline Power received_power(Power p_t, double d, const PhysicalParams& params) {
  if (!(d > 0.0)) throw std::domain_error("received_power: distance must be > 0");
  return Power(p_t.value() / std::pow(d, params.alpha));
}

inline Power received_power(Power p_t, Point from, Point to, const PhysicalParams& params) {
  return received_power(p_t, distance(from, to), params);
}

// SINR at the link receiver with every interferer transmitting at p_t.
inline double sinr(const LinkGeom& link, std::span<const Point> interferers, Power p_t,
                   const PhysicalParams& params) {
  const Power signal = received_power(p_t, link.tx, link.rx, params);
  double noise = params.n0;
  for (const Point& i : interferers) {
    if (i == link.rx) throw std::domain_error("sinr: interferer coincides with receiver");
    noise += received_power(p_t, i, link.rx, params).value();
  }
  if (noise == 0.0) return kInfiniteSinr;
  return signal.value() / noise;
}

// Inclusive threshold test. The relative slack absorbs rounding so that a
// link of length exactly r (or an interferer exactly at r_I) sits on the
// accepting side of the boundary.
inline constexpr double kThresholdSlack = 1e-9;

inline bool at_least(double value, double threshold) {
  return value >= threshold * (1.0 - kThresholdSlack);
}

inline bool at_most(double value, double threshold) {
  return value <= threshold * (1.0 + kThresholdSlack);
}

inline bool reception_ok(Power p_r, double sinr_val, const PhysicalParams& params) {
  return at_least(p_r.value(), params.h_r) && at_least(sinr_val, params.beta);
}

inline double transmission_range(Power p_t, const PhysicalParams& params) {
  const double inv = 1.0 / params.alpha;
  const double by_threshold = std::pow(p_t.value() / params.h_r, inv);
  if (params.n0 == 0.0) return by_threshold;
  const double by_noise = std::pow(p_t.value() / (params.n0 * params.beta), inv);
  return std::min(by_noise, by_threshold);
}

// Smallest common power whose transmission range is r.
inline Power power_for_range(double r, const PhysicalParams& params) {
  if (!(r > 0.0)) throw std::domain_error("power_for_range: range must be > 0");
  return Power(std::pow(r, params.alpha) * std::max(params.h_r, params.n0 * params.beta));
}

inline double interference_range(double d, const PhysicalParams& params) {
  return std::pow(params.beta, 1.0 / params.alpha) * d;
}

inline double carrier_sense_range(Power p_t, const PhysicalParams& params) {
  return std::pow(p_t.value() / params.h_s, 1.0 / params.alpha);
}

// Noise sensed at tx_pos: sum of active transmitter powers plus white noise.
inline Power sensed_noise(Point tx_pos, std::span<const Point> active_transmitters, Power p_t,
                          const PhysicalParams& params) {
  double total = params.n0;
  for (const Point& a : active_transmitters) total += received_power(p_t, a, tx_pos, params).value();
  return Power(total);
}

}  // namespace pwrcap
