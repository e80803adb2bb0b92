#pragma once

// Executable checks of the geometric lemmas and theorem constructions, usable
// as tests and as audits of scheduler output.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "pwrcap/geometry.hpp"
#include "pwrcap/mac.hpp"
#include "pwrcap/phy.hpp"
#include "pwrcap/routing.hpp"
#include "pwrcap/topology.hpp"

namespace pwrcap {

// Disc around a receiver with radius (delta / 2) * link length. Discs of
// simultaneous links are pairwise disjoint.
struct GuardDisc {
  Point center;
  double radius = 0.0;
};

inline GuardDisc guard_disc(const LinkGeom& link, const PhysicalParams& params) {
  return {link.rx, params.delta() / 2.0 * link.length()};
}

inline std::vector<LinkGeom> link_geoms(const Network& net, std::span<const Link> links) {
  std::vector<LinkGeom> out;
  out.reserve(links.size());
  for (const Link& l : links) out.push_back({net.position(l.tx), net.position(l.rx)});
  return out;
}

// |B - D| >= (delta / 2)(|A - B| + |C - D|) for every pair (A,B), (C,D).
inline bool check_lemma1(std::span<const LinkGeom> links, const PhysicalParams& params) {
  const double half_delta = params.delta() / 2.0;
  for (std::size_t i = 0; i < links.size(); ++i)
    for (std::size_t j = i + 1; j < links.size(); ++j) {
      const double need = half_delta * (links[i].length() + links[j].length());
      if (!at_least(distance(links[i].rx, links[j].rx), need)) return false;
    }
  return true;
}

// floor( (4 (delta + 1) R / d_min + delta + 2)^2 / delta^4 )
inline std::size_t lemma2_bound(double R, double d_min, const PhysicalParams& params) {
  if (!(params.beta > 1.0)) throw std::domain_error("lemma2_bound: requires beta > 1");
  if (!(R >= 0.0) || !(d_min > 0.0)) throw std::domain_error("lemma2_bound: requires R >= 0, d_min > 0");
  const double delta = params.delta();
  const double inner = 4.0 * (delta + 1.0) * R / d_min + delta + 2.0;
  return static_cast<std::size_t>(std::floor(inner * inner / std::pow(delta, 4.0)));
}

inline std::size_t links_intersecting(std::span<const LinkGeom> links, Point center, double R) {
  return static_cast<std::size_t>(std::count_if(links.begin(), links.end(), [&](const LinkGeom& l) {
    return segment_intersects_disc(l.tx, l.rx, center, R);
  }));
}

inline bool check_lemma2(std::span<const LinkGeom> links, Point center, double R, double d_min,
                         const PhysicalParams& params) {
  return links_intersecting(links, center, R) <= lemma2_bound(R, d_min, params);
}

struct Theorem2Report {
  std::size_t m = 0;
  std::size_t n = 0;
  double low_range = 0.0;
  double high_range = 0.0;
  double middle_sinr = 0.0;  // at high power
  double min_sinr = 0.0;     // over all vertical links at high power
  bool middle_is_min = false;
  bool all_feasible_high = false;
  bool routes_via_relay_low = false;
  double gain_bound = 0.0;  // n / 3 + 1

  bool passed(const PhysicalParams& params) const {
    return middle_sinr > params.beta && middle_is_min && all_feasible_high && routes_via_relay_low;
  }
};

// Builds the 2m+1 link construction with spacing d, sets the low power so that
// the range is r_low in ((2/3) d, d), and the high power to k_power times that.
inline Theorem2Report check_theorem2(std::size_t m, double d, const PhysicalParams& params,
                                     double k_power, double r_low) {
  if (!(r_low > 2.0 * d / 3.0 && r_low < d))
    throw std::invalid_argument("check_theorem2: low range must lie in ((2/3) d, d)");
  if (!(k_power > 1.0)) throw std::invalid_argument("check_theorem2: K must be > 1");
  const auto layout = gen_theorem2(m, d);
  const Network& net = layout.scenario.network;

  Theorem2Report rep;
  rep.m = m;
  rep.n = net.size();
  rep.low_range = r_low;
  const Power p_low = power_for_range(r_low, params);
  const Power p_high = k_power * p_low;
  rep.high_range = transmission_range(p_high, params);

  std::vector<Link> verticals;
  for (auto [top, bottom] : layout.vertical_links) verticals.push_back({top, bottom});
  rep.min_sinr = kInfiniteSinr;
  for (std::size_t i = 0; i < verticals.size(); ++i) {
    std::vector<Point> others;
    for (std::size_t j = 0; j < verticals.size(); ++j)
      if (j != i) others.push_back(net.position(verticals[j].tx));
    const LinkGeom g{net.position(verticals[i].tx), net.position(verticals[i].rx)};
    const double s = sinr(g, others, p_high, params);
    rep.min_sinr = std::min(rep.min_sinr, s);
    if (verticals[i].tx == layout.a1) rep.middle_sinr = s;
  }
  rep.middle_is_min = rep.middle_sinr <= rep.min_sinr;
  rep.all_feasible_high = feasible_at_power(verticals, net, p_high, params);

  const ConnectivityGraph low(net, r_low);
  rep.routes_via_relay_low = true;
  const std::array<NodeId, 3> chain{layout.a1, layout.a3, layout.a2};
  for (const auto& f : layout.scenario.flows) {
    const auto route = min_hop_route(net, low, f.src, f.dst);
    const auto& p = route.nodes;
    if (std::search(p.begin(), p.end(), chain.begin(), chain.end()) == p.end())
      rep.routes_via_relay_low = false;
  }
  rep.gain_bound = static_cast<double>(rep.n) / 3.0 + 1.0;
  return rep;
}

struct Theorem1Report {
  std::vector<double> capacities;
  bool non_decreasing = true;
};

// Optimal capacity along an ascending power ladder. Candidate routes are
// fixed by the hop window at the lowest power, so every route available at
// one rung stays available at the next.
inline Theorem1Report check_theorem1(const Scenario& inst, std::span<const Power> ladder,
                                     const PhysicalParams& params, std::size_t extra_hops = 1,
                                     double tol = 1e-9) {
  if (ladder.empty()) throw std::invalid_argument("check_theorem1: empty ladder");
  OptimalOptions opt;
  const ConnectivityGraph base(inst.network, transmission_range(ladder.front(), params));
  for (const auto& f : inst.flows) {
    const auto h = hop_distances(base, f.dst)[f.src];
    if (h == static_cast<std::size_t>(-1)) throw NoRouteError("check_theorem1: instance disconnected at lowest power");
    opt.hop_caps.push_back(h + extra_hops);
  }
  Theorem1Report rep;
  for (const Power& p : ladder) {
    rep.capacities.push_back(optimal_capacity(inst.network, inst.flows, p, params, opt).capacity);
    const std::size_t k = rep.capacities.size();
    if (k > 1 && rep.capacities[k - 1] < rep.capacities[k - 2] * (1.0 - tol)) rep.non_decreasing = false;
  }
  return rep;
}

}  // namespace pwrcap
