#pragma once

// Seeded Monte Carlo suites around the verify checks, shared by the CLI and
// the acceptance runner.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "pwrcap/engine.hpp"
#include "pwrcap/mac.hpp"
#include "pwrcap/routing.hpp"
#include "pwrcap/topology.hpp"
#include "pwrcap/verify.hpp"

namespace pwrcap {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

inline std::string format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

// Smallest range that connects the network: the longest edge of a minimum
// spanning tree (Prim, O(n^2)).
inline double connecting_range(const Network& net) {
  const std::size_t n = net.size();
  if (n < 2) return 0.0;
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  std::vector<char> in(n, 0);
  best[0] = 0.0;
  double longest = 0.0;
  for (std::size_t it = 0; it < n; ++it) {
    std::size_t u = n;
    for (std::size_t v = 0; v < n; ++v)
      if (!in[v] && (u == n || best[v] < best[u])) u = v;
    in[u] = 1;
    longest = std::max(longest, best[u]);
    for (std::size_t v = 0; v < n; ++v)
      if (!in[v]) best[v] = std::min(best[v], net.distance(u, v));
  }
  return longest;
}

struct SmallInstance {
  Scenario scenario;
  std::vector<double> ranges;  // ascending, connected at the first
};

// 4..8 nodes in a 1000 m square, 2 or 3 random flows, and a 4-step range
// ladder starting at the connecting range.
template <class Rng>
SmallInstance random_small_instance(Rng& rng) {
  const std::size_t n = std::uniform_int_distribution<std::size_t>(4, 8)(rng);
  Network net = gen_uniform(n, 1000.0, rng());
  const std::size_t k = std::uniform_int_distribution<std::size_t>(2, 3)(rng);
  std::vector<FlowSpec> flows;
  while (flows.size() < k) {
    const NodeId s = std::uniform_int_distribution<NodeId>(0, n - 1)(rng);
    const NodeId d = std::uniform_int_distribution<NodeId>(0, n - 1)(rng);
    if (s == d) continue;
    if (std::any_of(flows.begin(), flows.end(), [&](const FlowSpec& f) { return f.src == s && f.dst == d; }))
      continue;
    flows.push_back({s, d, std::uniform_real_distribution<double>(0.5, 2.0)(rng), 500});
  }
  normalize_weights(flows);
  const double r0 = connecting_range(net) * (1.0 + 1e-6);
  std::vector<double> ranges{r0};
  std::uniform_real_distribution<double> step(1.1, 1.6);
  while (ranges.size() < 4) ranges.push_back(ranges.back() * step(rng));
  return {{std::move(net), std::move(flows)}, std::move(ranges)};
}

inline CheckResult run_theorem1_suite(std::size_t instances, std::uint64_t seed,
                                      const PhysicalParams& params = PhysicalParams::defaults()) {
  std::mt19937_64 rng(seed);
  std::size_t failures = 0;
  std::size_t gains = 0;
  std::string first;
  for (std::size_t i = 0; i < instances; ++i) {
    const auto inst = random_small_instance(rng);
    std::vector<Power> ladder;
    for (double r : inst.ranges) ladder.push_back(power_for_range(r, params));
    const auto rep = check_theorem1(inst.scenario, ladder, params);
    if (!rep.non_decreasing) {
      ++failures;
      if (first.empty()) first = format(" (first: instance %zu)", i);
    }
    if (rep.capacities.back() > rep.capacities.front() * (1.0 + 1e-9)) ++gains;
  }
  return {"theorem1", failures == 0,
          format("%zu/%zu instances non-decreasing, %zu with strict gain", instances - failures, instances, gains) +
              first};
}

inline CheckResult run_theorem2_check(std::size_t m, const PhysicalParams& params = PhysicalParams::defaults()) {
  const double d = 100.0;
  const double r_low = 75.0, r_high = 1000.0;
  const double k = std::pow(r_high / r_low, params.alpha);
  const auto rep = check_theorem2(m, d, params, k, r_low);
  return {"theorem2", rep.passed(params),
          format("m=%zu n=%zu middle SINR %.4f (min %.4f) all feasible=%s via relay=%s gain bound %.0f", m, rep.n,
                 rep.middle_sinr, rep.min_sinr, rep.all_feasible_high ? "yes" : "no",
                 rep.routes_via_relay_low ? "yes" : "no", rep.gain_bound)};
}

// Greedy maximal feasible set over `candidates` taken in the given order.
inline std::vector<Link> greedy_maximal_set(std::span<const Link> candidates, const Channel& ch) {
  detail::ActiveSet active(candidates, ch);
  for (LinkId id = 0; id < candidates.size(); ++id) {
    const Link& l = candidates[id];
    if (!active.node_busy(l.tx) && !active.node_busy(l.rx) && active.admissible(id)) active.admit(id);
  }
  std::vector<Link> out;
  for (LinkId id : active.members()) out.push_back(candidates[id]);
  return out;
}

// Random maximal feasible sets on 80-node networks; each tested against one
// random disc.
inline CheckResult run_lemma2_suite(std::size_t sets, std::uint64_t seed,
                                    const PhysicalParams& params = PhysicalParams::defaults()) {
  std::mt19937_64 rng(seed);
  std::size_t violations = 0, nonempty = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < sets; ++i) {
    const double side = 1000.0;
    const Network net = gen_uniform(80, side, rng());
    const double r = std::uniform_real_distribution<double>(100.0, 400.0)(rng);
    const ConnectivityGraph g(net, r);
    std::vector<Link> cand;
    for (NodeId u = 0; u < net.size(); ++u)
      for (NodeId v : g.neighbors(u)) cand.push_back({u, v});
    if (cand.empty()) continue;
    std::shuffle(cand.begin(), cand.end(), rng);
    const Channel ch(net, power_for_range(r, params), params);
    const auto set = greedy_maximal_set(cand, ch);
    const auto geoms = link_geoms(net, set);
    double d_min = std::numeric_limits<double>::infinity();
    for (const auto& l : geoms) d_min = std::min(d_min, l.length());
    const Point c{std::uniform_real_distribution<double>(0.0, side)(rng),
                  std::uniform_real_distribution<double>(0.0, side)(rng)};
    const double R = std::uniform_real_distribution<double>(0.0, 3.0 * r)(rng);
    const std::size_t count = links_intersecting(geoms, c, R);
    const std::size_t bound = lemma2_bound(R, d_min, params);
    if (count > 0) ++nonempty;
    worst = std::max(worst, static_cast<double>(count) / static_cast<double>(bound));
    if (!check_lemma2(geoms, c, R, d_min, params)) ++violations;
  }
  return {"lemma2", violations == 0,
          format("%zu sets, %zu violations, %zu discs hit links, max count/bound %.3f", sets, violations, nonempty,
                 worst)};
}

// Segment routes between random pairs on uniform unit-square networks with
// r = 4.5 r_c.
inline CheckResult run_lemma3_suite(std::size_t networks, std::size_t pairs, std::size_t n, std::uint64_t seed,
                                    double min_rate = 0.99) {
  std::mt19937_64 rng(seed);
  const double r_c = critical_range(n);
  const double r = 4.5 * r_c;
  std::size_t ok = 0, total = 0;
  for (std::size_t k = 0; k < networks; ++k) {
    const Network net = gen_uniform(n, 1.0, rng());
    for (std::size_t p = 0; p < pairs; ++p) {
      const NodeId a = std::uniform_int_distribution<NodeId>(0, n - 1)(rng);
      NodeId b = std::uniform_int_distribution<NodeId>(0, n - 2)(rng);
      if (b >= a) ++b;
      ++total;
      try {
        const auto route = segment_route(net, a, b, r_c, r);
        if (check_lemma3(net, route, a, b, r_c)) ++ok;
      } catch (const ConstructionFailure&) {
      }
    }
  }
  const double rate = static_cast<double>(ok) / static_cast<double>(total);
  return {"lemma3", rate >= min_rate,
          format("%zu/%zu pairs routed and checked (%.2f%%), r_c = %.5f", ok, total, 100.0 * rate, r_c)};
}

// Runs `cfg` and checks every slot's succeeded set with check_lemma1 and
// joint feasibility. Returns the number of audited slots.
struct Lemma1Audit {
  std::size_t slots = 0;
  std::size_t violations = 0;
};

inline Lemma1Audit audit_lemma1(SimConfig cfg) {
  Lemma1Audit audit;
  const Channel ch(cfg.network, power_for_range(cfg.range, cfg.params), cfg.params);
  const Network& net = cfg.network;
  const PhysicalParams params = cfg.params;
  cfg.observer = [&](std::size_t, const SlotOutcome& out, const std::vector<Link>& links) {
    std::vector<Link> ok;
    for (LinkId id : out.succeeded) ok.push_back(links[id]);
    ++audit.slots;
    if (!check_lemma1(link_geoms(net, ok), params) || !feasible_at_power(ok, ch)) ++audit.violations;
  };
  run(cfg);
  return audit;
}

}  // namespace pwrcap
