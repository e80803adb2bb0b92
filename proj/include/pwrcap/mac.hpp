#pragma once

// Per-slot link scheduling: carrier sensing with slotted exponential backoff
// (CS), the centralized collision-free greedy benchmark (Cen), and an
// exhaustive time-sharing oracle for small instances.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pwrcap/phy.hpp"
#include "pwrcap/routing.hpp"
#include "pwrcap/simplex.hpp"
#include "pwrcap/topology.hpp"

namespace pwrcap {

// Directed link tx -> rx.
struct Link {
  NodeId tx = 0;
  NodeId rx = 0;

  friend constexpr auto operator<=>(const Link&, const Link&) = default;
};

using LinkId = std::size_t;

// Received power between every ordered node pair at a common transmit power.
class Channel {
 public:
  Channel(const Network& net, Power p_t, const PhysicalParams& params)
      : n_(net.size()), p_t_(p_t), params_(params), gain_(n_ * n_, 0.0) {
    if (!(p_t.value() > 0.0)) throw std::invalid_argument("Channel: transmit power must be > 0");
    const auto& p = net.nodes();
    const bool quartic = params.alpha == 4.0;
    for (std::size_t u = 0; u < n_; ++u)
      for (std::size_t v = 0; v < n_; ++v) {
        if (u == v) continue;
        const double d2 = squared_distance(p[u], p[v]);
        gain_[u * n_ + v] = quartic ? p_t.value() / (d2 * d2)
                                    : received_power(p_t, std::sqrt(d2), params).value();
      }
  }

  double power(NodeId from, NodeId to) const { return gain_[from * n_ + to]; }
  std::size_t size() const { return n_; }
  Power tx_power() const { return p_t_; }
  const PhysicalParams& params() const { return params_; }

 private:
  std::size_t n_;
  Power p_t_;
  PhysicalParams params_;
  std::vector<double> gain_;
};

inline bool half_duplex_ok(std::span<const Link> links) {
  std::vector<NodeId> used;
  used.reserve(2 * links.size());
  for (const Link& l : links) {
    used.push_back(l.tx);
    used.push_back(l.rx);
  }
  std::sort(used.begin(), used.end());
  return std::adjacent_find(used.begin(), used.end()) == used.end();
}

// Every link passes the reception test under mutual interference, and no
// node appears twice.
inline bool feasible_at_power(std::span<const Link> links, const Channel& ch) {
  if (!half_duplex_ok(links)) return false;
  const auto& params = ch.params();
  for (const Link& e : links) {
    const double signal = ch.power(e.tx, e.rx);
    double noise = params.n0;
    for (const Link& o : links)
      if (&o != &e) noise += ch.power(o.tx, e.rx);
    const double s = noise == 0.0 ? kInfiniteSinr : signal / noise;
    if (!reception_ok(Power(signal), s, params)) return false;
  }
  return true;
}

inline bool feasible_at_power(std::span<const Link> links, const Network& net, Power p_t,
                              const PhysicalParams& params) {
  if (!half_duplex_ok(links)) return false;
  std::vector<Point> tx;
  for (const Link& l : links) tx.push_back(net.position(l.tx));
  for (std::size_t i = 0; i < links.size(); ++i) {
    std::vector<Point> others;
    for (std::size_t j = 0; j < links.size(); ++j)
      if (j != i) others.push_back(tx[j]);
    const LinkGeom g{net.position(links[i].tx), net.position(links[i].rx)};
    const double s = sinr(g, others, p_t, params);
    if (!reception_ok(received_power(p_t, g.length(), params), s, params)) return false;
  }
  return true;
}

struct BackoffConfig {
  std::size_t cw_min = 16;
  std::size_t cw_max = 1024;
};

// Per directed link queue and contention state.
struct LinkState {
  std::size_t backlog = 0;
  std::size_t backoff = 0;
  std::size_t cw = 16;
};

struct SlotOutcome {
  std::vector<LinkId> attempted;
  std::vector<LinkId> succeeded;
  std::vector<LinkId> collided;
  std::vector<LinkId> deferred;
};

namespace detail {

// Interference bookkeeping for a growing set of simultaneous transmitters.
class ActiveSet {
 public:
  ActiveSet(std::span<const Link> links, const Channel& ch) : links_(links), ch_(ch), busy_(ch.size(), 0) {}

  bool node_busy(NodeId u) const { return busy_[u] != 0; }

  double sensed_at(NodeId u) const {
    double total = ch_.params().n0;
    for (LinkId a : members_) total += ch_.power(links_[a].tx, u);
    return total;
  }

  // Admitting `id` keeps every member, and `id` itself, receivable.
  bool admissible(LinkId id) const {
    const Link& c = links_[id];
    const auto& params = ch_.params();
    const double signal = ch_.power(c.tx, c.rx);
    if (!at_least(signal, params.h_r)) return false;
    double noise = params.n0;
    for (std::size_t k = 0; k < members_.size(); ++k) {
      const Link& m = links_[members_[k]];
      noise += ch_.power(m.tx, c.rx);
      const double m_noise = interference_[k] + ch_.power(c.tx, m.rx);
      if (!at_least(ch_.power(m.tx, m.rx), params.beta * m_noise)) return false;
    }
    return noise == 0.0 || at_least(signal, params.beta * noise);
  }

  void admit(LinkId id) {
    const Link& c = links_[id];
    double noise = ch_.params().n0;
    for (std::size_t k = 0; k < members_.size(); ++k) {
      const Link& m = links_[members_[k]];
      interference_[k] += ch_.power(c.tx, m.rx);
      noise += ch_.power(m.tx, c.rx);
    }
    members_.push_back(id);
    interference_.push_back(noise);
    busy_[c.tx] = 1;
    busy_[c.rx] = 1;
  }

  // Final reception test for member k against all other members.
  bool received(std::size_t k) const {
    const Link& m = links_[members_[k]];
    const double signal = ch_.power(m.tx, m.rx);
    const auto& params = ch_.params();
    const double noise = interference_[k];
    const double s = noise == 0.0 ? kInfiniteSinr : signal / noise;
    return reception_ok(Power(signal), s, params);
  }

  const std::vector<LinkId>& members() const { return members_; }

 private:
  std::span<const Link> links_;
  const Channel& ch_;
  std::vector<char> busy_;
  std::vector<LinkId> members_;
  std::vector<double> interference_;  // n0 + interference at each member's receiver
};

}  // namespace detail

// Carrier sensing: candidates sense one by one in a fresh random order. A
// link transmits iff its endpoints are free, the noise sensed at its
// transmitter is <= h_s, and its backoff counter is zero. Idle-sensed links
// with pending backoff count down; busy-sensed ones freeze.
template <class Rng>
SlotOutcome cs_schedule_slot(std::span<const Link> links, std::span<LinkState> state,
                             std::span<const LinkId> ready, const Channel& ch,
                             const BackoffConfig& backoff, Rng& rng) {
  SlotOutcome out;
  std::vector<LinkId> order(ready.begin(), ready.end());
  std::shuffle(order.begin(), order.end(), rng);

  detail::ActiveSet active(links, ch);
  const double h_s = ch.params().h_s;
  for (LinkId id : order) {
    const Link& l = links[id];
    LinkState& st = state[id];
    const bool busy = active.node_busy(l.tx) || active.node_busy(l.rx) || !at_most(active.sensed_at(l.tx), h_s);
    if (busy) {
      out.deferred.push_back(id);
      continue;
    }
    if (st.backoff > 0) {
      --st.backoff;
      out.deferred.push_back(id);
      continue;
    }
    active.admit(id);
  }

  const auto& members = active.members();
  for (std::size_t k = 0; k < members.size(); ++k) {
    const LinkId id = members[k];
    LinkState& st = state[id];
    out.attempted.push_back(id);
    if (active.received(k)) {
      out.succeeded.push_back(id);
      st.cw = backoff.cw_min;
      st.backoff = 0;
    } else {
      out.collided.push_back(id);
      st.cw = std::min(st.cw * 2, backoff.cw_max);
      st.backoff = std::uniform_int_distribution<std::size_t>(0, st.cw - 1)(rng);
    }
  }
  return out;
}

// Centralized greedy: candidates in descending backlog order (ties by link
// id); each is admitted iff it and every admitted link stay receivable.
// Collision-free and maximal.
inline SlotOutcome cen_schedule_slot(std::span<const Link> links, std::span<const LinkId> ready,
                                     std::span<const std::size_t> backlog, const Channel& ch) {
  SlotOutcome out;
  std::vector<LinkId> order(ready.begin(), ready.end());
  std::sort(order.begin(), order.end(), [&](LinkId a, LinkId b) {
    return backlog[a] != backlog[b] ? backlog[a] > backlog[b] : a < b;
  });
  detail::ActiveSet active(links, ch);
  for (LinkId id : order) {
    const Link& l = links[id];
    if (!active.node_busy(l.tx) && !active.node_busy(l.rx) && active.admissible(id)) {
      active.admit(id);
      out.attempted.push_back(id);
      out.succeeded.push_back(id);
    } else {
      out.deferred.push_back(id);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exhaustive oracle

struct InstanceTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OptimalOptions {
  // Candidate routes per flow: simple paths with h_min .. h_min + extra_hops hops.
  std::size_t extra_hops = 1;
  // Per-flow absolute hop cap; overrides extra_hops when non-empty.
  std::vector<std::size_t> hop_caps;
  std::size_t max_nodes = 12;
  std::size_t max_links = 64;
  std::size_t max_sets = 200000;
};

struct OptimalResult {
  double capacity = 0.0;  // units of W
  double scale = 0.0;     // pattern multiplier a
  std::vector<Link> links;
  std::vector<std::vector<Route>> routes;  // candidate routes per flow
  std::size_t maximal_sets = 0;
};

namespace detail {

inline void simple_paths(const ConnectivityGraph& g, NodeId u, NodeId dst, std::size_t cap,
                         const std::vector<std::size_t>& to_dst, std::vector<NodeId>& path,
                         std::vector<char>& on_path, std::vector<std::vector<NodeId>>& out) {
  if (u == dst) {
    out.push_back(path);
    return;
  }
  const std::size_t used = path.size() - 1;
  for (NodeId v : g.neighbors(u)) {
    if (on_path[v] || to_dst[v] == static_cast<std::size_t>(-1)) continue;
    if (used + 1 + to_dst[v] > cap) continue;
    on_path[v] = 1;
    path.push_back(v);
    simple_paths(g, v, dst, cap, to_dst, path, on_path, out);
    path.pop_back();
    on_path[v] = 0;
  }
}

}  // namespace detail

// Simple paths src -> dst with at most `cap` hops, in lexicographic order.
inline std::vector<Route> routes_up_to(const Network& net, const ConnectivityGraph& g, NodeId src,
                                       NodeId dst, std::size_t cap) {
  const auto to_dst = hop_distances(g, dst);
  std::vector<std::vector<NodeId>> paths;
  std::vector<NodeId> path{src};
  std::vector<char> on_path(g.size(), 0);
  on_path[src] = 1;
  if (to_dst[src] != static_cast<std::size_t>(-1))
    detail::simple_paths(g, src, dst, cap, to_dst, path, on_path, paths);
  std::vector<Route> out;
  for (auto& p : paths) out.push_back(Route::through(net, std::move(p)));
  return out;
}

// Enumerates maximal SINR- and half-duplex-feasible subsets of `links`.
inline std::vector<std::vector<LinkId>> maximal_feasible_sets(std::span<const Link> links,
                                                              const Channel& ch,
                                                              std::size_t max_sets = 200000) {
  std::vector<std::vector<LinkId>> out;
  std::vector<LinkId> current;
  std::vector<Link> chosen;

  auto extendable_by = [&](LinkId id) {
    chosen.push_back(links[id]);
    const bool ok = feasible_at_power(chosen, ch);
    chosen.pop_back();
    return ok;
  };

  // Depth-first over increasing link ids; feasibility is closed under
  // removal, so every feasible set is reached exactly once.
  auto recurse = [&](auto&& self, LinkId next) -> void {
    bool grew = false;
    for (LinkId id = next; id < links.size(); ++id) {
      if (!extendable_by(id)) continue;
      grew = true;
      current.push_back(id);
      chosen.push_back(links[id]);
      self(self, id + 1);
      chosen.pop_back();
      current.pop_back();
    }
    if (grew || current.empty()) return;
    for (LinkId id = 0; id < links.size(); ++id) {
      if (std::find(current.begin(), current.end(), id) != current.end()) continue;
      if (extendable_by(id)) return;
    }
    if (out.size() >= max_sets) throw InstanceTooLarge("too many feasible link sets; use simulation mode");
    out.push_back(current);
  };
  recurse(recurse, 0);
  return out;
}

// Optimal capacity (units of W) of a small instance: maximize a such that the
// rate vector a * v can be split over candidate routes and carried by a
// convex combination of maximal feasible link sets.
inline OptimalResult optimal_capacity(const Network& net, std::vector<FlowSpec> flows, Power p_t,
                                      const PhysicalParams& params, const OptimalOptions& opt = {}) {
  if (net.size() > opt.max_nodes)
    throw InstanceTooLarge("instance has " + std::to_string(net.size()) + " nodes (limit " +
                           std::to_string(opt.max_nodes) + "); use simulation mode");
  if (flows.empty()) throw std::invalid_argument("optimal_capacity: no flows");
  validate_flows(net, flows);
  normalize_weights(flows);
  if (!opt.hop_caps.empty() && opt.hop_caps.size() != flows.size())
    throw std::invalid_argument("optimal_capacity: hop_caps must match flow count");

  const ConnectivityGraph g(net, transmission_range(p_t, params));
  OptimalResult res;
  std::map<Link, LinkId> link_ids;
  for (std::size_t f = 0; f < flows.size(); ++f) {
    const auto& fl = flows[f];
    const auto h_min = hop_distances(g, fl.dst)[fl.src];
    if (h_min == static_cast<std::size_t>(-1))
      throw NoRouteError("optimal_capacity: flow " + std::to_string(f) + " has no route");
    const std::size_t cap = opt.hop_caps.empty() ? h_min + opt.extra_hops : opt.hop_caps[f];
    auto rs = routes_up_to(net, g, fl.src, fl.dst, std::max(cap, h_min));
    for (const auto& r : rs)
      for (std::size_t i = 1; i < r.nodes.size(); ++i) {
        const Link l{r.nodes[i - 1], r.nodes[i]};
        if (!link_ids.contains(l)) link_ids.emplace(l, link_ids.size());
      }
    res.routes.push_back(std::move(rs));
  }
  if (link_ids.size() > opt.max_links)
    throw InstanceTooLarge("instance has " + std::to_string(link_ids.size()) +
                           " candidate links (limit " + std::to_string(opt.max_links) +
                           "); use simulation mode");
  res.links.resize(link_ids.size());
  for (const auto& [l, id] : link_ids) res.links[id] = l;

  const Channel ch(net, p_t, params);
  const auto sets = maximal_feasible_sets(res.links, ch, opt.max_sets);
  res.maximal_sets = sets.size();

  // Columns: [a | y(f, route) ... | x(set) ...]
  std::size_t n_routes = 0;
  for (const auto& rs : res.routes) n_routes += rs.size();
  const std::size_t n_vars = 1 + n_routes + sets.size();
  lp::Problem prob;
  prob.vars = n_vars;
  prob.c.assign(n_vars, 0.0);
  prob.c[0] = 1.0;

  const std::size_t n_links = res.links.size();
  std::vector<std::vector<double>> link_rows(n_links, std::vector<double>(n_vars, 0.0));
  std::size_t col = 1;
  for (std::size_t f = 0; f < flows.size(); ++f) {
    std::vector<double> row(n_vars, 0.0);
    row[0] = flows[f].weight;
    for (const auto& r : res.routes[f]) {
      row[col] = -1.0;
      for (std::size_t i = 1; i < r.nodes.size(); ++i)
        link_rows[link_ids.at(Link{r.nodes[i - 1], r.nodes[i]})][col] += 1.0;
      ++col;
    }
    prob.a.push_back(std::move(row));
    prob.b.push_back(0.0);
  }
  std::vector<double> share(n_vars, 0.0);
  for (std::size_t s = 0; s < sets.size(); ++s) {
    for (LinkId id : sets[s]) link_rows[id][col] -= 1.0;
    share[col] = 1.0;
    ++col;
  }
  for (auto& row : link_rows) {
    prob.a.push_back(std::move(row));
    prob.b.push_back(0.0);
  }
  prob.a.push_back(std::move(share));
  prob.b.push_back(1.0);

  const auto sol = lp::maximize(prob);
  double weight_sum = 0.0;
  for (const auto& f : flows) weight_sum += f.weight;
  res.scale = sol.objective;
  res.capacity = sol.objective * weight_sum * params.w;
  return res;
}

}  // namespace pwrcap
