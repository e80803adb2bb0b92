#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "pwrcap/topology.hpp"

namespace pwrcap {

struct NoRouteError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The covering-disc construction found an empty disc.
struct ConstructionFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Route {
  std::vector<NodeId> nodes;
  std::vector<double> hop_lengths;

  std::size_t hops() const { return nodes.empty() ? 0 : nodes.size() - 1; }
  NodeId src() const { return nodes.front(); }
  NodeId dst() const { return nodes.back(); }

  static Route through(const Network& net, std::vector<NodeId> path) {
    Route r;
    r.nodes = std::move(path);
    for (std::size_t i = 1; i < r.nodes.size(); ++i)
      r.hop_lengths.push_back(net.distance(r.nodes[i - 1], r.nodes[i]));
    return r;
  }

  friend bool operator==(const Route& a, const Route& b) { return a.nodes == b.nodes; }
};

// Adjacent consecutive nodes, no repeats.
inline bool is_valid_route(const Route& route, const ConnectivityGraph& g) {
  if (route.nodes.size() < 2) return false;
  std::vector<NodeId> seen = route.nodes;
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) return false;
  for (std::size_t i = 1; i < route.nodes.size(); ++i)
    if (!g.has_edge(route.nodes[i - 1], route.nodes[i])) return false;
  return true;
}

// Minimum hop count; among equal-hop routes the lexicographically smallest
// node sequence.
inline Route min_hop_route(const Network& net, const ConnectivityGraph& g, NodeId src, NodeId dst) {
  if (src >= g.size() || dst >= g.size()) throw std::out_of_range("min_hop_route: node id");
  if (src == dst) throw std::invalid_argument("min_hop_route: src == dst");
  constexpr auto npos = static_cast<std::size_t>(-1);
  const auto to_dst = hop_distances(g, dst);
  if (to_dst[src] == npos)
    throw NoRouteError("no route from " + std::to_string(src) + " to " + std::to_string(dst));
  std::vector<NodeId> path{src};
  NodeId u = src;
  while (u != dst) {
    for (NodeId v : g.neighbors(u)) {
      if (to_dst[v] + 1 == to_dst[u]) {
        u = v;
        break;
      }
    }
    path.push_back(u);
  }
  return Route::through(net, std::move(path));
}

// Route from a to b that stays close to the straight segment: the segment is
// cut into pieces of length 2 r_c, each covered by a disc of radius r_c, and
// the node nearest each disc center is chained in order. Requires r > 4 r_c
// so that every chained hop is a link.
inline Route segment_route(const Network& net, NodeId a, NodeId b, double r_c, double r) {
  if (!(r_c > 0.0)) throw std::invalid_argument("segment_route: r_c must be > 0");
  if (!(r > 4.0 * r_c)) throw std::invalid_argument("segment_route: requires r > 4 r_c");
  if (a == b) throw std::invalid_argument("segment_route: a == b");
  const Point pa = net.position(a);
  const Point pb = net.position(b);
  const double len = distance(pa, pb);
  if (len <= 4.0 * r_c) return Route::through(net, {a, b});

  const auto discs = static_cast<std::size_t>(std::ceil(len / (2.0 * r_c)));
  const Point dir = (1.0 / len) * (pb - pa);
  std::vector<NodeId> path{a};
  for (std::size_t i = 1; i <= discs; ++i) {
    const Point center = pa + ((2.0 * static_cast<double>(i) - 1.0) * r_c) * dir;
    NodeId best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (NodeId v = 0; v < net.size(); ++v) {
      if (v == a || v == b) continue;
      const double dv = distance(net.position(v), center);
      if (dv <= r_c && dv < best_d && std::find(path.begin(), path.end(), v) == path.end()) {
        best = v;
        best_d = dv;
      }
    }
    if (best_d == std::numeric_limits<double>::infinity())
      throw ConstructionFailure("segment_route: covering disc " + std::to_string(i) + " of " +
                                std::to_string(discs) + " is empty");
    path.push_back(best);
  }
  path.push_back(b);
  return Route::through(net, std::move(path));
}

// (a) every hop <= 4 r_c; (b) every relay within perpendicular distance r_c
// of the line through a and b;
// (c) hops between any two relays a1, a2 <= |a1 - a2| / (2 r_c) + 1.
inline bool check_lemma3(const Network& net, const Route& route, NodeId a, NodeId b, double r_c) {
  if (route.nodes.size() < 2 || route.src() != a || route.dst() != b) return false;
  const double slack = 1e-9 * r_c;
  for (double h : route.hop_lengths)
    if (h > 4.0 * r_c + slack) return false;
  const Point pa = net.position(a);
  const Point pb = net.position(b);
  const std::size_t last = route.nodes.size() - 1;
  for (std::size_t i = 1; i < last; ++i)
    if (distance_to_line(net.position(route.nodes[i]), pa, pb) > r_c + slack) return false;
  for (std::size_t i = 1; i < last; ++i)
    for (std::size_t j = i + 1; j < last; ++j) {
      const double gap = net.distance(route.nodes[i], route.nodes[j]);
      if (static_cast<double>(j - i) > gap / (2.0 * r_c) + 1.0 + 1e-9) return false;
    }
  return true;
}

}  // namespace pwrcap
