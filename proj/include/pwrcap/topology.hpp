#pragma once

// Node placement and power-dependent connectivity: uniform random fields,
// lattices, and the hand-constructed capacity examples.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <queue>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pwrcap/geometry.hpp"

namespace pwrcap {

using NodeId = std::size_t;

struct Area {
  enum class Kind { Square, Disc, Box };

  Kind kind = Kind::Box;
  double side = 0.0;    // Square: [0, side]^2
  double radius = 0.0;  // Disc: centered at the origin
  Point lo;             // Box corners
  Point hi;

  static Area square(double side) {
    Area a;
    a.kind = Kind::Square;
    a.side = side;
    a.hi = {side, side};
    return a;
  }
  static Area disc(double radius) {
    Area a;
    a.kind = Kind::Disc;
    a.radius = radius;
    a.lo = {-radius, -radius};
    a.hi = {radius, radius};
    return a;
  }
  static Area box(Point lo, Point hi) {
    Area a;
    a.lo = lo;
    a.hi = hi;
    return a;
  }

  double measure() const {
    switch (kind) {
      case Kind::Square: return side * side;
      case Kind::Disc: return std::numbers::pi * radius * radius;
      case Kind::Box: return (hi.x - lo.x) * (hi.y - lo.y);
    }
    return 0.0;
  }

  bool contains(Point p, double tol = 1e-9) const {
    const double scale = tol * std::max({1.0, std::abs(hi.x - lo.x), std::abs(hi.y - lo.y), radius});
    if (kind == Kind::Disc) return std::hypot(p.x, p.y) <= radius + scale;
    return p.x >= lo.x - scale && p.x <= hi.x + scale && p.y >= lo.y - scale && p.y <= hi.y + scale;
  }
};

class Network {
 public:
  Network() = default;

  Network(std::vector<Point> nodes, Area area, std::uint64_t seed = 0)
      : nodes_(std::move(nodes)), area_(area), seed_(seed) {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (!area_.contains(nodes_[i]))
        throw std::invalid_argument("Network: node " + std::to_string(i) + " lies outside the area");
    }
    std::vector<Point> sorted = nodes_;
    std::sort(sorted.begin(), sorted.end(),
              [](Point a, Point b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw std::invalid_argument("Network: coincident nodes");
  }

  std::size_t size() const { return nodes_.size(); }
  const std::vector<Point>& nodes() const { return nodes_; }
  Point position(NodeId id) const { return nodes_.at(id); }
  const Area& area() const { return area_; }
  std::uint64_t seed() const { return seed_; }

  double distance(NodeId a, NodeId b) const { return pwrcap::distance(nodes_[a], nodes_[b]); }

  friend bool operator==(const Network& a, const Network& b) {
    return a.nodes_ == b.nodes_ && a.seed_ == b.seed_;
  }

 private:
  std::vector<Point> nodes_;
  Area area_;
  std::uint64_t seed_ = 0;
};

struct FlowSpec {
  NodeId src = 0;
  NodeId dst = 0;
  double weight = 1.0;         // traffic pattern component v_i
  std::size_t workload = 500;  // packets, b * v_i
};

// Rescales pattern weights so that sum(v_i^2) = 1.
inline void normalize_weights(std::vector<FlowSpec>& flows) {
  double sq = 0.0;
  for (const auto& f : flows) {
    if (!(f.weight > 0.0)) throw std::invalid_argument("flow weight must be > 0");
    sq += f.weight * f.weight;
  }
  if (sq == 0.0) return;
  const double norm = std::sqrt(sq);
  for (auto& f : flows) f.weight /= norm;
}

inline void validate_flows(const Network& net, const std::vector<FlowSpec>& flows) {
  for (const auto& f : flows) {
    if (f.src >= net.size() || f.dst >= net.size())
      throw std::invalid_argument("flow endpoint out of range");
    if (f.src == f.dst) throw std::invalid_argument("flow source equals destination");
    if (!(f.weight > 0.0)) throw std::invalid_argument("flow weight must be > 0");
  }
}

struct Scenario {
  Network network;
  std::vector<FlowSpec> flows;
};

inline Network gen_uniform(std::size_t n, double side, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("gen_uniform: need at least 2 nodes");
  if (!(side > 0.0)) throw std::invalid_argument("gen_uniform: side must be > 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(0.0, side);
  std::vector<Point> nodes;
  nodes.reserve(n);
  while (nodes.size() < n) {
    const Point p{coord(rng), coord(rng)};
    // resample coincident draws; d = 0 is outside the path-loss model
    if (std::find(nodes.begin(), nodes.end(), p) == nodes.end()) nodes.push_back(p);
  }
  return Network(std::move(nodes), Area::square(side), seed);
}

// Node (i, j) sits at (j * spacing, i * spacing) with id i * cols + j.
// Flows: one per row left to right, then one per column top to bottom.
inline Scenario gen_grid(std::size_t rows, std::size_t cols, double spacing,
                         std::size_t workload = 500) {
  if (rows < 2 || cols < 2) throw std::invalid_argument("gen_grid: need at least 2x2");
  if (!(spacing > 0.0)) throw std::invalid_argument("gen_grid: spacing must be > 0");
  std::vector<Point> nodes;
  nodes.reserve(rows * cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      nodes.push_back({static_cast<double>(j) * spacing, static_cast<double>(i) * spacing});
  const Area area = Area::box({0.0, 0.0}, {static_cast<double>(cols - 1) * spacing,
                                           static_cast<double>(rows - 1) * spacing});
  std::vector<FlowSpec> flows;
  for (std::size_t i = 0; i < rows; ++i) flows.push_back({i * cols, i * cols + cols - 1, 1.0, workload});
  for (std::size_t j = 0; j < cols; ++j) flows.push_back({j, (rows - 1) * cols + j, 1.0, workload});
  normalize_weights(flows);
  return {Network(std::move(nodes), area), std::move(flows)};
}

// Unbounded-gain construction: 2m+1 vertical links of length d spaced 2d
// apart, two evenly spaced nodes between horizontal neighbors, and one
// relay splitting the middle link.
struct Theorem2Layout {
  Scenario scenario;
  std::size_t m = 0;
  double d = 0.0;
  NodeId a1 = 0;  // top of the middle link
  NodeId a2 = 0;  // bottom of the middle link
  NodeId a3 = 0;  // middle relay
  std::vector<std::pair<NodeId, NodeId>> vertical_links;  // top -> bottom, left to right
};

inline Theorem2Layout gen_theorem2(std::size_t m, double d, std::size_t workload = 500) {
  if (m < 1) throw std::invalid_argument("gen_theorem2: m must be >= 1");
  if (!(d > 0.0)) throw std::invalid_argument("gen_theorem2: d must be > 0");
  const std::size_t per_row = 6 * m + 1;
  std::vector<Point> nodes;
  nodes.reserve(12 * m + 3);
  for (double y : {d, 0.0}) {
    for (std::size_t j = 0; j < per_row; ++j) {
      const double base = 2.0 * d * static_cast<double>(j / 3);
      const double offset = (2.0 * d / 3.0) * static_cast<double>(j % 3);
      nodes.push_back({base + offset, y});
    }
  }
  Theorem2Layout out;
  out.m = m;
  out.d = d;
  out.a3 = nodes.size();
  nodes.push_back({2.0 * d * static_cast<double>(m), d / 2.0});

  std::vector<FlowSpec> flows;
  for (std::size_t k = 0; k <= 2 * m; ++k) {
    const NodeId top = 3 * k;
    const NodeId bottom = per_row + 3 * k;
    out.vertical_links.emplace_back(top, bottom);
    flows.push_back({top, bottom, 1.0, workload});
  }
  out.a1 = 3 * m;
  out.a2 = per_row + 3 * m;
  normalize_weights(flows);
  const Area area = Area::box({0.0, 0.0}, {4.0 * d * static_cast<double>(m), d});
  out.scenario = {Network(std::move(nodes), area), std::move(flows)};
  return out;
}

// k flows crossing a shared center node. Each flow runs along a spoke pair
// (source spoke at angle pi*i/k, destination spoke opposite). Spoke nodes
// sit every `inner` * outer_ratio / hops meters out to radius inner * outer_ratio.
// At r_low every min-hop route crosses the center; at r_high every flow is
// one hop. k = 2, outer_ratio = 1 gives the five-node small-diameter example.
struct StarLayout {
  Scenario scenario;
  NodeId center = 0;
  std::size_t spoke_hops = 1;
  double r_low = 0.0;
  double r_high = 0.0;
};

inline StarLayout gen_star(std::size_t k, double inner, double outer_ratio = 1.0,
                           std::size_t workload = 500) {
  if (k < 2) throw std::invalid_argument("gen_star: need at least 2 flows");
  if (!(inner > 0.0)) throw std::invalid_argument("gen_star: inner radius must be > 0");
  if (!(outer_ratio >= 1.0)) throw std::invalid_argument("gen_star: outer_ratio must be >= 1");
  const double outer = inner * outer_ratio;
  const auto hops = static_cast<std::size_t>(std::ceil(outer_ratio - 1e-9));
  const double spacing = outer / static_cast<double>(hops);

  std::vector<Point> nodes{{0.0, 0.0}};
  std::vector<FlowSpec> flows;
  auto spoke = [&](double angle) {
    NodeId last = 0;
    for (std::size_t j = 1; j <= hops; ++j) {
      const double rad = spacing * static_cast<double>(j);
      last = nodes.size();
      nodes.push_back({rad * std::cos(angle), rad * std::sin(angle)});
    }
    return last;
  };
  for (std::size_t i = 0; i < k; ++i) {
    const double theta = std::numbers::pi * static_cast<double>(i) / static_cast<double>(k);
    const NodeId src = spoke(theta);
    const NodeId dst = spoke(theta + std::numbers::pi);
    flows.push_back({src, dst, 1.0, workload});
  }
  normalize_weights(flows);

  StarLayout out;
  out.spoke_hops = hops;
  out.r_low = spacing * (1.0 + 1e-9);
  out.r_high = 2.0 * outer * (1.0 + 1e-9);
  out.scenario = {Network(std::move(nodes), Area::disc(outer)), std::move(flows)};
  return out;
}

// Four nodes A, B, C, D with flows A->C and B->D; at r in [hop, sqrt(2) hop)
// the only links are (A,C), (B,C) and (C,D), all sharing C.
inline Scenario gen_shared_relay(double hop, std::size_t workload = 500) {
  if (!(hop > 0.0)) throw std::invalid_argument("gen_shared_relay: hop must be > 0");
  std::vector<Point> nodes{{0.0, hop}, {hop, 2.0 * hop}, {hop, hop}, {2.0 * hop, hop}};
  std::vector<FlowSpec> flows{{0, 2, 1.0, workload}, {1, 3, 1.0, workload}};
  normalize_weights(flows);
  return {Network(std::move(nodes), Area::box({0.0, 0.0}, {2.0 * hop, 2.0 * hop})), std::move(flows)};
}

// Undirected unit-disk graph: edge (u, v) iff |u - v| <= r, with a 1e-12
// relative allowance on r^2 for rounding. Neighbor lists are sorted ascending.
class ConnectivityGraph {
 public:
  ConnectivityGraph() = default;

  ConnectivityGraph(const Network& net, double r) : range_(r), adj_(net.size()) {
    if (!(r > 0.0)) throw std::invalid_argument("connectivity: range must be > 0");
    const double r2 = r * r * (1.0 + 1e-12);
    const auto& p = net.nodes();
    for (std::size_t u = 0; u < p.size(); ++u)
      for (std::size_t v = u + 1; v < p.size(); ++v)
        if (squared_distance(p[u], p[v]) <= r2) {
          adj_[u].push_back(v);
          adj_[v].push_back(u);
        }
  }

  std::size_t size() const { return adj_.size(); }
  double range() const { return range_; }
  const std::vector<NodeId>& neighbors(NodeId u) const { return adj_.at(u); }

  bool has_edge(NodeId u, NodeId v) const {
    const auto& n = adj_.at(u);
    return std::binary_search(n.begin(), n.end(), v);
  }

  std::size_t edge_count() const {
    std::size_t total = 0;
    for (const auto& n : adj_) total += n.size();
    return total / 2;
  }

 private:
  double range_ = 0.0;
  std::vector<std::vector<NodeId>> adj_;
};

inline ConnectivityGraph connectivity(const Network& net, double r) { return {net, r}; }

// Breadth-first hop distances from src; unreachable nodes hold npos.
inline std::vector<std::size_t> hop_distances(const ConnectivityGraph& g, NodeId src) {
  constexpr auto npos = static_cast<std::size_t>(-1);
  std::vector<std::size_t> dist(g.size(), npos);
  std::queue<NodeId> q;
  dist.at(src) = 0;
  q.push(src);
  while (!q.empty()) {
    const NodeId u = q.front();
    q.pop();
    for (NodeId v : g.neighbors(u))
      if (dist[v] == npos) {
        dist[v] = dist[u] + 1;
        q.push(v);
      }
  }
  return dist;
}

inline bool is_connected(const ConnectivityGraph& g) {
  if (g.size() <= 1) return true;
  const auto dist = hop_distances(g, 0);
  return std::none_of(dist.begin(), dist.end(),
                      [](std::size_t d) { return d == static_cast<std::size_t>(-1); });
}

// Critical range for whp connectivity of n uniform nodes, scaled to `area`
// (the unit-disc formula, applied to squares as an approximation).
// k_n defaults to ln ln n.
inline double critical_range(std::size_t n, double area = 1.0, std::optional<double> k_n = {}) {
  if (n < 3) throw std::invalid_argument("critical_range: need n >= 3 for the ln ln n rule");
  if (!(area > 0.0)) throw std::invalid_argument("critical_range: area must be > 0");
  const double ln_n = std::log(static_cast<double>(n));
  const double kn = k_n.value_or(std::log(ln_n));
  return std::sqrt(area) * std::sqrt((ln_n + kn) / (std::numbers::pi * static_cast<double>(n)));
}

}  // namespace pwrcap
