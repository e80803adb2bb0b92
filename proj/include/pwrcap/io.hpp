#pragma once

// JSON forms of networks, scenarios and parameters, and the JSON-lines slot
// trace: one header object per run followed by one object per slot.

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "pwrcap/engine.hpp"
#include "pwrcap/mac.hpp"
#include "pwrcap/phy.hpp"
#include "pwrcap/topology.hpp"
#include "pwrcap/verify.hpp"

namespace pwrcap {

using json = nlohmann::json;

inline json to_json(const PhysicalParams& p) {
  return {{"alpha", p.alpha}, {"beta", p.beta}, {"h_r", p.h_r}, {"h_s", p.h_s}, {"n0", p.n0}, {"w", p.w}};
}

inline PhysicalParams params_from_json(const json& j) {
  PhysicalParams p = PhysicalParams::defaults();
  if (j.contains("h_r_dbm")) {
    p = PhysicalParams::with_thresholds(j.value("alpha", p.alpha), j.value("beta", p.beta),
                                        dbm_to_linear(j.at("h_r_dbm").get<double>()), j.value("n0", p.n0));
  } else {
    p.alpha = j.value("alpha", p.alpha);
    p.beta = j.value("beta", p.beta);
    p.h_r = j.value("h_r", p.h_r);
    p.h_s = j.value("h_s", p.h_r / p.beta);
    p.n0 = j.value("n0", p.n0);
  }
  p.w = j.value("w", p.w);
  p.validate();
  return p;
}

inline json to_json(const Area& a) {
  switch (a.kind) {
    case Area::Kind::Square: return {{"kind", "square"}, {"side", a.side}};
    case Area::Kind::Disc: return {{"kind", "disc"}, {"radius", a.radius}};
    case Area::Kind::Box: return {{"kind", "box"}, {"lo", {a.lo.x, a.lo.y}}, {"hi", {a.hi.x, a.hi.y}}};
  }
  return {};
}

inline Area area_from_json(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "square") return Area::square(j.at("side").get<double>());
  if (kind == "disc") return Area::disc(j.at("radius").get<double>());
  if (kind == "box") {
    const auto& lo = j.at("lo");
    const auto& hi = j.at("hi");
    return Area::box({lo[0].get<double>(), lo[1].get<double>()}, {hi[0].get<double>(), hi[1].get<double>()});
  }
  throw std::invalid_argument("unknown area kind: " + kind);
}

inline json nodes_to_json(const std::vector<Point>& nodes) {
  json out = json::array();
  for (const Point& p : nodes) out.push_back({p.x, p.y});
  return out;
}

inline std::vector<Point> nodes_from_json(const json& j) {
  std::vector<Point> out;
  out.reserve(j.size());
  for (const auto& p : j) out.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  return out;
}

inline json to_json(const Network& net) {
  return {{"nodes", nodes_to_json(net.nodes())}, {"area", to_json(net.area())}, {"seed", net.seed()}};
}

inline Network network_from_json(const json& j) {
  return Network(nodes_from_json(j.at("nodes")), area_from_json(j.at("area")), j.value("seed", std::uint64_t{0}));
}

inline json to_json(const std::vector<FlowSpec>& flows) {
  json out = json::array();
  for (const auto& f : flows)
    out.push_back({{"src", f.src}, {"dst", f.dst}, {"weight", f.weight}, {"workload", f.workload}});
  return out;
}

inline std::vector<FlowSpec> flows_from_json(const json& j) {
  std::vector<FlowSpec> out;
  for (const auto& f : j)
    out.push_back({f.at("src").get<NodeId>(), f.at("dst").get<NodeId>(), f.value("weight", 1.0),
                   f.value("workload", std::size_t{500})});
  return out;
}

inline json to_json(const Scenario& s) {
  json j = to_json(s.network);
  j["flows"] = to_json(s.flows);
  return j;
}

inline Scenario scenario_from_json(const json& j) {
  Scenario s{network_from_json(j), flows_from_json(j.at("flows"))};
  validate_flows(s.network, s.flows);
  return s;
}

inline json links_to_json(std::span<const LinkId> ids, const std::vector<Link>& links) {
  json out = json::array();
  for (LinkId id : ids) out.push_back({links[id].tx, links[id].rx});
  return out;
}

inline std::vector<Link> links_from_json(const json& j) {
  std::vector<Link> out;
  for (const auto& l : j) out.push_back({l.at(0).get<NodeId>(), l.at(1).get<NodeId>()});
  return out;
}

// ---------------------------------------------------------------------------
// Slot traces

struct TraceHeader {
  std::string label;
  std::vector<Point> nodes;
  PhysicalParams params;
  double range = 0.0;
};

inline void write_trace_header(std::ostream& os, const TraceHeader& h) {
  os << json{{"trace", h.label}, {"nodes", nodes_to_json(h.nodes)}, {"params", to_json(h.params)}, {"range", h.range}}
            .dump()
     << '\n';
}

inline void write_trace_slot(std::ostream& os, std::size_t slot, const SlotOutcome& out, const std::vector<Link>& links) {
  os << json{{"slot", slot},
             {"attempted", links_to_json(out.attempted, links)},
             {"succeeded", links_to_json(out.succeeded, links)},
             {"collided", links_to_json(out.collided, links)}}
            .dump()
     << '\n';
}

// Observer that appends every slot of a run to `os`, after a header line.
inline SlotObserver trace_observer(std::ostream& os, const SimConfig& cfg, const std::string& label) {
  write_trace_header(os, {label, cfg.network.nodes(), cfg.params, cfg.range});
  return [&os](std::size_t slot, const SlotOutcome& out, const std::vector<Link>& links) {
    write_trace_slot(os, slot, out, links);
  };
}

struct TraceAudit {
  std::size_t runs = 0;
  std::size_t slots = 0;
  std::size_t lemma1_violations = 0;
  std::size_t sinr_violations = 0;      // succeeded set not receivable at the trace power
  std::size_t half_duplex_violations = 0;
  std::optional<std::string> first_violation;

  bool ok() const { return lemma1_violations == 0 && sinr_violations == 0 && half_duplex_violations == 0; }
};

// Streams a trace, checking every succeeded set against the receiver-distance
// inequality, joint SINR feasibility and half-duplex.
inline TraceAudit audit_trace(std::istream& is) {
  TraceAudit audit;
  std::optional<Network> net;
  std::optional<Channel> channel;
  PhysicalParams params;
  std::string label;
  std::string line;
  std::size_t line_no = 0;
  auto violation = [&](const std::string& what, std::size_t slot) {
    if (!audit.first_violation)
      audit.first_violation = label + " slot " + std::to_string(slot) + ": " + what;
  };
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw std::runtime_error("trace line " + std::to_string(line_no) + ": " + e.what());
    }
    if (j.contains("trace")) {
      label = j.at("trace").get<std::string>();
      params = params_from_json(j.at("params"));
      auto nodes = nodes_from_json(j.at("nodes"));
      Point lo = nodes.empty() ? Point{} : nodes.front(), hi = lo;
      for (const Point& p : nodes) {
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
      }
      net.emplace(std::move(nodes), Area::box(lo, hi));
      channel.emplace(*net, power_for_range(j.at("range").get<double>(), params), params);
      ++audit.runs;
      continue;
    }
    if (!net) throw std::runtime_error("trace line " + std::to_string(line_no) + ": slot record before header");
    const std::size_t slot = j.at("slot").get<std::size_t>();
    const auto succeeded = links_from_json(j.at("succeeded"));
    for (const Link& l : succeeded)
      if (l.tx >= net->size() || l.rx >= net->size() || l.tx == l.rx)
        throw std::runtime_error("trace line " + std::to_string(line_no) + ": bad link");
    ++audit.slots;
    if (!half_duplex_ok(succeeded)) {
      ++audit.half_duplex_violations;
      violation("node in two links", slot);
      continue;
    }
    if (!check_lemma1(link_geoms(*net, succeeded), params)) {
      ++audit.lemma1_violations;
      violation("receiver spacing below (delta/2)(|l1|+|l2|)", slot);
    }
    if (!feasible_at_power(succeeded, *channel)) {
      ++audit.sinr_violations;
      violation("succeeded set not jointly receivable", slot);
    }
  }
  return audit;
}

}  // namespace pwrcap
