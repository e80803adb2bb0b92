#pragma once

// Experiment specs, the built-in setups, topology resolution with the
// connectivity retry loop, the sweep driver, CSV rows and the replay
// manifest.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "pwrcap/engine.hpp"
#include "pwrcap/io.hpp"
#include "pwrcap/mac.hpp"
#include "pwrcap/topology.hpp"

#ifndef PWRCAP_VERSION
#define PWRCAP_VERSION "0.0.0"
#endif

namespace pwrcap {

inline constexpr const char* kVersion = PWRCAP_VERSION;

struct ExperimentSpec {
  std::string name = "custom";

  // uniform | grid | shared_relay | star | theorem2 | scenario
  std::string topology = "uniform";
  std::size_t n = 200;
  double side = 3000.0;
  std::size_t rows = 25;
  std::size_t cols = 25;
  double spacing = 200.0;
  double hop = 100.0;             // shared_relay
  std::size_t star_flows = 2;     // star
  double star_inner = 200.0;
  double star_outer_ratio = 1.0;
  std::size_t m = 2;              // theorem2
  double d = 100.0;
  std::optional<json> scenario;   // inline network + flows

  // builtin | nearest_neighbor | random_pairs
  std::string flows = "builtin";
  std::size_t flows_per_node = 1;
  bool require_connected = true;  // at the smallest r of the ladder
  std::size_t retry_cap = 2000;

  std::vector<double> ladder{250.0, 500.0, 750.0, 1000.0};
  std::vector<std::string> schedulers{"cs", "cen"};
  std::string routing = "hop";
  std::size_t workload = 500;
  std::size_t reps = 10;
  std::uint64_t base_seed = 1;
  std::vector<std::uint64_t> seeds;  // topology seeds; resolved when empty

  PhysicalParams params = PhysicalParams::defaults();
  BackoffConfig backoff;
  std::size_t max_slots = 0;

  std::string csv;
  std::string manifest;
  std::string trace;

  void validate() const {
    static const std::vector<std::string> topologies{"uniform", "grid", "shared_relay", "star", "theorem2", "scenario"};
    if (std::find(topologies.begin(), topologies.end(), topology) == topologies.end())
      throw std::invalid_argument("unknown topology: " + topology);
    if (flows != "builtin" && flows != "nearest_neighbor" && flows != "random_pairs")
      throw std::invalid_argument("unknown flow pattern: " + flows);
    if (topology == "uniform" && flows == "builtin")
      throw std::invalid_argument("uniform topology needs a flow pattern (nearest_neighbor or random_pairs)");
    if (topology == "scenario" && !scenario) throw std::invalid_argument("scenario topology needs a scenario object");
    if (ladder.empty()) throw std::invalid_argument("r ladder must not be empty");
    for (std::size_t i = 0; i < ladder.size(); ++i) {
      if (!(ladder[i] > 0.0)) throw std::invalid_argument("r ladder values must be > 0");
      if (i > 0 && !(ladder[i] > ladder[i - 1])) throw std::invalid_argument("r ladder must be ascending");
    }
    if (schedulers.empty()) throw std::invalid_argument("no schedulers");
    for (const auto& s : schedulers)
      if (s != "cs" && s != "cen" && s != "opt") throw std::invalid_argument("unknown scheduler: " + s);
    if (routing != "hop") throw std::invalid_argument("unknown routing: " + routing + " (only hop)");
    if (reps < 1) throw std::invalid_argument("repetitions must be >= 1");
    if (workload < 1) throw std::invalid_argument("workload must be >= 1");
    if (!seeds.empty() && seeds.size() != reps) throw std::invalid_argument("pinned seeds must match repetitions");
    if (flows_per_node < 1) throw std::invalid_argument("flows_per_node must be >= 1");
    params.validate();
  }
};

inline void to_json(json& j, const ExperimentSpec& s) {
  j = json{{"name", s.name},
           {"topology", s.topology},
           {"n", s.n},
           {"side", s.side},
           {"rows", s.rows},
           {"cols", s.cols},
           {"spacing", s.spacing},
           {"hop", s.hop},
           {"star_flows", s.star_flows},
           {"star_inner", s.star_inner},
           {"star_outer_ratio", s.star_outer_ratio},
           {"m", s.m},
           {"d", s.d},
           {"flows", s.flows},
           {"flows_per_node", s.flows_per_node},
           {"require_connected", s.require_connected},
           {"retry_cap", s.retry_cap},
           {"ladder", s.ladder},
           {"schedulers", s.schedulers},
           {"routing", s.routing},
           {"workload", s.workload},
           {"reps", s.reps},
           {"base_seed", s.base_seed},
           {"seeds", s.seeds},
           {"params", pwrcap::to_json(s.params)},
           {"backoff", {{"cw_min", s.backoff.cw_min}, {"cw_max", s.backoff.cw_max}}},
           {"max_slots", s.max_slots}};
  if (s.scenario) j["scenario"] = *s.scenario;
}

inline ExperimentSpec builtin_experiment(const std::string& name);

// Keys present in `j` override `base` (or the built-in named by "base").
inline ExperimentSpec spec_from_json(const json& j, ExperimentSpec s = {}) {
  if (j.contains("spec")) return spec_from_json(j.at("spec"), s);  // a manifest
  if (j.contains("base")) s = builtin_experiment(j.at("base").get<std::string>());
  auto take = [&](const char* key, auto& field) {
    if (j.contains(key)) j.at(key).get_to(field);
  };
  take("name", s.name);
  take("topology", s.topology);
  take("n", s.n);
  take("side", s.side);
  take("rows", s.rows);
  take("cols", s.cols);
  take("spacing", s.spacing);
  take("hop", s.hop);
  take("star_flows", s.star_flows);
  take("star_inner", s.star_inner);
  take("star_outer_ratio", s.star_outer_ratio);
  take("m", s.m);
  take("d", s.d);
  take("flows", s.flows);
  take("flows_per_node", s.flows_per_node);
  take("require_connected", s.require_connected);
  take("retry_cap", s.retry_cap);
  take("ladder", s.ladder);
  take("schedulers", s.schedulers);
  take("routing", s.routing);
  take("workload", s.workload);
  take("reps", s.reps);
  take("base_seed", s.base_seed);
  take("seeds", s.seeds);
  take("max_slots", s.max_slots);
  take("csv", s.csv);
  take("manifest", s.manifest);
  take("trace", s.trace);
  if (j.contains("params")) s.params = params_from_json(j.at("params"));
  if (j.contains("backoff")) {
    s.backoff.cw_min = j.at("backoff").value("cw_min", s.backoff.cw_min);
    s.backoff.cw_max = j.at("backoff").value("cw_max", s.backoff.cw_max);
  }
  if (j.contains("scenario")) s.scenario = j.at("scenario");
  s.validate();
  return s;
}

inline ExperimentSpec builtin_experiment(const std::string& name) {
  ExperimentSpec s;
  s.name = name;
  if (name == "exp1") {
    s.topology = "uniform";
    s.n = 200;
    s.side = 3000.0;
    s.flows = "nearest_neighbor";
    s.require_connected = false;
  } else if (name == "exp2") {
    s.topology = "uniform";
    s.n = 20;
    s.side = 1000.0;
    s.flows = "random_pairs";
  } else if (name == "exp3") {
    s.topology = "grid";
    s.reps = 10;
  } else if (name == "fig1") {
    s.topology = "shared_relay";
    s.hop = 100.0;
    s.ladder = {120.0};
    s.schedulers = {"opt", "cen", "cs"};
    s.reps = 1;
  } else if (name == "star") {
    s.topology = "star";
    s.ladder = {200.0, 400.0};
    s.schedulers = {"opt", "cen", "cs"};
    s.reps = 1;
  } else if (name == "theorem2") {
    s.topology = "theorem2";
    s.ladder = {75.0, 1000.0};  // (2/3) d < r_low < d; K = (1000 / 75)^4
    s.schedulers = {"cen", "cs"};
    s.reps = 1;
  } else {
    throw std::invalid_argument("unknown built-in experiment: " + name +
                                " (exp1, exp2, exp3, fig1, star, theorem2)");
  }
  s.validate();
  return s;
}

inline const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names{"exp1", "exp2", "exp3", "fig1", "star", "theorem2"};
  return names;
}

// ---------------------------------------------------------------------------
// Topologies

struct Instance {
  std::uint64_t seed = 0;
  Scenario scenario;
};

namespace detail {

inline std::uint64_t derive_seed(std::initializer_list<std::uint32_t> parts) {
  std::seed_seq seq(parts);
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

inline std::uint32_t lo32(std::uint64_t v) { return static_cast<std::uint32_t>(v); }
inline std::uint32_t hi32(std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); }

inline std::vector<FlowSpec> make_flows(const ExperimentSpec& s, const Network& net, std::uint64_t seed) {
  std::mt19937_64 rng(derive_seed({lo32(seed), hi32(seed), 0x666c6f77u}));
  std::vector<FlowSpec> flows;
  if (s.flows == "nearest_neighbor") {
    const ConnectivityGraph g(net, s.ladder.front());
    for (NodeId u = 0; u < net.size(); ++u) {
      const auto& nb = g.neighbors(u);
      if (nb.empty()) continue;  // isolated at the smallest r: no one-hop partner
      const NodeId v = nb[std::uniform_int_distribution<std::size_t>(0, nb.size() - 1)(rng)];
      flows.push_back({u, v, 1.0, s.workload});
    }
  } else {
    if (net.size() < 2) throw std::invalid_argument("random_pairs needs at least 2 nodes");
    for (NodeId u = 0; u < net.size(); ++u)
      for (std::size_t k = 0; k < s.flows_per_node; ++k) {
        NodeId v = std::uniform_int_distribution<NodeId>(0, net.size() - 2)(rng);
        if (v >= u) ++v;
        flows.push_back({u, v, 1.0, s.workload});
      }
  }
  if (flows.empty()) throw std::runtime_error("no flows could be formed");
  normalize_weights(flows);
  return flows;
}

inline Scenario fixed_scenario(const ExperimentSpec& s) {
  Scenario sc;
  if (s.topology == "grid") sc = gen_grid(s.rows, s.cols, s.spacing, s.workload);
  else if (s.topology == "shared_relay") sc = gen_shared_relay(s.hop, s.workload);
  else if (s.topology == "star") sc = gen_star(s.star_flows, s.star_inner, s.star_outer_ratio, s.workload).scenario;
  else if (s.topology == "theorem2") sc = gen_theorem2(s.m, s.d, s.workload).scenario;
  else if (s.topology == "scenario") sc = scenario_from_json(*s.scenario);
  if (s.flows != "builtin") sc.flows = make_flows(s, sc.network, s.base_seed);
  return sc;
}

inline bool connected_for(const ExperimentSpec& s, const Network& net) {
  return !s.require_connected || is_connected(ConnectivityGraph(net, s.ladder.front()));
}

}  // namespace detail

// One scenario per repetition. Random topologies take seeds in increasing
// order from base_seed, skipping any that are disconnected at the smallest r.
inline std::vector<Instance> resolve_instances(const ExperimentSpec& s) {
  s.validate();
  std::vector<Instance> out;
  if (s.topology != "uniform") {
    const Scenario sc = detail::fixed_scenario(s);
    if (!detail::connected_for(s, sc.network))
      throw std::runtime_error("topology is disconnected at r = " + std::to_string(s.ladder.front()));
    for (std::size_t rep = 0; rep < s.reps; ++rep)
      out.push_back({s.seeds.empty() ? s.base_seed + rep : s.seeds[rep], sc});
    return out;
  }
  auto build = [&](std::uint64_t seed) {
    Network net = gen_uniform(s.n, s.side, seed);
    auto flows = detail::make_flows(s, net, seed);
    return Scenario{std::move(net), std::move(flows)};
  };
  if (!s.seeds.empty()) {
    for (std::uint64_t seed : s.seeds) {
      Scenario sc = build(seed);
      if (!detail::connected_for(s, sc.network))
        throw std::runtime_error("pinned seed " + std::to_string(seed) + " is disconnected");
      out.push_back({seed, std::move(sc)});
    }
    return out;
  }
  std::uint64_t seed = s.base_seed;
  const std::uint64_t last = s.base_seed + s.retry_cap;
  while (out.size() < s.reps) {
    if (seed >= last)
      throw std::runtime_error("connectivity retries exhausted: seeds " + std::to_string(s.base_seed) + ".." +
                               std::to_string(last - 1) + " gave " + std::to_string(out.size()) + " of " +
                               std::to_string(s.reps) + " connected networks at r = " +
                               std::to_string(s.ladder.front()));
    Network net = gen_uniform(s.n, s.side, seed);
    if (detail::connected_for(s, net)) {
      auto flows = detail::make_flows(s, net, seed);
      out.push_back({seed, {std::move(net), std::move(flows)}});
    }
    ++seed;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Runs

struct ResultRow {
  std::string scheduler;
  std::string routing;
  double r = 0.0;
  std::uint64_t seed = 0;
  bool simulated = true;  // false for oracle rows: slot metrics are blank
  std::size_t slots = 0;
  double capacity = 0.0;
  double spatial_reuse = 0.0;
  double avg_hops = 0.0;
  double collision_rate = 0.0;
};

struct ExperimentResult {
  ExperimentSpec spec;  // with seeds pinned
  std::vector<ResultRow> rows;
};

struct RunOptions {
  unsigned jobs = 1;
  std::ostream* trace = nullptr;  // JSON-lines; forces sequential runs
};

inline SchedulerKind scheduler_kind(const std::string& s) {
  if (s == "cs") return SchedulerKind::CarrierSense;
  if (s == "cen") return SchedulerKind::Centralized;
  throw std::invalid_argument("not a simulated scheduler: " + s);
}

inline ExperimentResult run_experiment(const ExperimentSpec& spec, const RunOptions& opts = {}) {
  ExperimentResult res;
  res.spec = spec;
  const auto instances = resolve_instances(spec);
  res.spec.seeds.clear();
  for (const auto& inst : instances) res.spec.seeds.push_back(inst.seed);

  // Row skeletons in output order; simulated rows get a config slot.
  std::vector<SimConfig> configs;
  std::vector<std::size_t> config_row;
  for (std::size_t rep = 0; rep < instances.size(); ++rep) {
    const auto& inst = instances[rep];
    for (std::size_t si = 0; si < spec.schedulers.size(); ++si) {
      const auto& sched = spec.schedulers[si];
      for (std::size_t ri = 0; ri < spec.ladder.size(); ++ri) {
        const double r = spec.ladder[ri];
        ResultRow row{sched, spec.routing, r, inst.seed};
        if (sched == "opt") {
          const auto opt = optimal_capacity(inst.scenario.network, inst.scenario.flows,
                                            power_for_range(r, spec.params), spec.params);
          row.simulated = false;
          row.capacity = opt.capacity;
          const ConnectivityGraph g(inst.scenario.network, r);
          double hops = 0.0;
          for (const auto& f : inst.scenario.flows) hops += static_cast<double>(hop_distances(g, f.dst)[f.src]);
          row.avg_hops = hops / static_cast<double>(inst.scenario.flows.size());
        } else {
          SimConfig cfg{inst.scenario.network, inst.scenario.flows, scheduler_kind(sched), r, spec.params};
          cfg.backoff = spec.backoff;
          cfg.max_slots = spec.max_slots;
          cfg.seed = detail::derive_seed({detail::lo32(inst.seed), detail::hi32(inst.seed),
                                          static_cast<std::uint32_t>(ri), static_cast<std::uint32_t>(si)});
          configs.push_back(std::move(cfg));
          config_row.push_back(res.rows.size());
        }
        res.rows.push_back(std::move(row));
      }
    }
  }

  std::vector<CapacityReport> reports;
  if (opts.trace) {
    for (std::size_t i = 0; i < configs.size(); ++i) {
      SimConfig cfg = configs[i];
      const auto& row = res.rows[config_row[i]];
      std::ostringstream label;
      label << spec.name << " " << row.scheduler << " r=" << row.r << " seed=" << row.seed;
      cfg.observer = trace_observer(*opts.trace, cfg, label.str());
      try {
        reports.push_back(run(cfg));
      } catch (const std::exception& e) {
        throw SweepError(std::string(e.what()) + " (r=" + std::to_string(cfg.range) +
                             ", seed=" + std::to_string(row.seed) + ")",
                         cfg.range, row.seed);
      }
    }
  } else {
    reports = sweep(configs, opts.jobs);
  }
  for (std::size_t i = 0; i < configs.size(); ++i) {
    auto& row = res.rows[config_row[i]];
    const auto& rep = reports[i];
    row.slots = rep.slots;
    row.capacity = rep.capacity;
    row.spatial_reuse = rep.spatial_reuse;
    row.avg_hops = rep.avg_hops;
    row.collision_rate = rep.collision_rate;
  }
  return res;
}

// ---------------------------------------------------------------------------
// Output

inline constexpr const char* kCsvHeader =
    "scheduler,routing,r_m,seed,T_slots,capacity_W,spatial_reuse,avg_hops,collision_rate";

inline std::string to_csv(const std::vector<ResultRow>& rows) {
  std::string out = std::string(kCsvHeader) + "\n";
  char buf[512];
  for (const auto& r : rows) {
    if (r.simulated)
      std::snprintf(buf, sizeof buf, "%s,%s,%.6g,%llu,%zu,%.9f,%.6f,%.6f,%.6f\n", r.scheduler.c_str(),
                    r.routing.c_str(), r.r, static_cast<unsigned long long>(r.seed), r.slots, r.capacity,
                    r.spatial_reuse, r.avg_hops, r.collision_rate);
    else
      std::snprintf(buf, sizeof buf, "%s,%s,%.6g,%llu,,%.9f,,%.6f,\n", r.scheduler.c_str(), r.routing.c_str(), r.r,
                    static_cast<unsigned long long>(r.seed), r.capacity, r.avg_hops);
    out += buf;
  }
  return out;
}

inline json manifest_json(const ExperimentResult& res) {
  return {{"tool", "pwrcap"}, {"version", kVersion}, {"rows", res.rows.size()}, {"spec", res.spec}};
}

struct SummaryRow {
  std::string scheduler;
  double r = 0.0;
  std::size_t runs = 0;
  double capacity = 0.0;
  double spatial_reuse = 0.0;
  double avg_hops = 0.0;
  double collision_rate = 0.0;
};

// Means over repetitions, one row per (scheduler, r) in first-seen order.
inline std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows) {
  std::vector<SummaryRow> out;
  std::map<std::pair<std::string, double>, std::size_t> index;
  for (const auto& r : rows) {
    auto [it, inserted] = index.emplace(std::make_pair(r.scheduler, r.r), out.size());
    if (inserted) out.push_back({r.scheduler, r.r});
    auto& s = out[it->second];
    ++s.runs;
    s.capacity += r.capacity;
    s.spatial_reuse += r.spatial_reuse;
    s.avg_hops += r.avg_hops;
    s.collision_rate += r.collision_rate;
  }
  for (auto& s : out) {
    const double k = static_cast<double>(s.runs);
    s.capacity /= k;
    s.spatial_reuse /= k;
    s.avg_hops /= k;
    s.collision_rate /= k;
  }
  return out;
}

inline const SummaryRow& summary_at(const std::vector<SummaryRow>& rows, const std::string& scheduler, double r) {
  for (const auto& s : rows)
    if (s.scheduler == scheduler && s.r == r) return s;
  throw std::out_of_range("no summary for " + scheduler + " at r = " + std::to_string(r));
}

inline std::string summary_table(const std::vector<SummaryRow>& rows) {
  std::string out = "scheduler      r_m   runs  capacity_W  spatial_reuse  avg_hops  collision_rate\n";
  char buf[256];
  for (const auto& s : rows) {
    std::snprintf(buf, sizeof buf, "%-9s %8.1f %6zu %11.5f %14.4f %9.3f %15.4f\n", s.scheduler.c_str(), s.r, s.runs,
                  s.capacity, s.spatial_reuse, s.avg_hops, s.collision_rate);
    out += buf;
  }
  return out;
}

}  // namespace pwrcap
