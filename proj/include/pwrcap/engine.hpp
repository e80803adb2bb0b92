#pragma once

// Slot loop that drains per-flow workloads over fixed min-hop routes and
// reports capacity as delivered workload over drain time.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "pwrcap/mac.hpp"
#include "pwrcap/phy.hpp"
#include "pwrcap/routing.hpp"
#include "pwrcap/topology.hpp"

namespace pwrcap {

enum class SchedulerKind { CarrierSense, Centralized };

inline const char* to_string(SchedulerKind s) {
  return s == SchedulerKind::CarrierSense ? "cs" : "cen";
}

// Called once per slot with the link table the outcome indexes into.
using SlotObserver = std::function<void(std::size_t slot, const SlotOutcome&, const std::vector<Link>&)>;

struct SimConfig {
  Network network;
  std::vector<FlowSpec> flows;
  SchedulerKind scheduler = SchedulerKind::Centralized;
  double range = 250.0;  // target transmission range; sets the common power
  PhysicalParams params = PhysicalParams::defaults();
  BackoffConfig backoff;
  std::uint64_t seed = 1;
  std::size_t max_slots = 0;  // 0: 200 x total workload
  SlotObserver observer;
};

struct CapacityReport {
  std::size_t slots = 0;      // T
  double capacity = 0.0;      // units of W
  std::size_t workload = 0;   // sum over flows
  std::size_t delivered = 0;
  std::vector<std::size_t> completion_slot;  // per flow, 1-based; 0 if unfinished
  double spatial_reuse = 0.0; // successes per slot, over slots with an attempt
  double avg_hops = 0.0;
  double collision_rate = 0.0;
  std::size_t attempts = 0;
  std::size_t successes = 0;
  std::size_t collisions = 0;
  std::vector<Route> routes;
  std::vector<Link> links;
};

struct SimulationTimeout : std::runtime_error {
  CapacityReport partial;
  SimulationTimeout(const std::string& what, CapacityReport report)
      : std::runtime_error(what), partial(std::move(report)) {}
};

inline double gain(double c_high, double c_low) {
  if (!(c_low > 0.0)) throw std::domain_error("gain: low-power capacity must be > 0");
  return c_high / c_low;
}

namespace detail {

// Packets of one flow waiting at one link.
struct FlowQueue {
  std::size_t flow = 0;
  std::size_t hop = 0;  // index of this link within the flow's route
  std::size_t count = 0;
};

struct LinkQueues {
  std::vector<FlowQueue> by_flow;
  std::size_t next = 0;  // round-robin cursor
};

}  // namespace detail

inline CapacityReport run(const SimConfig& cfg) {
  cfg.params.validate();
  if (cfg.flows.empty()) throw std::invalid_argument("run: no flows");
  validate_flows(cfg.network, cfg.flows);
  for (const auto& f : cfg.flows)
    if (f.workload == 0) throw std::invalid_argument("run: workloads must be > 0");

  const ConnectivityGraph graph(cfg.network, cfg.range);
  const Power p_t = power_for_range(cfg.range, cfg.params);
  const Channel channel(cfg.network, p_t, cfg.params);

  CapacityReport rep;
  std::map<Link, LinkId> ids;
  std::vector<std::vector<LinkId>> route_links;
  for (const auto& f : cfg.flows) {
    rep.routes.push_back(min_hop_route(cfg.network, graph, f.src, f.dst));
    const auto& nodes = rep.routes.back().nodes;
    std::vector<LinkId> hops;
    for (std::size_t i = 1; i < nodes.size(); ++i) {
      const Link l{nodes[i - 1], nodes[i]};
      auto [it, inserted] = ids.emplace(l, rep.links.size());
      if (inserted) rep.links.push_back(l);
      hops.push_back(it->second);
    }
    route_links.push_back(std::move(hops));
  }

  const std::size_t n_links = rep.links.size();
  std::vector<detail::LinkQueues> queues(n_links);
  std::vector<std::size_t> backlog(n_links, 0);
  std::vector<std::vector<std::size_t>> slot_of(cfg.flows.size());  // flow, hop -> by_flow index
  for (std::size_t f = 0; f < cfg.flows.size(); ++f) {
    for (std::size_t h = 0; h < route_links[f].size(); ++h) {
      auto& q = queues[route_links[f][h]];
      slot_of[f].push_back(q.by_flow.size());
      q.by_flow.push_back({f, h, 0});
    }
    // saturating source: the whole workload waits at the first hop
    const LinkId first = route_links[f].front();
    queues[first].by_flow[slot_of[f][0]].count = cfg.flows[f].workload;
    backlog[first] += cfg.flows[f].workload;
    rep.workload += cfg.flows[f].workload;
  }
  rep.completion_slot.assign(cfg.flows.size(), 0);
  std::vector<std::size_t> delivered(cfg.flows.size(), 0);
  double hop_sum = 0.0;
  for (const auto& r : rep.routes) hop_sum += static_cast<double>(r.hops());
  rep.avg_hops = hop_sum / static_cast<double>(cfg.flows.size());

  std::vector<LinkState> state(n_links, LinkState{0, 0, cfg.backoff.cw_min});
  std::mt19937_64 rng(cfg.seed);
  const std::size_t max_slots = cfg.max_slots ? cfg.max_slots : 200 * rep.workload;

  std::size_t busy_slots = 0;
  std::vector<LinkId> ready;
  ready.reserve(n_links);
  for (std::size_t slot = 0;; ++slot) {
    if (slot >= max_slots) {
      rep.slots = slot;
      rep.capacity = static_cast<double>(rep.delivered) / static_cast<double>(slot) * cfg.params.w;
      throw SimulationTimeout("run: workload not drained within " + std::to_string(max_slots) + " slots",
                              std::move(rep));
    }
    ready.clear();
    for (LinkId id = 0; id < n_links; ++id)
      if (backlog[id] > 0) ready.push_back(id);

    SlotOutcome out = cfg.scheduler == SchedulerKind::CarrierSense
                          ? cs_schedule_slot(rep.links, state, ready, channel, cfg.backoff, rng)
                          : cen_schedule_slot(rep.links, ready, backlog, channel);
    if (cfg.observer) cfg.observer(slot, out, rep.links);

    rep.attempts += out.attempted.size();
    rep.successes += out.succeeded.size();
    rep.collisions += out.collided.size();
    if (!out.attempted.empty()) ++busy_slots;

    for (LinkId id : out.succeeded) {
      auto& q = queues[id];
      // serve flows sharing this link round-robin
      std::size_t k = q.next;
      while (q.by_flow[k].count == 0) k = (k + 1) % q.by_flow.size();
      q.next = (k + 1) % q.by_flow.size();
      auto& fq = q.by_flow[k];
      --fq.count;
      --backlog[id];
      const std::size_t f = fq.flow;
      const std::size_t h = fq.hop + 1;
      if (h == route_links[f].size()) {
        ++rep.delivered;
        if (++delivered[f] == cfg.flows[f].workload) rep.completion_slot[f] = slot + 1;
      } else {
        const LinkId nxt = route_links[f][h];
        ++queues[nxt].by_flow[slot_of[f][h]].count;
        ++backlog[nxt];
      }
    }

    if (rep.delivered == rep.workload) {
      rep.slots = slot + 1;
      break;
    }
  }

  rep.capacity = static_cast<double>(rep.workload) / static_cast<double>(rep.slots) * cfg.params.w;
  rep.spatial_reuse = busy_slots ? static_cast<double>(rep.successes) / static_cast<double>(busy_slots) : 0.0;
  rep.collision_rate = rep.attempts ? static_cast<double>(rep.collisions) / static_cast<double>(rep.attempts) : 0.0;
  return rep;
}

struct SweepError : std::runtime_error {
  double range;
  std::uint64_t seed;
  SweepError(const std::string& what, double r, std::uint64_t s)
      : std::runtime_error(what), range(r), seed(s) {}
};

// Runs every config, fanning out over `jobs` worker threads. Results keep
// the input order; the first failure is rethrown tagged with (r, seed).
inline std::vector<CapacityReport> sweep(const std::vector<SimConfig>& configs, unsigned jobs = 1) {
  std::vector<CapacityReport> out(configs.size());
  std::vector<std::exception_ptr> errors(configs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      try {
        out[i] = run(configs[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(configs.size())));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  for (std::size_t i = 0; i < configs.size(); ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const std::exception& e) {
      throw SweepError(std::string(e.what()) + " (r=" + std::to_string(configs[i].range) +
                           ", seed=" + std::to_string(configs[i].seed) + ")",
                       configs[i].range, configs[i].seed);
    }
  }
  return out;
}

}  // namespace pwrcap
