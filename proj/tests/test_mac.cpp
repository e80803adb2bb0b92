#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "pwrcap/mac.hpp"
#include "pwrcap/simplex.hpp"
#include "pwrcap/topology.hpp"

namespace pwrcap {
namespace {

PhysicalParams params() { return PhysicalParams::defaults(); }

// Independent SINR evaluation straight from the path-loss law.
bool oracle_feasible(const Network& net, const std::vector<Link>& set, double p, const PhysicalParams& prm) {
  std::set<NodeId> used;
  for (const Link& l : set)
    if (!used.insert(l.tx).second || !used.insert(l.rx).second) return false;
  for (const Link& l : set) {
    const double signal = p * std::pow(net.distance(l.tx, l.rx), -prm.alpha);
    double noise = prm.n0;
    for (const Link& o : set)
      if (!(o == l)) noise += p * std::pow(net.distance(o.tx, l.rx), -prm.alpha);
    if (signal < prm.h_r * (1 - 1e-9)) return false;
    if (noise > 0 && signal < prm.beta * noise * (1 - 1e-9)) return false;
  }
  return true;
}

std::vector<Link> graph_links(const Network& net, double r) {
  const ConnectivityGraph g(net, r);
  std::vector<Link> out;
  for (NodeId u = 0; u < net.size(); ++u)
    for (NodeId v : g.neighbors(u)) out.push_back({u, v});
  return out;
}

TEST(Channel, MatchesReceivedPower) {
  const Network net = gen_uniform(15, 1000.0, 3);
  const Power p = power_for_range(250.0, params());
  const Channel ch(net, p, params());
  for (NodeId u = 0; u < net.size(); ++u)
    for (NodeId v = 0; v < net.size(); ++v) {
      if (u == v) continue;
      const double expect = received_power(p, net.distance(u, v), params()).value();
      EXPECT_NEAR(ch.power(u, v) / expect, 1.0, 1e-12);
    }
  auto cubic = params();
  cubic.alpha = 3.0;
  const Channel c3(net, p, cubic);
  EXPECT_NEAR(c3.power(0, 1) / received_power(p, net.distance(0, 1), cubic).value(), 1.0, 1e-12);
}

TEST(HalfDuplex, NodeInAtMostOneLink) {
  EXPECT_TRUE(half_duplex_ok(std::vector<Link>{{0, 1}, {2, 3}}));
  EXPECT_FALSE(half_duplex_ok(std::vector<Link>{{0, 1}, {1, 2}}));
  EXPECT_FALSE(half_duplex_ok(std::vector<Link>{{0, 1}, {2, 1}}));
  EXPECT_TRUE(half_duplex_ok(std::vector<Link>{}));
}

TEST(Feasible, SingletonWithinAndBeyondRange) {
  const Network net({{0, 0}, {250, 0}, {251, 100}}, Area::square(300));
  const Power p = power_for_range(250.0, params());
  EXPECT_TRUE(feasible_at_power(std::vector<Link>{{0, 1}}, net, p, params()));
  EXPECT_FALSE(feasible_at_power(std::vector<Link>{{0, 2}}, net, p, params()));
}

TEST(Feasible, AgreesWithIndependentOracle) {
  std::mt19937_64 rng(5);
  int feasible = 0, infeasible = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const Network net = gen_uniform(30, 2000.0, rng());
    const double r = 300.0 + 50.0 * (trial % 8);
    auto links = graph_links(net, r);
    if (links.empty()) continue;
    std::shuffle(links.begin(), links.end(), rng);
    const std::size_t k = 1 + rng() % std::min<std::size_t>(5, links.size());
    std::vector<Link> set(links.begin(), links.begin() + k);
    const Power p = power_for_range(r, params());
    const Channel ch(net, p, params());
    const bool oracle = oracle_feasible(net, set, p.value(), params());
    EXPECT_EQ(feasible_at_power(set, ch), oracle);
    EXPECT_EQ(feasible_at_power(set, net, p, params()), oracle);
    (oracle ? feasible : infeasible)++;
  }
  EXPECT_GT(feasible, 20);
  EXPECT_GT(infeasible, 20);
}

TEST(Feasible, MonotoneInPower) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 300; ++trial) {
    const Network net = gen_uniform(25, 1500.0, rng());
    auto links = graph_links(net, 400.0);
    if (links.size() < 3) continue;
    std::shuffle(links.begin(), links.end(), rng);
    std::vector<Link> set(links.begin(), links.begin() + 3);
    const Power p = power_for_range(400.0, params());
    if (!feasible_at_power(set, net, p, params())) continue;
    for (double k : {1.0, 1.5, 10.0, 1e4}) EXPECT_TRUE(feasible_at_power(set, net, k * p, params())) << k;
  }
}

TEST(Feasible, Theorem2VerticalsOnlyAtHighPower) {
  const auto t = gen_theorem2(2, 100.0);
  std::vector<Link> v;
  for (auto [a, b] : t.vertical_links) v.push_back({a, b});
  const auto& net = t.scenario.network;
  EXPECT_TRUE(feasible_at_power(v, net, power_for_range(1000.0, params()), params()));
  EXPECT_FALSE(feasible_at_power(v, net, power_for_range(75.0, params()), params()));
}

TEST(CsSchedule, SingleReadyLinkTransmits) {
  const Network net({{0, 0}, {100, 0}}, Area::square(100));
  const Channel ch(net, power_for_range(250.0, params()), params());
  const std::vector<Link> links{{0, 1}};
  std::vector<LinkState> st(1, LinkState{1, 0, 16});
  const std::vector<LinkId> ready{0};
  std::mt19937_64 rng(1);
  const auto out = cs_schedule_slot(links, st, ready, ch, BackoffConfig{}, rng);
  EXPECT_EQ(out.attempted, ready);
  EXPECT_EQ(out.succeeded, ready);
  EXPECT_TRUE(out.collided.empty());
}

TEST(CsSchedule, PendingBackoffCountsDownWhenIdle) {
  const Network net({{0, 0}, {100, 0}}, Area::square(100));
  const Channel ch(net, power_for_range(250.0, params()), params());
  const std::vector<Link> links{{0, 1}};
  std::vector<LinkState> st(1, LinkState{1, 2, 16});
  const std::vector<LinkId> ready{0};
  std::mt19937_64 rng(1);
  for (std::size_t expect : {1u, 0u}) {
    const auto out = cs_schedule_slot(links, st, ready, ch, BackoffConfig{}, rng);
    EXPECT_TRUE(out.attempted.empty());
    EXPECT_EQ(out.deferred, ready);
    EXPECT_EQ(st[0].backoff, expect);
  }
  EXPECT_EQ(cs_schedule_slot(links, st, ready, ch, BackoffConfig{}, rng).succeeded, ready);
}

// Link A->B and C->D on a line; r = 250 gives r_s = 444.6 m.
struct TwoLinks {
  Network net;
  std::vector<Link> links{{0, 1}, {2, 3}};
};

TEST(CsSchedule, ExposedTerminal) {
  // B . A ... C . D : C is 500 m from B (beyond r_I = 355.7 m for 200 m
  // links) but 300 m from A (inside r_s).
  const TwoLinks t{Network({{200, 0}, {0, 0}, {500, 0}, {700, 0}}, Area::box({0, -1}, {700, 1}))};
  const Power p = power_for_range(250.0, params());
  const Channel ch(t.net, p, params());
  ASSERT_TRUE(feasible_at_power(t.links, ch));  // no true conflict
  std::mt19937_64 rng(3);
  for (int slot = 0; slot < 50; ++slot) {
    std::vector<LinkState> st(2, LinkState{1, 0, 16});
    const std::vector<LinkId> ready{0, 1};
    const auto out = cs_schedule_slot(t.links, st, ready, ch, BackoffConfig{}, rng);
    EXPECT_EQ(out.attempted.size(), 1u);
    EXPECT_EQ(out.succeeded.size(), 1u);
    EXPECT_EQ(out.deferred.size(), 1u);
  }
}

TEST(CsSchedule, HiddenTerminal) {
  // A . B .. C . D : C is 500 m from A (beyond r_s) but 300 m from B.
  const TwoLinks t{Network({{0, 0}, {200, 0}, {500, 0}, {700, 0}}, Area::box({0, -1}, {700, 1}))};
  const Channel ch(t.net, power_for_range(250.0, params()), params());
  std::mt19937_64 rng(3);
  std::vector<LinkState> st(2, LinkState{1, 0, 16});
  const std::vector<LinkId> ready{0, 1};
  const auto out = cs_schedule_slot(t.links, st, ready, ch, BackoffConfig{}, rng);
  EXPECT_EQ(out.attempted.size(), 2u);
  EXPECT_EQ(out.collided, std::vector<LinkId>{0});
  EXPECT_EQ(out.succeeded, std::vector<LinkId>{1});
  EXPECT_EQ(st[0].cw, 32u);
  EXPECT_LT(st[0].backoff, 32u);
  EXPECT_EQ(st[1].cw, 16u);
  EXPECT_EQ(st[1].backoff, 0u);
}

TEST(CsSchedule, InvariantsOverRandomRuns) {
  std::mt19937_64 rng(9);
  const BackoffConfig bo;
  for (int trial = 0; trial < 20; ++trial) {
    const Network net = gen_uniform(40, 1500.0, rng());
    const double r = 250.0 + 100.0 * (trial % 5);
    auto links = graph_links(net, r);
    if (links.size() < 4) continue;
    const Channel ch(net, power_for_range(r, params()), params());
    std::vector<LinkState> st(links.size(), LinkState{1, 0, bo.cw_min});
    std::vector<LinkId> ready(links.size());
    std::iota(ready.begin(), ready.end(), 0);
    for (int slot = 0; slot < 100; ++slot) {
      const auto before = st;
      const auto out = cs_schedule_slot(links, st, ready, ch, bo, rng);
      std::set<LinkId> ok(out.succeeded.begin(), out.succeeded.end());
      std::set<LinkId> bad(out.collided.begin(), out.collided.end());
      std::set<LinkId> att(out.attempted.begin(), out.attempted.end());
      std::set<LinkId> both = ok;
      both.insert(bad.begin(), bad.end());
      EXPECT_EQ(both, att);
      EXPECT_EQ(ok.size() + bad.size(), att.size());
      EXPECT_EQ(att.size() + out.deferred.size(), ready.size());
      std::vector<Link> sent, delivered;
      for (LinkId id : out.attempted) {
        EXPECT_EQ(before[id].backoff, 0u);  // nonzero backoff never transmits
        sent.push_back(links[id]);
      }
      for (LinkId id : out.succeeded) delivered.push_back(links[id]);
      EXPECT_TRUE(half_duplex_ok(sent));
      EXPECT_TRUE(feasible_at_power(delivered, ch));
      for (const auto& s : st) {
        EXPECT_GE(s.cw, bo.cw_min);
        EXPECT_LE(s.cw, bo.cw_max);
        EXPECT_EQ(s.cw & (s.cw - 1), 0u);  // cw_min * 2^k with cw_min = 16
        EXPECT_LT(s.backoff, s.cw);
      }
    }
  }
}

TEST(CenSchedule, EmptyReadySet) {
  const Network net({{0, 0}, {100, 0}}, Area::square(100));
  const Channel ch(net, power_for_range(250.0, params()), params());
  const std::vector<Link> links{{0, 1}};
  const auto out = cen_schedule_slot(links, {}, std::vector<std::size_t>{0}, ch);
  EXPECT_TRUE(out.attempted.empty());
  EXPECT_TRUE(out.deferred.empty());
}

TEST(CenSchedule, SharedRelayOneLinkPerSlot) {
  const Scenario sc = gen_shared_relay(100.0);
  const Channel ch(sc.network, power_for_range(120.0, params()), params());
  const std::vector<Link> links{{0, 2}, {1, 2}, {2, 3}};
  const std::vector<LinkId> ready{0, 1, 2};
  const std::vector<std::size_t> backlog{5, 7, 3};
  const auto out = cen_schedule_slot(links, ready, backlog, ch);
  EXPECT_EQ(out.succeeded, std::vector<LinkId>{1});  // largest backlog first
  EXPECT_EQ(out.deferred.size(), 2u);
}

TEST(CenSchedule, Theorem2AllVerticalsAtHighPower) {
  const auto t = gen_theorem2(2, 100.0);
  const Channel ch(t.scenario.network, power_for_range(1000.0, params()), params());
  std::vector<Link> links;
  for (auto [a, b] : t.vertical_links) links.push_back({a, b});
  std::vector<LinkId> ready(links.size());
  std::iota(ready.begin(), ready.end(), 0);
  const auto out = cen_schedule_slot(links, ready, std::vector<std::size_t>(links.size(), 1), ch);
  EXPECT_EQ(out.succeeded.size(), 5u);
}

TEST(CenSchedule, FeasibleMaximalAndOrdered) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 40; ++trial) {
    const Network net = gen_uniform(40, 1500.0, rng());
    const double r = 250.0 + 100.0 * (trial % 5);
    const auto links = graph_links(net, r);
    if (links.empty()) continue;
    const Channel ch(net, power_for_range(r, params()), params());
    std::vector<LinkId> ready;
    std::vector<std::size_t> backlog(links.size(), 0);
    for (LinkId id = 0; id < links.size(); ++id)
      if (rng() % 2) {
        ready.push_back(id);
        backlog[id] = 1 + rng() % 5;
      }
    const auto out = cen_schedule_slot(links, ready, backlog, ch);
    EXPECT_TRUE(out.collided.empty());
    EXPECT_EQ(out.attempted, out.succeeded);
    std::vector<Link> set;
    for (LinkId id : out.succeeded) set.push_back(links[id]);
    EXPECT_TRUE(oracle_feasible(net, set, ch.tx_power().value(), params()));
    for (LinkId id : out.deferred) {
      auto grown = set;
      grown.push_back(links[id]);
      EXPECT_FALSE(oracle_feasible(net, grown, ch.tx_power().value(), params())) << "not maximal";
    }
    for (std::size_t i = 1; i < out.succeeded.size(); ++i) {
      const LinkId a = out.succeeded[i - 1], b = out.succeeded[i];
      EXPECT_TRUE(backlog[a] > backlog[b] || (backlog[a] == backlog[b] && a < b));
    }
  }
}

TEST(MaximalSets, SharedRelayHasThreeSingletons) {
  const Scenario sc = gen_shared_relay(100.0);
  const Channel ch(sc.network, power_for_range(120.0, params()), params());
  const std::vector<Link> links{{0, 2}, {1, 2}, {2, 3}};
  const auto sets = maximal_feasible_sets(links, ch);
  EXPECT_EQ(sets.size(), 3u);
  for (const auto& s : sets) EXPECT_EQ(s.size(), 1u);
}

TEST(MaximalSets, MatchBruteForceSubsets) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const Network net = gen_uniform(8, 800.0, rng());
    auto links = graph_links(net, 350.0);
    if (links.size() > 14) links.resize(14);
    const Power p = power_for_range(350.0, params());
    const Channel ch(net, p, params());
    std::set<std::vector<LinkId>> oracle;
    const std::size_t L = links.size();
    std::vector<char> feas(std::size_t{1} << L, 0);
    for (std::size_t mask = 0; mask < feas.size(); ++mask) {
      std::vector<Link> s;
      for (std::size_t i = 0; i < L; ++i)
        if (mask >> i & 1) s.push_back(links[i]);
      feas[mask] = oracle_feasible(net, s, p.value(), params());
    }
    for (std::size_t mask = 1; mask < feas.size(); ++mask) {
      if (!feas[mask]) continue;
      bool maximal = true;
      for (std::size_t i = 0; i < L && maximal; ++i)
        if (!(mask >> i & 1) && feas[mask | (std::size_t{1} << i)]) maximal = false;
      if (!maximal) continue;
      std::vector<LinkId> ids;
      for (std::size_t i = 0; i < L; ++i)
        if (mask >> i & 1) ids.push_back(i);
      oracle.insert(ids);
    }
    const auto sets = maximal_feasible_sets(links, ch);
    EXPECT_EQ(std::set<std::vector<LinkId>>(sets.begin(), sets.end()), oracle);
  }
}

TEST(Simplex, TextbookOptimum) {
  // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18: optimum 36 at (2, 6)
  const lp::Problem p{2, {{1, 0}, {0, 2}, {3, 2}}, {4, 12, 18}, {3, 5}};
  const auto sol = lp::maximize(p);
  EXPECT_NEAR(sol.objective, 36.0, 1e-9);
  EXPECT_NEAR(sol.x[0], 2.0, 1e-9);
  EXPECT_NEAR(sol.x[1], 6.0, 1e-9);
}

TEST(Simplex, BealeCyclingExampleTerminates) {
  // cycles under the plain most-negative rule; optimum 1.25 at x4 = 1, x6 = 1
  const lp::Problem p{4,
                      {{0.25, -8, -1, 9}, {0.5, -12, -0.5, 3}, {0, 0, 1, 0}},
                      {0, 0, 1},
                      {0.75, -20, 0.5, -6}};
  const auto sol = lp::maximize(p);
  EXPECT_NEAR(sol.objective, 1.25, 1e-9);
  EXPECT_NEAR(sol.x[0], 1.0, 1e-9);
  EXPECT_NEAR(sol.x[2], 1.0, 1e-9);
}

TEST(Simplex, UnboundedAndBadInput) {
  EXPECT_THROW(lp::maximize({2, {{1, -1}}, {1}, {1, 1}}), lp::Unbounded);
  EXPECT_THROW(lp::maximize({1, {{1}}, {-1}, {1}}), std::invalid_argument);
  EXPECT_THROW(lp::maximize({2, {{1}}, {1}, {1, 1}}), std::invalid_argument);
}

// Best objective over all vertices: every choice of n tight constraints among
// the rows and the bounds x >= 0, solved by Gaussian elimination.
double vertex_optimum(const lp::Problem& p) {
  const std::size_t n = p.vars;
  std::vector<std::vector<double>> rows = p.a;
  std::vector<double> rhs = p.b;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> e(n, 0.0);
    e[j] = -1.0;
    rows.push_back(e);
    rhs.push_back(0.0);
  }
  double best = -1e300;
  const std::size_t k = rows.size();
  std::vector<std::size_t> pick(n);
  std::function<void(std::size_t, std::size_t)> choose = [&](std::size_t from, std::size_t depth) {
    if (depth == n) {
      std::vector<std::vector<double>> a(n, std::vector<double>(n + 1));
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) a[r][c] = rows[pick[r]][c];
        a[r][n] = rhs[pick[r]];
      }
      for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c; r < n; ++r)
          if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        if (std::abs(a[piv][c]) < 1e-12) return;
        std::swap(a[c], a[piv]);
        for (std::size_t r = 0; r < n; ++r) {
          if (r == c) continue;
          const double f = a[r][c] / a[c][c];
          for (std::size_t q = c; q <= n; ++q) a[r][q] -= f * a[c][q];
        }
      }
      std::vector<double> x(n);
      for (std::size_t c = 0; c < n; ++c) x[c] = a[c][n] / a[c][c];
      for (std::size_t r = 0; r < k; ++r) {
        double lhs = 0.0;
        for (std::size_t c = 0; c < n; ++c) lhs += rows[r][c] * x[c];
        if (lhs > rhs[r] + 1e-9) return;
      }
      double obj = 0.0;
      for (std::size_t c = 0; c < n; ++c) obj += p.c[c] * x[c];
      best = std::max(best, obj);
      return;
    }
    for (std::size_t i = from; i < k; ++i) {
      pick[depth] = i;
      choose(i + 1, depth + 1);
    }
  };
  choose(0, 0);
  return best;
}

TEST(Simplex, RandomProgramsMatchVertexEnumeration) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 3, m = 1 + trial % 5;
    lp::Problem p{n, {}, {}, {}};
    for (std::size_t i = 0; i < m; ++i) {
      std::vector<double> row(n);
      for (double& v : row) v = u(rng) < 0.3 ? 0.0 : u(rng) * 2.0 - 0.2;
      p.a.push_back(row);
      p.b.push_back(u(rng) < 0.4 ? 0.0 : u(rng));
    }
    // a bounding row keeps every program bounded
    p.a.push_back(std::vector<double>(n, 1.0));
    p.b.push_back(1.0);
    for (std::size_t j = 0; j < n; ++j) p.c.push_back(u(rng) * 2.0 - 0.5);
    const auto fast = lp::maximize(p);
    EXPECT_NEAR(fast.objective, vertex_optimum(p), 1e-9);
    double obj = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      EXPECT_GE(fast.x[j], -1e-12);
      obj += p.c[j] * fast.x[j];
    }
    EXPECT_NEAR(obj, fast.objective, 1e-9);
    for (std::size_t i = 0; i < p.a.size(); ++i) {
      double lhs = 0.0;
      for (std::size_t j = 0; j < n; ++j) lhs += p.a[i][j] * fast.x[j];
      EXPECT_LE(lhs, p.b[i] + 1e-9);
    }
  }
}

TEST(OptimalCapacity, SingleLinkIsW) {
  const Network net({{0, 0}, {100, 0}}, Area::square(100));
  const auto res = optimal_capacity(net, {{0, 1, 1.0, 500}}, power_for_range(250.0, params()), params());
  EXPECT_NEAR(res.capacity, 1.0, 1e-9);
}

TEST(OptimalCapacity, SharedRelayIsTwoThirds) {
  const Scenario sc = gen_shared_relay(100.0);
  const auto res = optimal_capacity(sc.network, sc.flows, power_for_range(120.0, params()), params());
  EXPECT_NEAR(res.capacity, 2.0 / 3.0, 1e-9);
  EXPECT_EQ(res.maximal_sets, 3u);
}

TEST(OptimalCapacity, StarLowAndHighPower) {
  const auto s = gen_star(2, 200.0);
  const auto& sc = s.scenario;
  EXPECT_NEAR(optimal_capacity(sc.network, sc.flows, power_for_range(s.r_low, params()), params()).capacity, 0.5,
              1e-9);
  EXPECT_NEAR(optimal_capacity(sc.network, sc.flows, power_for_range(s.r_high, params()), params()).capacity, 1.0,
              1e-9);
}

TEST(OptimalCapacity, IndependentFlowsAddUp) {
  // Two one-hop flows 10 km apart never interfere: each runs every slot,
  // a * v_i <= 1 gives a = sqrt(2) and capacity a * (v_1 + v_2) = 2 W.
  const Network net({{0, 0}, {100, 0}, {10000, 0}, {10100, 0}}, Area::box({0, -1}, {10100, 1}));
  const auto res =
      optimal_capacity(net, {{0, 1, 1.0, 500}, {2, 3, 1.0, 500}}, power_for_range(250.0, params()), params());
  EXPECT_NEAR(res.scale, std::sqrt(2.0), 1e-9);
  EXPECT_NEAR(res.capacity, 2.0, 1e-9);
}

TEST(OptimalCapacity, TwoHopChainIsHalfW) {
  const Network net({{0, 0}, {200, 0}, {400, 0}}, Area::box({0, -1}, {400, 1}));
  const auto res = optimal_capacity(net, {{0, 2, 1.0, 500}}, power_for_range(250.0, params()), params());
  EXPECT_NEAR(res.capacity, 0.5, 1e-9);
}

TEST(OptimalCapacity, UnequalPatternWeights) {
  // Shared relay with pattern (3, 4)/5: every link is its own maximal set,
  // flow 1 needs 1 slot per unit and flow 2 needs 2, so a (0.6 + 2 * 0.8) = 1.
  const Scenario sc = gen_shared_relay(100.0);
  std::vector<FlowSpec> flows{{sc.flows[0].src, sc.flows[0].dst, 3.0}, {sc.flows[1].src, sc.flows[1].dst, 4.0}};
  const auto res = optimal_capacity(sc.network, flows, power_for_range(120.0, params()), params());
  const double a = 1.0 / (0.6 + 2 * 0.8);
  EXPECT_NEAR(res.scale, a, 1e-9);
  EXPECT_NEAR(res.capacity, a * 1.4, 1e-9);
}

TEST(OptimalCapacity, RefusesLargeInstances) {
  const Network net = gen_uniform(13, 500.0, 1);
  EXPECT_THROW(optimal_capacity(net, {{0, 1, 1.0, 500}}, power_for_range(250.0, params()), params()),
               InstanceTooLarge);
}

}  // namespace
}  // namespace pwrcap
