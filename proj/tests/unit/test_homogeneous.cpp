#include <algorithm>
#include <functional>
#include <optional>
#include <stdexcept>

#include "doctest.h"
#include "netauction/corpus.hpp"
#include "netauction/homogeneous.hpp"
#include "netauction/instance_io.hpp"
#include "netauction/network.hpp"

using namespace netauction;

namespace {

const AgentId J1{1}, J2{2}, J3{3};

// Walks every vector of unit counts. Among the cheapest vectors keeps the one
// that gives the most units to the cheapest (then lowest id) offer.
UnitAllocation brute_force(std::vector<UnitOffer> offers, std::int64_t demand) {
  std::sort(offers.begin(), offers.end(), [](const UnitOffer& a, const UnitOffer& b) {
    return a.unit_cost != b.unit_cost ? a.unit_cost < b.unit_cost : a.id < b.id;
  });
  std::vector<std::int64_t> cur(offers.size()), best;
  std::optional<Money> best_cost;
  std::function<void(std::size_t, std::int64_t, Money)> go = [&](std::size_t k, std::int64_t left, Money cost) {
    if (k == offers.size()) {
      if (left != 0) return;
      if (!best_cost || cost < *best_cost || (cost == *best_cost && cur > best)) {
        best_cost = cost;
        best = cur;
      }
      return;
    }
    for (std::int64_t u = 0; u <= std::min(left, offers[k].units); ++u) {
      cur[k] = u;
      go(k + 1, left - u, cost + Money(u) * offers[k].unit_cost);
    }
    cur[k] = 0;
  };
  go(0, demand, Money(0));
  if (!best_cost) throw std::invalid_argument("infeasible");
  UnitAllocation a;
  a.cost = *best_cost;
  for (std::size_t k = 0; k < offers.size(); ++k)
    if (best[k] > 0) a.units[offers[k].id] = best[k];
  return a;
}

// Layer-by-layer procurement written directly from the mechanism's rules,
// with every in-layer optimum found by enumeration.
Outcome reference_ran_hm(const HomogeneousInstance& m) {
  Outcome o;
  const Money vbar = m.requester.reserve_unit;
  auto div = market_division(reachable_market(m));
  for (const auto& layer : div.layers)
    for (AgentId j : layer) {
      o.allocation[j] = 0;
      o.payments[j] = Money(0);
    }
  std::int64_t tau = m.requester.demand;
  for (const auto& layer : div.layers) {
    if (tau <= 0) break;
    std::vector<UnitOffer> eligible;
    std::int64_t supply = 0;
    for (AgentId j : layer) {
      const auto& s = m.agent(j);
      if (s.unit_cost <= vbar && s.ability > 0) {
        eligible.push_back({j, s.ability, s.unit_cost});
        supply += s.ability;
      }
    }
    if (tau >= supply) {
      for (const auto& e : eligible) {
        o.allocation[e.id] = e.units;
        o.payments[e.id] = Money(e.units) * vbar;
      }
      tau -= supply;
      continue;
    }
    auto with_phi = eligible;
    with_phi.push_back({kVirtualSupplier, tau, vbar});
    const UnitAllocation opt = brute_force(with_phi, tau);
    for (const auto& e : eligible) {
      std::vector<UnitOffer> without;
      for (const auto& f : with_phi)
        if (f.id != e.id) without.push_back(f);
      const std::int64_t pi = opt.of(e.id);
      o.allocation[e.id] = pi;
      o.payments[e.id] = brute_force(without, tau).cost - (opt.cost - Money(pi) * e.unit_cost);
    }
    tau = 0;
  }
  o.self_supplied_units = tau;
  return o;
}

HomogeneousInstance single_layer(std::int64_t demand, std::vector<std::tuple<std::int64_t, Money>> suppliers,
                                 Money vbar = Money(10)) {
  HomogeneousInstance m;
  m.requester.demand = demand;
  m.requester.reserve_unit = vbar;
  std::uint32_t id = 1;
  for (auto [a, c] : suppliers) {
    m.agents[AgentId{id}] = {a, c, {}};
    m.requester.neighbors.insert(AgentId{id});
    ++id;
  }
  return m;
}

HomogeneousInstance load_hm(const std::string& name) {
  return std::get<HomogeneousInstance>(load_instance(std::string(NETAUCTION_FIXTURES) + "/" + name));
}

}  // namespace

TEST_CASE("optimal multi-unit allocation") {
  std::vector<UnitOffer> offers{{J1, 2, Money(4)}, {J2, 2, Money(6)}, {J3, 2, Money(9)}, {kVirtualSupplier, 3, Money(10)}};
  auto a = optimal_multiunit_allocation(offers, 3);
  CHECK(a.units == std::map<AgentId, std::int64_t>{{J1, 2}, {J2, 1}});
  CHECK(a.cost == Money(14));
  CHECK(optimal_multiunit_allocation(offers, 0).units.empty());
  CHECK_THROWS_AS(optimal_multiunit_allocation(offers, 10), std::invalid_argument);

  SUBCASE("ties go to the lower id and the virtual supplier last") {
    std::vector<UnitOffer> tied{{J2, 1, Money(5)}, {kVirtualSupplier, 2, Money(5)}, {J1, 1, Money(5)}};
    auto t = optimal_multiunit_allocation(tied, 1);
    CHECK(t.units == std::map<AgentId, std::int64_t>{{J1, 1}});
    t = optimal_multiunit_allocation(tied, 3);
    CHECK(t.of(kVirtualSupplier) == 1);
  }
}

TEST_CASE("optimal allocation matches exhaustive enumeration") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::int64_t> units(0, 4), cost(0, 12), count(1, 6);
  for (int trial = 0; trial < 400; ++trial) {
    std::vector<UnitOffer> offers;
    const auto n = count(rng);
    std::int64_t total = 0;
    for (std::uint32_t i = 1; i <= n; ++i) {
      offers.push_back({AgentId{i}, units(rng), Money(cost(rng), 2)});
      total += offers.back().units;
    }
    std::uniform_int_distribution<std::int64_t> d(0, total);
    const auto demand = d(rng);
    auto fast = optimal_multiunit_allocation(offers, demand);
    auto slow = brute_force(offers, demand);
    CHECK(fast.cost == slow.cost);
    CHECK(fast.units == slow.units);
  }
}

TEST_CASE("single layer oversupply pays Clarke pivots") {
  auto m = single_layer(3, {{2, Money(4)}, {2, Money(6)}, {2, Money(9)}});
  auto o = ran_hm(m);
  CHECK(o.units(J1) == 2);
  CHECK(o.units(J2) == 1);
  CHECK(o.units(J3) == 0);
  CHECK(o.payment(J1) == Money(15));
  CHECK(o.payment(J2) == Money(9));
  CHECK(o.payment(J3) == Money(0));
  CHECK(o.self_supplied_units == 0);
  // one layer: the diffusion variants coincide with plain VCG
  auto d = d_vcg(m);
  CHECK(d.allocation == o.allocation);
  CHECK(d.payments == o.payments);
  CHECK(nd_vcg(m).payments == o.payments);
}

TEST_CASE("an undersupplied layer is paid the reserve and the next layer continues") {
  HomogeneousInstance m;
  m.requester = {5, Money(10), {J1}};
  m.agents[J1] = {2, Money(3), {J2}};
  m.agents[J2] = {4, Money(1), {}};
  auto t = ran_hm_traced(m);
  CHECK(t.outcome.units(J1) == 2);
  CHECK(t.outcome.payment(J1) == Money(20));
  REQUIRE(t.layers.size() == 2);
  CHECK(t.layers[0].remaining_demand == 5);
  CHECK(t.layers[1].remaining_demand == 3);
  // second layer: 4 units at 1 against phi(3 @ 10); J2 sells 3, pivot 30 - (3 - 3)
  CHECK(t.outcome.units(J2) == 3);
  CHECK(t.outcome.payment(J2) == Money(30));
  CHECK(t.outcome.self_supplied_units == 0);
}

TEST_CASE("suppliers above the reserve never win") {
  auto m = single_layer(4, {{3, Money(11)}, {5, Money(12)}});
  auto o = ran_hm(m);
  CHECK(o.winners().empty());
  CHECK(o.self_supplied_units == 4);
  CHECK(requester_cost(o, m) == budget(m));
}

TEST_CASE("zero demand gives an empty outcome") {
  auto m = single_layer(0, {{3, Money(1)}});
  for (auto mech : {ran_hm, d_vcg, nd_vcg, non_monotone_auction}) {
    auto o = mech(m);
    CHECK(o.winners().empty());
    CHECK(o.total_payments() == Money(0));
    CHECK(o.self_supplied_units == 0);
  }
}

TEST_CASE("removing an intermediary in D-VCG runs a deficit on a chain") {
  HomogeneousInstance m;
  m.requester = {1, Money(10), {J1}};
  m.agents[J1] = {1, Money(9), {J2}};
  m.agents[J2] = {1, Money(1), {}};
  auto o = d_vcg(m);
  CHECK(o.units(J2) == 1);
  CHECK(o.payment(J2) == Money(9));
  CHECK(o.payment(J1) == Money(9));  // rewarded for bringing in J2
  CHECK(requester_surplus(o, m) == Money(-8));
  // RAN-HM buys from the first layer instead
  auto r = ran_hm(m);
  CHECK(r.units(J1) == 1);
  CHECK(r.payment(J1) == Money(10));
  CHECK(requester_surplus(r, m) == Money(0));
}

TEST_CASE("ND-VCG only sees the first layer") {
  HomogeneousInstance m;
  m.requester = {2, Money(10), {J1}};
  m.agents[J1] = {1, Money(5), {J2}};
  m.agents[J2] = {3, Money(1), {}};
  auto o = nd_vcg(m);
  CHECK_FALSE(o.participates(J2));
  CHECK(o.units(J1) == 1);
  CHECK(o.self_supplied_units == 1);
  auto none = single_layer(3, {});
  CHECK(nd_vcg(none).self_supplied_units == 3);
}

TEST_CASE("RAN-HM agrees with an enumeration-based reference") {
  auto corpus = homogeneous_corpus(400, 41);
  for (std::size_t k = 0; k < corpus.size(); ++k) {
    CAPTURE(k);
    const auto& m = corpus[k];
    auto fast = ran_hm(m);
    auto slow = reference_ran_hm(m);
    CHECK(fast.allocation == slow.allocation);
    CHECK(fast.payments == slow.payments);
    CHECK(fast.self_supplied_units == slow.self_supplied_units);
  }
}

TEST_CASE("homogeneous invariants over a random corpus") {
  auto corpus = homogeneous_corpus(500, 8);
  int nd_better = 0;
  for (std::size_t k = 0; k < corpus.size(); ++k) {
    CAPTURE(k);
    const auto& m = corpus[k];
    auto r = ran_hm(m);
    auto d = d_vcg(m);
    auto nd = nd_vcg(m);
    for (const auto* o : {&r, &d, &nd}) CHECK(is_feasible(*o, m));
    // individual rationality and budget balance of the layered mechanism
    for (const auto& [id, units] : r.allocation) {
      CHECK(utility_hm(r, id, m.agent(id)) >= Money(0));
      if (units == 0) CHECK(r.payment(id) == Money(0));
    }
    CHECK(requester_cost(r, m) <= budget(m));
    CHECK(requester_cost(nd, m) <= budget(m));
    // the whole-market optimum is a lower bound
    CHECK(social_cost(d, m) <= social_cost(r, m));
    CHECK(social_cost(d, m) <= social_cost(nd, m));
    if (social_cost(nd, m) < social_cost(r, m)) ++nd_better;
    // only reachable suppliers take part
    auto market = reachable_market(m);
    for (const auto& [id, units] : r.allocation) CHECK(market.contains(id));
  }
  MESSAGE("instances where ND-VCG beat RAN-HM on social cost: " << nd_better);
}

TEST_CASE("complete graphs make the three VCG-style mechanisms coincide") {
  CorpusOptions opts;
  opts.edge_prob = 1.0;
  opts.root_prob = 1.0;
  auto corpus = homogeneous_corpus(100, 5, opts);
  for (auto& m : corpus) {
    for (auto& [id, s] : m.agents)
      if (s.unit_cost > m.requester.reserve_unit) s.unit_cost = m.requester.reserve_unit;
    auto r = ran_hm(m);
    auto d = d_vcg(m);
    auto nd = nd_vcg(m);
    CHECK(r.allocation == d.allocation);
    CHECK(r.payments == d.payments);
    CHECK(nd.allocation == d.allocation);
    CHECK(nd.payments == d.payments);
  }
}

TEST_CASE("the distance-ordered mechanism on the counterexample fixture") {
  auto m = load_hm("example1.json");
  const AgentId a{1}, b{2}, c{3}, d{4};
  auto o = non_monotone_auction(m);
  CHECK(o.winners() == std::vector<AgentId>{a, b, c});
  CHECK(utility_hm(o, d, m.agent(d)) == Money(0));

  const SupplierHM truth = m.agent(d);
  for (Money report : {Money(0), Money(1, 2), Money(1), Money(7, 5), Money(149, 100)}) {
    CAPTURE(report);
    auto lie = m;
    lie.agent(d).unit_cost = report;
    auto dev = non_monotone_auction(lie);
    CHECK(dev.units(a) == 0);
    CHECK(dev.units(d) > 0);
    CHECK(utility_hm(dev, d, truth) > Money(0));
  }

  SUBCASE("without diffusion d cannot gain") {
    auto silent = m;
    silent.agent(d).neighbors.clear();
    for (std::int64_t tenths = 0; tenths <= 30; ++tenths) {
      silent.agent(d).unit_cost = Money(tenths, 10);
      auto dev = non_monotone_auction(silent);
      CHECK(dev.winners() == std::vector<AgentId>{a, b, c});
      CHECK(utility_hm(dev, d, truth) <= Money(0));
    }
  }
}
