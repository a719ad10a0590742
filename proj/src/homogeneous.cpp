#include "netauction/homogeneous.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

#include "netauction/network.hpp"

namespace netauction {

UnitAllocation optimal_multiunit_allocation(std::span<const UnitOffer> offers, std::int64_t demand) {
  std::vector<const UnitOffer*> sorted;
  sorted.reserve(offers.size());
  for (const auto& o : offers)
    if (o.units > 0) sorted.push_back(&o);
  std::sort(sorted.begin(), sorted.end(), [](const UnitOffer* a, const UnitOffer* b) {
    if (a->unit_cost != b->unit_cost) return a->unit_cost < b->unit_cost;
    return a->id < b->id;
  });

  UnitAllocation result;
  std::int64_t left = demand;
  for (const UnitOffer* o : sorted) {
    if (left <= 0) break;
    std::int64_t take = std::min(left, o->units);
    result.units[o->id] = take;
    result.cost += Money(take) * o->unit_cost;
    left -= take;
  }
  if (left > 0) throw std::invalid_argument("offers cannot cover the demand");
  return result;
}

namespace {

std::vector<UnitOffer> offers_without(const std::vector<UnitOffer>& offers, const std::set<AgentId>& removed) {
  std::vector<UnitOffer> out;
  out.reserve(offers.size());
  for (const auto& o : offers)
    if (!removed.count(o.id)) out.push_back(o);
  return out;
}

Outcome empty_outcome(const std::vector<AgentId>& participants) {
  Outcome out;
  for (AgentId id : participants) {
    out.allocation[id] = 0;
    out.payments[id] = Money{};
  }
  return out;
}

UnitOffer offer_of(const HomogeneousInstance& instance, AgentId id) {
  const auto& s = instance.agent(id);
  return UnitOffer{id, s.ability, s.unit_cost};
}

// Clarke pivots over `participants` plus the virtual supplier. `removal(i)`
// gives the set taken out of the market when computing i's pivot.
template <class Removal>
Outcome vcg(const HomogeneousInstance& instance, const std::vector<AgentId>& participants, Removal removal) {
  const auto& req = instance.requester;
  Outcome out = empty_outcome(participants);
  std::vector<UnitOffer> offers;
  for (AgentId id : participants) offers.push_back(offer_of(instance, id));
  offers.push_back(UnitOffer{kVirtualSupplier, req.demand, req.reserve_unit});

  UnitAllocation opt = optimal_multiunit_allocation(offers, req.demand);
  for (AgentId id : participants) {
    std::int64_t pi = opt.of(id);
    std::set<AgentId> removed = removal(id);
    if (pi == 0 && removed.size() == 1) continue;  // removing a loser alone changes nothing
    UnitAllocation without = optimal_multiunit_allocation(offers_without(offers, removed), req.demand);
    out.allocation[id] = pi;
    out.payments[id] = without.cost - (opt.cost - Money(pi) * instance.agent(id).unit_cost);
  }
  out.self_supplied_units = opt.of(kVirtualSupplier);
  return out;
}

}  // namespace

RanHmTrace ran_hm_traced(const HomogeneousInstance& instance) {
  const auto& req = instance.requester;
  ReachableMarket market = reachable_market(instance);
  MarketDivision division = market_division(market);

  RanHmTrace trace;
  trace.outcome = empty_outcome(market.members());
  Outcome& out = trace.outcome;
  std::int64_t tau = req.demand;

  for (std::size_t k = 0; k < division.layers.size() && tau > 0; ++k) {
    LayerAuctionState state;
    state.layer = static_cast<int>(k + 1);
    state.remaining_demand = tau;
    std::int64_t supply = 0;
    for (AgentId id : division.layers[k]) {
      const auto& s = instance.agent(id);
      if (s.unit_cost <= req.reserve_unit) {
        state.layer_eligible.push_back(id);
        supply += s.ability;
      }
    }

    if (tau >= supply) {
      for (AgentId id : state.layer_eligible) {
        std::int64_t a = instance.agent(id).ability;
        out.allocation[id] = a;
        out.payments[id] = Money(a) * req.reserve_unit;
      }
      tau -= supply;
      trace.layers.push_back(std::move(state));
      continue;
    }

    state.includes_virtual = true;
    std::vector<UnitOffer> offers;
    for (AgentId id : state.layer_eligible) offers.push_back(offer_of(instance, id));
    offers.push_back(UnitOffer{kVirtualSupplier, tau, req.reserve_unit});
    UnitAllocation opt = optimal_multiunit_allocation(offers, tau);
    state.allocation_cost = opt.cost;
    for (AgentId id : state.layer_eligible) {
      std::int64_t pi = opt.of(id);
      if (pi == 0) continue;
      UnitAllocation without = optimal_multiunit_allocation(offers_without(offers, {id}), tau);
      out.allocation[id] = pi;
      out.payments[id] = without.cost - (opt.cost - Money(pi) * instance.agent(id).unit_cost);
    }
    tau = opt.of(kVirtualSupplier);
    trace.layers.push_back(std::move(state));
    break;
  }
  out.self_supplied_units = tau;
  return trace;
}

Outcome ran_hm(const HomogeneousInstance& instance) { return ran_hm_traced(instance).outcome; }

Outcome d_vcg(const HomogeneousInstance& instance) {
  ReachableMarket market = reachable_market(instance);
  auto kids = all_children(instance);
  return vcg(instance, market.members(), [&](AgentId id) {
    std::set<AgentId> removed = kids[id];
    removed.insert(id);
    return removed;
  });
}

Outcome nd_vcg(const HomogeneousInstance& instance) {
  ReachableMarket market = reachable_market(instance);
  std::vector<AgentId> first;
  for (const auto& [id, d] : market.distance)
    if (d == 1) first.push_back(id);
  return vcg(instance, first, [](AgentId id) { return std::set<AgentId>{id}; });
}

Outcome non_monotone_auction(const HomogeneousInstance& instance) {
  const auto& req = instance.requester;
  ReachableMarket market = reachable_market(instance);
  auto kids = all_children(instance);

  std::vector<AgentId> order = market.members();
  std::stable_sort(order.begin(), order.end(),
                   [&](AgentId a, AgentId b) { return market.distance.at(a) < market.distance.at(b); });

  std::vector<UnitOffer> offers;
  for (AgentId id : order) offers.push_back(offer_of(instance, id));
  offers.push_back(UnitOffer{kVirtualSupplier, req.demand, req.reserve_unit});

  Outcome out = empty_outcome(order);
  std::int64_t tau = req.demand;
  for (AgentId id : order) {
    if (tau <= 0) break;
    std::set<AgentId> removed(kids[id].begin(), kids[id].end());
    // Both optima are taken over the full original demand; the running
    // remainder only caps how many units the agent can still be given.
    UnitAllocation without_children = optimal_multiunit_allocation(offers_without(offers, removed), req.demand);
    removed.insert(id);
    UnitAllocation without_self = optimal_multiunit_allocation(offers_without(offers, removed), req.demand);
    std::int64_t pi = std::min(without_children.of(id), tau);
    tau -= pi;
    out.allocation[id] = pi;
    out.payments[id] = without_self.cost - (without_children.cost - Money(pi) * instance.agent(id).unit_cost);
  }
  out.self_supplied_units = tau;
  return out;
}

}  // namespace netauction
