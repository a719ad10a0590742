#include "netauction/heterogeneous.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>

#include "netauction/network.hpp"

namespace netauction {

Money marginal_valuation(const SupplierHT& supplier, const TaskSet& uncovered, const std::vector<Money>& reserve) {
  Money mv;
  for (TaskIndex t : supplier.bundle)
    if (uncovered.contains(t)) mv += reserve[t];
  return mv;
}

Money marginal_utility(const SupplierHT& supplier, const TaskSet& uncovered, const std::vector<Money>& reserve) {
  return marginal_valuation(supplier, uncovered, reserve) - supplier.total_cost;
}

namespace {

struct Pick {
  AgentId id;
  Money utility;
};

// Best remaining candidate with non-negative marginal utility, if any.
std::optional<Pick> best_candidate(const std::vector<AgentId>& pool, const std::vector<char>& taken,
                                   const TaskSet& uncovered, const HeterogeneousInstance& instance,
                                   const GreedyOptions& options) {
  const auto& reserve = instance.requester.reserve;
  std::optional<Pick> best;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (taken[i]) continue;
    const auto& s = instance.agent(pool[i]);
    Money mv = marginal_valuation(s, uncovered, reserve);
    if (options.skip_zero_marginal_valuation && mv.is_zero()) continue;
    Money v = mv - s.total_cost;
    if (v.is_negative()) continue;
    if (!best || v > best->utility) best = Pick{pool[i], v};  // pool is id-ascending
  }
  return best;
}

void cover(TaskSet& uncovered, const SupplierHT& s) {
  for (TaskIndex t : s.bundle) uncovered.erase(t);
}

std::vector<AgentId> sorted_ids(std::vector<AgentId> ids) {
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace

GreedySelection greedy_layer_selection(const std::vector<AgentId>& layer, const TaskSet& uncovered,
                                       const HeterogeneousInstance& instance, const GreedyOptions& options) {
  std::vector<AgentId> pool = sorted_ids(layer);
  std::vector<char> taken(pool.size(), 0);
  GreedySelection sel{{}, uncovered};
  while (!sel.uncovered.empty()) {
    auto pick = best_candidate(pool, taken, sel.uncovered, instance, options);
    if (!pick) break;
    taken[static_cast<std::size_t>(std::lower_bound(pool.begin(), pool.end(), pick->id) - pool.begin())] = 1;
    sel.winners.push_back(pick->id);
    cover(sel.uncovered, instance.agent(pick->id));
  }
  return sel;
}

Money ran_ht_payment(AgentId winner, const std::vector<AgentId>& layer, const TaskSet& uncovered_at_entry,
                     const HeterogeneousInstance& instance, const GreedyOptions& options) {
  if (std::find(layer.begin(), layer.end(), winner) == layer.end())
    throw std::invalid_argument("payment requested for an agent outside the layer");
  const auto& reserve = instance.requester.reserve;
  const auto& j = instance.agent(winner);

  std::vector<AgentId> pool;
  for (AgentId id : sorted_ids(layer))
    if (id != winner) pool.push_back(id);
  std::vector<char> taken(pool.size(), 0);

  TaskSet uncovered = uncovered_at_entry;
  Money x;
  while (!uncovered.empty()) {
    auto pick = best_candidate(pool, taken, uncovered, instance, options);
    if (!pick) break;
    // j beats this pick iff her marginal utility is at least its utility.
    x = std::max(x, marginal_valuation(j, uncovered, reserve) - pick->utility);
    taken[static_cast<std::size_t>(std::lower_bound(pool.begin(), pool.end(), pick->id) - pool.begin())] = 1;
    cover(uncovered, instance.agent(pick->id));
  }
  // Once the rerun stops, j still wins whenever her utility is non-negative.
  // This term is applied on every stop, not only when the layer is exhausted.
  return std::max(x, marginal_valuation(j, uncovered, reserve));
}

namespace {

Outcome run_layers(const HeterogeneousInstance& instance, const MarketDivision& division,
                   const std::vector<AgentId>& participants, const GreedyOptions& options) {
  Outcome out;
  for (AgentId id : participants) {
    out.allocation[id] = 0;
    out.payments[id] = Money{};
  }
  TaskSet uncovered(instance.requester.task_count(), true);
  for (const auto& layer : division.layers) {
    if (uncovered.empty()) break;
    GreedySelection sel = greedy_layer_selection(layer, uncovered, instance, options);
    for (AgentId w : sel.winners) {
      out.allocation[w] = 1;
      out.payments[w] = ran_ht_payment(w, layer, uncovered, instance, options);
    }
    uncovered = sel.uncovered;
  }
  out.self_supplied_tasks = uncovered;
  return out;
}

}  // namespace

Outcome ran_ht(const HeterogeneousInstance& instance, const GreedyOptions& options) {
  ReachableMarket market = reachable_market(instance);
  return run_layers(instance, market_division(market), market.members(), options);
}

Outcome local_greedy(const HeterogeneousInstance& instance, const GreedyOptions& options) {
  ReachableMarket market = reachable_market(instance);
  MarketDivision division = market_division(market);
  if (division.layers.size() > 1) division.layers.resize(1);
  std::vector<AgentId> participants = division.layers.empty() ? std::vector<AgentId>{} : division.layers.front();
  return run_layers(instance, division, participants, options);
}

}  // namespace netauction
