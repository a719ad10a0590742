#include "netauction/forward.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "netauction/network.hpp"

namespace netauction {

namespace {

Outcome empty_outcome(const std::vector<AgentId>& participants) {
  Outcome out;
  for (AgentId id : participants) {
    out.allocation[id] = 0;
    out.payments[id] = Money{};
  }
  return out;
}

// Highest bid among members outside `removed`; 0 when nobody is left.
Money highest_bid(const ForwardInstance& instance, const std::vector<AgentId>& members,
                  const std::set<AgentId>& removed) {
  Money best;
  for (AgentId id : members)
    if (!removed.count(id)) best = std::max(best, instance.agent(id).valuation);
  return best;
}

}  // namespace

std::vector<AgentId> priority_order(const ForwardInstance& instance) {
  ReachableMarket market = reachable_market(instance);
  std::vector<AgentId> order = market.members();
  std::stable_sort(order.begin(), order.end(),
                   [&](AgentId a, AgentId b) { return market.distance.at(a) < market.distance.at(b); });
  return order;
}

DnaMuTrace dna_mu_traced(const ForwardInstance& instance) {
  DnaMuTrace trace;
  trace.order = priority_order(instance);
  trace.outcome = empty_outcome(trace.order);
  auto kids = all_children(instance);

  std::set<AgentId> winners;
  std::int64_t left = instance.requester.units;
  for (AgentId i : trace.order) {
    if (left <= 0) {
      trace.prices[i] = std::nullopt;
      continue;
    }
    std::vector<Money> values;
    for (AgentId j : trace.order) {
      if (j == i || kids[i].count(j) || winners.count(j)) continue;
      values.push_back(instance.agent(j).valuation);
    }
    Money price;
    if (static_cast<std::int64_t>(values.size()) >= left) {
      std::nth_element(values.begin(), values.begin() + (left - 1), values.end(), std::greater<>());
      price = values[static_cast<std::size_t>(left - 1)];
    }
    trace.prices[i] = price;
    if (instance.agent(i).valuation > price) {
      winners.insert(i);
      trace.outcome.allocation[i] = 1;
      trace.outcome.payments[i] = -price;
      --left;
    }
  }
  return trace;
}

Outcome dna_mu(const ForwardInstance& instance) { return dna_mu_traced(instance).outcome; }

std::vector<AgentId> critical_diffusion_sequence(const ForwardInstance& instance) {
  ReachableMarket market = reachable_market(instance);
  if (market.distance.empty()) return {};
  AgentId top = market.members().front();
  for (AgentId id : market.members())
    if (instance.agent(id).valuation > instance.agent(top).valuation) top = id;

  auto kids = all_children(instance);
  std::vector<AgentId> seq;
  for (const auto& [id, dominated] : kids)
    if (dominated.count(top)) seq.push_back(id);
  std::sort(seq.begin(), seq.end(),
            [&](AgentId a, AgentId b) { return market.distance.at(a) < market.distance.at(b); });
  seq.push_back(top);
  return seq;
}

Outcome idm(const ForwardInstance& instance) {
  ReachableMarket market = reachable_market(instance);
  std::vector<AgentId> members = market.members();
  Outcome out = empty_outcome(members);
  std::vector<AgentId> seq = critical_diffusion_sequence(instance);
  if (seq.empty()) return out;
  auto kids = all_children(instance);

  auto without = [&](AgentId id) {
    std::set<AgentId> removed(kids[id].begin(), kids[id].end());
    removed.insert(id);
    return removed;
  };

  for (std::size_t t = 0; t < seq.size(); ++t) {
    AgentId i = seq[t];
    Money b_minus_i = highest_bid(instance, members, without(i));
    bool last = t + 1 == seq.size();
    std::set<AgentId> next_removed = last ? std::set<AgentId>{} : without(seq[t + 1]);
    if (last || instance.agent(i).valuation == highest_bid(instance, members, next_removed)) {
      out.allocation[i] = 1;
      out.payments[i] = -b_minus_i;
      break;
    }
    // Reward for passing the item on: how much the next agent's presence
    // raises the competing bid.
    out.payments[i] = highest_bid(instance, members, next_removed) - b_minus_i;
  }
  return out;
}

}  // namespace netauction
