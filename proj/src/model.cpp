#include "netauction/model.hpp"

#include <algorithm>
#include <stdexcept>
#include <type_traits>

namespace netauction {

template <class R, class A>
const A& Market<R, A>::agent(AgentId id) const {
  auto it = agents.find(id);
  if (it == agents.end()) throw std::out_of_range("unknown agent " + std::to_string(id.value));
  return it->second;
}

template <class R, class A>
A& Market<R, A>::agent(AgentId id) {
  auto it = agents.find(id);
  if (it == agents.end()) throw std::out_of_range("unknown agent " + std::to_string(id.value));
  return it->second;
}

template <class R, class A>
std::string Market<R, A>::name_of(AgentId id) const {
  if (id == kRequester) return "p";
  if (id == kVirtualSupplier) return "phi";
  auto it = names.find(id);
  if (it != names.end() && !it->second.empty()) return it->second;
  return std::to_string(id.value);
}

template <class R, class A>
void Market<R, A>::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument(msg); };
  auto check_edges = [&](AgentId owner, const NeighborSet& edges) {
    for (AgentId n : edges) {
      if (n == owner && owner != kRequester) fail("agent " + name_of(owner) + " lists itself as a neighbor");
      if (n == kRequester) continue;  // edges back to the requester carry no information
      if (!has_agent(n)) fail(name_of(owner) + " references unknown agent " + std::to_string(n.value));
    }
  };

  check_edges(kRequester, requester.neighbors);
  if (requester.neighbors.count(kRequester)) fail("requester lists itself as a neighbor");

  for (const auto& [id, a] : agents) {
    if (id == kRequester || id == kVirtualSupplier) fail("agent id " + std::to_string(id.value) + " is reserved");
    check_edges(id, a.neighbors);
    if constexpr (std::is_same_v<A, SupplierHM>) {
      if (a.ability < 0) fail(name_of(id) + ": negative ability");
      if (a.unit_cost.is_negative()) fail(name_of(id) + ": negative cost");
    } else if constexpr (std::is_same_v<A, SupplierHT>) {
      if (a.total_cost.is_negative()) fail(name_of(id) + ": negative cost");
      if (!std::is_sorted(a.bundle.begin(), a.bundle.end()) ||
          std::adjacent_find(a.bundle.begin(), a.bundle.end()) != a.bundle.end())
        fail(name_of(id) + ": bundle must be sorted and duplicate-free");
      for (TaskIndex t : a.bundle)
        if (t >= requester.task_count()) fail(name_of(id) + ": bundle references unknown task");
    } else {
      if (a.valuation.is_negative()) fail(name_of(id) + ": negative valuation");
    }
  }

  if constexpr (std::is_same_v<R, RequesterHM>) {
    if (requester.demand < 0) fail("negative demand");
    if (requester.reserve_unit.is_negative()) fail("negative reserve");
  } else if constexpr (std::is_same_v<R, RequesterHT>) {
    if (requester.reserve.size() != requester.task_names.size()) fail("reserve must be defined for every task");
    for (const Money& r : requester.reserve)
      if (r.is_negative()) fail("negative reserve");
  } else {
    if (requester.units < 0) fail("negative unit count");
  }
}

template struct Market<RequesterHM, SupplierHM>;
template struct Market<RequesterHT, SupplierHT>;
template struct Market<Seller, Bidder>;

std::int64_t Outcome::units(AgentId id) const {
  auto it = allocation.find(id);
  return it == allocation.end() ? 0 : it->second;
}

Money Outcome::payment(AgentId id) const {
  auto it = payments.find(id);
  return it == payments.end() ? Money{} : it->second;
}

std::vector<AgentId> Outcome::winners() const {
  std::vector<AgentId> out;
  for (const auto& [id, units] : allocation)
    if (units > 0) out.push_back(id);
  return out;
}

Money Outcome::total_payments() const {
  Money sum;
  for (const auto& [id, x] : payments) sum += x;
  return sum;
}

namespace {
void require_participant(const Outcome& outcome, AgentId agent) {
  if (!outcome.participates(agent))
    throw std::out_of_range("agent " + std::to_string(agent.value) + " does not appear in the outcome");
}
}  // namespace

Money utility_hm(const Outcome& outcome, AgentId agent, const SupplierHM& true_type) {
  require_participant(outcome, agent);
  return outcome.payment(agent) - Money(outcome.units(agent)) * true_type.unit_cost;
}

Money utility_ht(const Outcome& outcome, AgentId agent, const SupplierHT& true_type) {
  require_participant(outcome, agent);
  Money x = outcome.payment(agent);
  return outcome.units(agent) > 0 ? x - true_type.total_cost : x;
}

Money utility_forward(const Outcome& outcome, AgentId agent, const Bidder& true_type) {
  require_participant(outcome, agent);
  return Money(outcome.units(agent)) * true_type.valuation + outcome.payment(agent);
}

Money budget(const HomogeneousInstance& instance) {
  return Money(instance.requester.demand) * instance.requester.reserve_unit;
}

Money budget(const HeterogeneousInstance& instance) {
  Money sum;
  for (const Money& r : instance.requester.reserve) sum += r;
  return sum;
}

namespace {
Money reserve_of(const TaskSet& tasks, const HeterogeneousInstance& instance) {
  Money sum;
  tasks.for_each([&](TaskIndex t) { sum += instance.requester.reserve[t]; });
  return sum;
}
}  // namespace

Money requester_cost(const Outcome& outcome, const HomogeneousInstance& instance) {
  return outcome.total_payments() + Money(outcome.self_supplied_units) * instance.requester.reserve_unit;
}

Money requester_cost(const Outcome& outcome, const HeterogeneousInstance& instance) {
  return outcome.total_payments() + reserve_of(outcome.self_supplied_tasks, instance);
}

Money requester_surplus(const Outcome& outcome, const HomogeneousInstance& instance) {
  return budget(instance) - requester_cost(outcome, instance);
}

Money requester_surplus(const Outcome& outcome, const HeterogeneousInstance& instance) {
  return budget(instance) - requester_cost(outcome, instance);
}

Money social_cost(const Outcome& outcome, const HomogeneousInstance& instance) {
  Money sum = Money(outcome.self_supplied_units) * instance.requester.reserve_unit;
  for (const auto& [id, units] : outcome.allocation)
    if (units > 0) sum += Money(units) * instance.agent(id).unit_cost;
  return sum;
}

Money social_cost(const Outcome& outcome, const HeterogeneousInstance& instance) {
  Money sum = reserve_of(outcome.self_supplied_tasks, instance);
  for (const auto& [id, selected] : outcome.allocation)
    if (selected > 0) sum += instance.agent(id).total_cost;
  return sum;
}

bool is_feasible(const Outcome& outcome, const HomogeneousInstance& instance) {
  std::int64_t total = outcome.self_supplied_units;
  if (total < 0) return false;
  for (const auto& [id, units] : outcome.allocation) {
    if (units < 0 || units > instance.agent(id).ability) return false;
    total += units;
  }
  return total == instance.requester.demand;
}

TaskSet covered_tasks(const Outcome& outcome, const HeterogeneousInstance& instance) {
  TaskSet covered(instance.requester.task_count());
  for (const auto& [id, selected] : outcome.allocation)
    if (selected > 0)
      for (TaskIndex t : instance.agent(id).bundle) covered.insert(t);
  return covered;
}

bool is_feasible(const Outcome& outcome, const HeterogeneousInstance& instance) {
  TaskSet covered = covered_tasks(outcome, instance);
  outcome.self_supplied_tasks.for_each([&](TaskIndex t) { covered.insert(t); });
  for (const auto& [id, selected] : outcome.allocation)
    if (selected != 0 && selected != 1) return false;
  return covered.count() == instance.requester.task_count();
}

}  // namespace netauction
