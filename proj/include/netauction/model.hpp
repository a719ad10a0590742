#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "netauction/money.hpp"
#include "netauction/task_set.hpp"

namespace netauction {

struct AgentId {
  std::uint32_t value = 0;
  friend auto operator<=>(const AgentId&, const AgentId&) = default;
};

inline constexpr AgentId kRequester{0};
// The requester acting as a supplier of last resort at her reserve price.
inline constexpr AgentId kVirtualSupplier{std::numeric_limits<std::uint32_t>::max()};

using NeighborSet = std::set<AgentId>;

struct SupplierHM {
  std::int64_t ability = 0;
  Money unit_cost;
  NeighborSet neighbors;
};

struct SupplierHT {
  std::vector<TaskIndex> bundle;  // sorted, unique
  Money total_cost;
  NeighborSet neighbors;
};

struct Bidder {
  Money valuation;
  NeighborSet neighbors;
};

struct RequesterHM {
  std::int64_t demand = 0;
  Money reserve_unit;
  NeighborSet neighbors;
};

struct RequesterHT {
  std::vector<std::string> task_names;
  std::vector<Money> reserve;  // indexed by TaskIndex
  NeighborSet neighbors;

  [[nodiscard]] std::size_t task_count() const { return task_names.size(); }
};

struct Seller {
  std::int64_t units = 1;
  NeighborSet neighbors;
};

template <class Requester, class Agent>
struct Market {
  using requester_type = Requester;
  using agent_type = Agent;

  Requester requester;
  std::map<AgentId, Agent> agents;
  std::map<AgentId, std::string> names;

  [[nodiscard]] const Agent& agent(AgentId id) const;
  [[nodiscard]] Agent& agent(AgentId id);
  [[nodiscard]] bool has_agent(AgentId id) const { return agents.count(id) != 0; }
  [[nodiscard]] std::string name_of(AgentId id) const;
  // Throws std::invalid_argument describing the first problem found.
  void validate() const;
};

using HomogeneousInstance = Market<RequesterHM, SupplierHM>;
using HeterogeneousInstance = Market<RequesterHT, SupplierHT>;
using ForwardInstance = Market<Seller, Bidder>;

extern template struct Market<RequesterHM, SupplierHM>;
extern template struct Market<RequesterHT, SupplierHT>;
extern template struct Market<Seller, Bidder>;

// Allocation holds units for homogeneous goods and 0/1 for everything else.
// Payments are transfers to the agent; a forward-auction winner's entry is
// minus her price.
struct Outcome {
  std::map<AgentId, std::int64_t> allocation;
  std::map<AgentId, Money> payments;
  std::int64_t self_supplied_units = 0;
  TaskSet self_supplied_tasks;

  [[nodiscard]] std::int64_t units(AgentId id) const;
  [[nodiscard]] Money payment(AgentId id) const;
  [[nodiscard]] bool participates(AgentId id) const { return allocation.count(id) != 0; }
  [[nodiscard]] std::vector<AgentId> winners() const;
  [[nodiscard]] Money total_payments() const;
};

Money utility_hm(const Outcome& outcome, AgentId agent, const SupplierHM& true_type);
Money utility_ht(const Outcome& outcome, AgentId agent, const SupplierHT& true_type);
Money utility_forward(const Outcome& outcome, AgentId agent, const Bidder& true_type);

Money budget(const HomogeneousInstance& instance);
Money budget(const HeterogeneousInstance& instance);

// Payments plus the reserve value of whatever the requester supplies herself.
Money requester_cost(const Outcome& outcome, const HomogeneousInstance& instance);
Money requester_cost(const Outcome& outcome, const HeterogeneousInstance& instance);

// Budget minus expenditure; negative means a deficit.
Money requester_surplus(const Outcome& outcome, const HomogeneousInstance& instance);
Money requester_surplus(const Outcome& outcome, const HeterogeneousInstance& instance);

Money social_cost(const Outcome& outcome, const HomogeneousInstance& instance);
Money social_cost(const Outcome& outcome, const HeterogeneousInstance& instance);

bool is_feasible(const Outcome& outcome, const HomogeneousInstance& instance);
bool is_feasible(const Outcome& outcome, const HeterogeneousInstance& instance);

// Union of the bundles of selected suppliers.
TaskSet covered_tasks(const Outcome& outcome, const HeterogeneousInstance& instance);

}  // namespace netauction
