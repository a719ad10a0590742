#pragma once

#include <map>
#include <span>
#include <vector>

#include "netauction/model.hpp"

namespace netauction {

struct UnitOffer {
  AgentId id;
  std::int64_t units = 0;
  Money unit_cost;
};

struct UnitAllocation {
  std::map<AgentId, std::int64_t> units;  // only positive entries
  Money cost;

  [[nodiscard]] std::int64_t of(AgentId id) const {
    auto it = units.find(id);
    return it == units.end() ? 0 : it->second;
  }
};

// Cheapest units first; ties go to the lower id, so the virtual supplier loses
// every tie. Throws std::invalid_argument when the offers cannot cover demand.
UnitAllocation optimal_multiunit_allocation(std::span<const UnitOffer> offers, std::int64_t demand);

struct LayerAuctionState {
  int layer = 0;  // 1-based distance
  std::int64_t remaining_demand = 0;  // on entry
  std::vector<AgentId> layer_eligible;
  bool includes_virtual = false;
  Money allocation_cost;  // optimal in-layer cost including the virtual supplier, when present
};

struct RanHmTrace {
  Outcome outcome;
  std::vector<LayerAuctionState> layers;
};

RanHmTrace ran_hm_traced(const HomogeneousInstance& instance);
Outcome ran_hm(const HomogeneousInstance& instance);

// VCG over the whole reachable market. An agent's pivot removes her together
// with everyone who only entered through her invitations.
Outcome d_vcg(const HomogeneousInstance& instance);
// VCG over the requester's direct neighbours only.
Outcome nd_vcg(const HomogeneousInstance& instance);

// Distance-ordered mechanism whose allocation is not monotone; kept to show
// how incentive compatibility fails without layering.
Outcome non_monotone_auction(const HomogeneousInstance& instance);

}  // namespace netauction
