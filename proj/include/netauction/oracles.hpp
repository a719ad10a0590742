#pragma once

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "netauction/homogeneous.hpp"
#include "netauction/model.hpp"

namespace netauction {

// Raised when an instance is too large for exhaustive search.
class OracleSizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

inline constexpr std::size_t kMultiunitOracleMaxSuppliers = 12;
inline constexpr std::int64_t kMultiunitOracleMaxDemand = 30;
inline constexpr std::size_t kSetCoverOracleMaxSuppliers = 20;

// Minimum-cost way to buy `demand` units from the suppliers, with whatever is
// left bought from the requester at `reserve_unit`. Searches every vector of
// per-supplier unit counts (by dynamic programming over suppliers).
UnitAllocation min_cost_multiunit_oracle(std::span<const UnitOffer> suppliers, std::int64_t demand,
                                         const Money& reserve_unit);

struct SetCoverSolution {
  std::vector<AgentId> winners;
  Money cost;
};

// Cheapest subset of reachable suppliers, counting uncovered tasks at their
// reserve. Subsets are visited in Gray-code order.
SetCoverSolution min_social_cost_ht(const HeterogeneousInstance& instance);

// Least common multiple of the denominators of every cost and reserve.
std::int64_t grid_denominator(const HomogeneousInstance& instance);
std::int64_t grid_denominator(const HeterogeneousInstance& instance);
std::int64_t grid_denominator(const ForwardInstance& instance);

// Supremum of the costs in [lo, hi] at which `wins` holds, assuming winning is
// monotone (wins below the threshold, loses above). Bisects with exact
// midpoints, snaps to the 1/grid lattice and confirms the snapped value by
// evaluating just below and just above it. Empty if `wins(lo)` is false.
std::optional<Money> critical_threshold(const std::function<bool(const Money&)>& wins, const Money& lo,
                                        const Money& hi, std::int64_t grid);

using HomogeneousMechanism = std::function<Outcome(const HomogeneousInstance&)>;
using HeterogeneousMechanism = std::function<Outcome(const HeterogeneousInstance&)>;

// Critical winning cost of `agent` with the given reported neighbours and
// everyone else fixed. Searches unit costs up to the reserve (homogeneous) or
// bundle costs up to the bundle's reserve value (heterogeneous).
std::optional<Money> critical_cost_search(const HomogeneousMechanism& mechanism, const HomogeneousInstance& instance,
                                          AgentId agent, const NeighborSet& report_neighbors);
std::optional<Money> critical_cost_search(const HeterogeneousMechanism& mechanism,
                                          const HeterogeneousInstance& instance, AgentId agent,
                                          const NeighborSet& report_neighbors);

}  // namespace netauction
