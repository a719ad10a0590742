#pragma once

#include <map>
#include <optional>
#include <vector>

#include "netauction/model.hpp"

namespace netauction {

// Reachable bidders sorted by (distance, id).
std::vector<AgentId> priority_order(const ForwardInstance& instance);

struct DnaMuTrace {
  std::vector<AgentId> order;
  // Price offered to each agent in turn; empty once every unit is gone.
  std::map<AgentId, std::optional<Money>> prices;
  Outcome outcome;
};

// Unit-demand multi-unit diffusion auction; the seller's `units` is k.
DnaMuTrace dna_mu_traced(const ForwardInstance& instance);
Outcome dna_mu(const ForwardInstance& instance);

// Agents lying on every path from the seller to the highest bidder, nearest
// first, ending with the highest bidder herself. Empty for an empty market.
std::vector<AgentId> critical_diffusion_sequence(const ForwardInstance& instance);

// Single-item information diffusion mechanism.
Outcome idm(const ForwardInstance& instance);

}  // namespace netauction
