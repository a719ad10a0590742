#pragma once

#include <vector>

#include "netauction/model.hpp"

namespace netauction {

Money marginal_valuation(const SupplierHT& supplier, const TaskSet& uncovered, const std::vector<Money>& reserve);
Money marginal_utility(const SupplierHT& supplier, const TaskSet& uncovered, const std::vector<Money>& reserve);

struct GreedyOptions {
  // A supplier that would cover nothing new is never picked, even at zero
  // marginal utility.
  bool skip_zero_marginal_valuation = true;
};

struct GreedySelection {
  std::vector<AgentId> winners;  // in selection order
  TaskSet uncovered;             // after the last pick
};

// Repeatedly picks the highest non-negative marginal utility in `layer`
// (lower id on ties) until nothing qualifies or every task is covered.
GreedySelection greedy_layer_selection(const std::vector<AgentId>& layer, const TaskSet& uncovered,
                                       const HeterogeneousInstance& instance, const GreedyOptions& options = {});

// Critical cost of `winner` within her layer, given the uncovered tasks at
// layer entry. Throws std::invalid_argument if she is not in the layer.
Money ran_ht_payment(AgentId winner, const std::vector<AgentId>& layer, const TaskSet& uncovered_at_entry,
                     const HeterogeneousInstance& instance, const GreedyOptions& options = {});

Outcome ran_ht(const HeterogeneousInstance& instance, const GreedyOptions& options = {});
// RAN-HT confined to the requester's direct neighbours.
Outcome local_greedy(const HeterogeneousInstance& instance, const GreedyOptions& options = {});

}  // namespace netauction
