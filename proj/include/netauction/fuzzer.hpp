#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "netauction/model.hpp"

namespace netauction {

enum class Property { IndividualRationality, IncentiveCompatibility, WeakBudgetBalance, ValueMonotonicity, DiffusionMonotonicity };

std::string to_string(Property p);

// The two report dimensions the fuzzer varies: the scalar (unit cost, bundle
// cost or valuation) and the invitation set.
struct ReportedType {
  Money value;
  NeighborSet neighbors;

  friend bool operator==(const ReportedType&, const ReportedType&) = default;
};

// A recorded run pair proving a violation. For incentive compatibility the
// reference report is the truth and `deviant_utility > truthful_utility`.
// For the monotonicity properties the reference report wins strictly more
// than the deviation although the deviation is the "easier" report. Both
// utilities are always evaluated at the agent's true type. Budget and IR
// witnesses use the truthful profile for both sides.
struct DeviationWitness {
  Property property = Property::IncentiveCompatibility;
  AgentId agent;
  ReportedType true_type;
  ReportedType reference_type;
  ReportedType reported_type;
  std::int64_t reference_allocation = 0;
  std::int64_t reported_allocation = 0;
  Money truthful_utility;
  Money deviant_utility;
};

bool witness_less(const DeviationWitness& a, const DeviationWitness& b);

struct FuzzOptions {
  // Enumerate every invitation subset up to this many neighbours; sample above.
  std::size_t max_exhaustive_neighbors = 8;
  // When set, sample this many subsets and extra costs instead of enumerating.
  std::optional<std::size_t> samples;
  std::uint64_t seed = 1;
  // Points inserted per gap of the cost grid (1 = the plain grid).
  int grid_refinement = 1;
};

struct CheckResult {
  std::optional<DeviationWitness> witness;
  bool sampled = false;
  std::size_t evaluations = 0;

  [[nodiscard]] bool passed() const { return !witness.has_value(); }
};

// All checks for one instance; one witness per violated property at most.
struct FuzzReport {
  std::vector<DeviationWitness> witnesses;
  bool sampled = false;
  std::size_t evaluations = 0;

  [[nodiscard]] bool passed() const { return witnesses.empty(); }
  [[nodiscard]] const DeviationWitness* find(Property p) const;
};

template <class M>
using Mechanism = std::function<Outcome(const M&)>;

template <class M>
CheckResult check_ir(const Mechanism<M>& mechanism, const M& instance);
template <class M>
CheckResult check_wbb(const Mechanism<M>& mechanism, const M& instance);
template <class M>
CheckResult check_ic(const Mechanism<M>& mechanism, const M& instance, AgentId agent, const FuzzOptions& options = {});
template <class M>
CheckResult check_value_monotone(const Mechanism<M>& mechanism, const M& instance, AgentId agent,
                                 const FuzzOptions& options = {});
template <class M>
CheckResult check_diffusion_monotone(const Mechanism<M>& mechanism, const M& instance, AgentId agent,
                                     const FuzzOptions& options = {});

// IR and WBB once, then IC and both monotonicity checks for every reachable
// agent, sharing one table of mechanism runs per agent.
template <class M>
FuzzReport fuzz_instance(const Mechanism<M>& mechanism, const M& instance, const FuzzOptions& options = {});

// Re-runs both sides of a witness. Returns true when the recorded
// allocations and utilities are reproduced exactly.
template <class M>
bool replay_witness(const Mechanism<M>& mechanism, const M& instance, const DeviationWitness& witness);

// Mechanism run with one agent's report replaced.
template <class M>
M with_report(const M& instance, AgentId agent, const ReportedType& report);

// Cost grid used for one agent: zero, other agents' reports and reserves,
// midpoints, and one point above the cap.
template <class M>
std::vector<Money> base_cost_grid(const M& instance, AgentId agent, int refinement = 1);

}  // namespace netauction
