#include "netauction/oracles.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <numeric>

#include "netauction/network.hpp"

namespace netauction {

UnitAllocation min_cost_multiunit_oracle(std::span<const UnitOffer> suppliers, std::int64_t demand,
                                         const Money& reserve_unit) {
  if (suppliers.size() > kMultiunitOracleMaxSuppliers || demand > kMultiunitOracleMaxDemand)
    throw OracleSizeError("multi-unit oracle limited to 12 suppliers and demand 30");
  if (demand < 0) throw std::invalid_argument("negative demand");
  const std::size_t n = suppliers.size();
  const auto D = static_cast<std::size_t>(demand);

  // best[s][d]: cheapest way to buy exactly d units from the first s suppliers.
  std::vector<std::vector<std::optional<Money>>> best(n + 1, std::vector<std::optional<Money>>(D + 1));
  std::vector<std::vector<std::int64_t>> take(n + 1, std::vector<std::int64_t>(D + 1, 0));
  best[0][0] = Money{};
  for (std::size_t s = 0; s < n; ++s) {
    std::int64_t cap = std::min<std::int64_t>(std::max<std::int64_t>(suppliers[s].units, 0), demand);
    for (std::size_t d = 0; d <= D; ++d) {
      if (!best[s][d]) continue;
      for (std::int64_t u = 0; u <= cap && d + static_cast<std::size_t>(u) <= D; ++u) {
        Money c = *best[s][d] + Money(u) * suppliers[s].unit_cost;
        auto& slot = best[s + 1][d + static_cast<std::size_t>(u)];
        if (!slot || c < *slot) {
          slot = c;
          take[s + 1][d + static_cast<std::size_t>(u)] = u;
        }
      }
    }
  }

  std::optional<Money> total;
  std::size_t bought = 0;
  for (std::size_t d = 0; d <= D; ++d) {
    if (!best[n][d]) continue;
    Money c = *best[n][d] + Money(static_cast<std::int64_t>(D - d)) * reserve_unit;
    if (!total || c < *total) {
      total = c;
      bought = d;
    }
  }

  UnitAllocation result;
  result.cost = *total;
  if (bought < D) result.units[kVirtualSupplier] = static_cast<std::int64_t>(D - bought);
  std::size_t d = bought;
  for (std::size_t s = n; s > 0; --s) {
    std::int64_t u = take[s][d];
    if (u > 0) result.units[suppliers[s - 1].id] += u;
    d -= static_cast<std::size_t>(u);
  }
  return result;
}

namespace {

std::int64_t lcm_checked(std::int64_t a, std::int64_t b) {
  std::int64_t g = std::gcd(a, b);
  std::int64_t l = 0;
  if (__builtin_mul_overflow(a / g, b, &l) || l > (std::int64_t{1} << 40)) throw std::overflow_error("cost grid denominator too large");
  return l;
}

std::int64_t scaled(const Money& m, std::int64_t grid) {
  Money s = m * Money(grid);
  if (!s.is_integer()) throw std::logic_error("value is off the cost grid");
  return s.numerator();
}

Money floor_to_grid_ceil(const Money& x, std::int64_t grid) {
  // Smallest multiple of 1/grid that is >= x.
  Money s = x * Money(grid);
  std::int64_t q = s.numerator() / s.denominator();
  if (q * s.denominator() < s.numerator()) ++q;
  return Money(q, grid);
}

}  // namespace

std::int64_t grid_denominator(const HomogeneousInstance& instance) {
  std::int64_t l = instance.requester.reserve_unit.denominator();
  for (const auto& [id, s] : instance.agents) l = lcm_checked(l, s.unit_cost.denominator());
  return l;
}

std::int64_t grid_denominator(const HeterogeneousInstance& instance) {
  std::int64_t l = 1;
  for (const Money& r : instance.requester.reserve) l = lcm_checked(l, r.denominator());
  for (const auto& [id, s] : instance.agents) l = lcm_checked(l, s.total_cost.denominator());
  return l;
}

std::int64_t grid_denominator(const ForwardInstance& instance) {
  std::int64_t l = 1;
  for (const auto& [id, b] : instance.agents) l = lcm_checked(l, b.valuation.denominator());
  return l;
}

SetCoverSolution min_social_cost_ht(const HeterogeneousInstance& instance) {
  std::vector<AgentId> members = reachable_market(instance).members();
  if (members.size() > kSetCoverOracleMaxSuppliers)
    throw OracleSizeError("set-cover oracle limited to 20 reachable suppliers");

  // Work in integer multiples of 1/grid so the inner loop avoids rationals.
  const std::int64_t grid = grid_denominator(instance);
  const auto& reserve = instance.requester.reserve;
  std::vector<std::int64_t> task_value(reserve.size());
  std::int64_t uncovered_value = 0;
  for (std::size_t t = 0; t < reserve.size(); ++t) {
    task_value[t] = scaled(reserve[t], grid);
    uncovered_value += task_value[t];
  }
  std::vector<std::int64_t> cost(members.size());
  for (std::size_t i = 0; i < members.size(); ++i) cost[i] = scaled(instance.agent(members[i]).total_cost, grid);

  std::vector<int> cover_count(reserve.size(), 0);
  std::int64_t supplier_cost = 0;
  std::uint64_t mask = 0;
  std::int64_t best = uncovered_value;
  std::uint64_t best_mask = 0;
  const std::uint64_t steps = std::uint64_t{1} << members.size();
  for (std::uint64_t g = 1; g < steps; ++g) {
    auto bit = static_cast<std::size_t>(std::countr_zero(g));
    const auto& bundle = instance.agent(members[bit]).bundle;
    if (mask & (std::uint64_t{1} << bit)) {
      supplier_cost -= cost[bit];
      for (TaskIndex t : bundle)
        if (--cover_count[t] == 0) uncovered_value += task_value[t];
    } else {
      supplier_cost += cost[bit];
      for (TaskIndex t : bundle)
        if (cover_count[t]++ == 0) uncovered_value -= task_value[t];
    }
    mask ^= std::uint64_t{1} << bit;
    std::int64_t total = supplier_cost + uncovered_value;
    if (total < best || (total == best && mask < best_mask)) {
      best = total;
      best_mask = mask;
    }
  }

  SetCoverSolution sol;
  sol.cost = Money(best, grid);
  for (std::size_t i = 0; i < members.size(); ++i)
    if (best_mask & (std::uint64_t{1} << i)) sol.winners.push_back(members[i]);
  return sol;
}

std::optional<Money> critical_threshold(const std::function<bool(const Money&)>& wins, const Money& lo,
                                        const Money& hi, std::int64_t grid) {
  if (!wins(lo)) return std::nullopt;
  if (wins(hi)) return hi;
  const Money spacing(1, grid);
  Money resolution = (hi - lo) / Money(std::int64_t{1} << 20);
  resolution = std::min(resolution, spacing / Money(2));

  Money a = lo;  // wins
  Money b = hi;  // loses
  while (b - a > resolution) {
    Money m = midpoint(a, b);
    if (wins(m))
      a = m;
    else
      b = m;
  }

  Money snapped = floor_to_grid_ceil(a, grid);
  if (snapped > b) return a;  // no lattice point in the bracket; report the bound we have
  const Money delta = spacing / Money(4);
  bool below_ok = snapped - delta < lo || wins(snapped - delta);
  bool above_ok = snapped + delta > hi ? true : !wins(snapped + delta);
  if (!below_ok || !above_ok) return a;
  return snapped;
}

namespace {

template <class Instance, class Mechanism, class SetCost>
std::optional<Money> search(const Mechanism& mechanism, const Instance& instance, AgentId agent,
                            const NeighborSet& report_neighbors, const Money& cap, SetCost set_cost) {
  Instance probe = instance;
  probe.agent(agent).neighbors = report_neighbors;
  auto wins = [&](const Money& c) {
    set_cost(probe.agent(agent), c);
    return mechanism(probe).units(agent) > 0;
  };
  return critical_threshold(wins, Money{}, cap, grid_denominator(instance));
}

}  // namespace

std::optional<Money> critical_cost_search(const HomogeneousMechanism& mechanism, const HomogeneousInstance& instance,
                                          AgentId agent, const NeighborSet& report_neighbors) {
  return search(mechanism, instance, agent, report_neighbors, instance.requester.reserve_unit,
                [](SupplierHM& s, const Money& c) { s.unit_cost = c; });
}

std::optional<Money> critical_cost_search(const HeterogeneousMechanism& mechanism,
                                          const HeterogeneousInstance& instance, AgentId agent,
                                          const NeighborSet& report_neighbors) {
  Money cap;
  for (TaskIndex t : instance.agent(agent).bundle) cap += instance.requester.reserve[t];
  return search(mechanism, instance, agent, report_neighbors, cap,
                [](SupplierHT& s, const Money& c) { s.total_cost = c; });
}

}  // namespace netauction
