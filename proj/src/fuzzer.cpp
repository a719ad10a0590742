#include "netauction/fuzzer.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <tuple>

#include "netauction/network.hpp"
#include "netauction/oracles.hpp"

namespace netauction {

std::string to_string(Property p) {
  switch (p) {
    case Property::IndividualRationality: return "IR";
    case Property::IncentiveCompatibility: return "IC";
    case Property::WeakBudgetBalance: return "WBB";
    case Property::ValueMonotonicity: return "value-monotonicity";
    case Property::DiffusionMonotonicity: return "diffusion-monotonicity";
  }
  return "?";
}

bool witness_less(const DeviationWitness& a, const DeviationWitness& b) {
  auto key = [](const DeviationWitness& w) {
    return std::tie(w.property, w.agent, w.reported_type.neighbors, w.reported_type.value, w.reference_type.neighbors,
                    w.reference_type.value);
  };
  return key(a) < key(b);
}

const DeviationWitness* FuzzReport::find(Property p) const {
  for (const auto& w : witnesses)
    if (w.property == p) return &w;
  return nullptr;
}

namespace {

template <class M>
struct Traits;

template <>
struct Traits<HomogeneousInstance> {
  static constexpr bool higher_wins = false;
  static Money& value(SupplierHM& s) { return s.unit_cost; }
  static const Money& value(const SupplierHM& s) { return s.unit_cost; }
  static Money utility(const Outcome& o, AgentId id, const SupplierHM& t) { return utility_hm(o, id, t); }
  static Money cap(const HomogeneousInstance& m, AgentId) { return m.requester.reserve_unit; }
  static Money surplus(const Outcome& o, const HomogeneousInstance& m) { return requester_surplus(o, m); }
  static void anchors(const HomogeneousInstance& m, std::vector<Money>& out) { out.push_back(m.requester.reserve_unit); }
};

template <>
struct Traits<HeterogeneousInstance> {
  static constexpr bool higher_wins = false;
  static Money& value(SupplierHT& s) { return s.total_cost; }
  static const Money& value(const SupplierHT& s) { return s.total_cost; }
  static Money utility(const Outcome& o, AgentId id, const SupplierHT& t) { return utility_ht(o, id, t); }
  static Money cap(const HeterogeneousInstance& m, AgentId id) {
    Money sum;
    for (TaskIndex t : m.agent(id).bundle) sum += m.requester.reserve[t];
    return sum;
  }
  static Money surplus(const Outcome& o, const HeterogeneousInstance& m) { return requester_surplus(o, m); }
  static void anchors(const HeterogeneousInstance& m, std::vector<Money>& out) {
    for (const Money& r : m.requester.reserve) out.push_back(r);
  }
};

template <>
struct Traits<ForwardInstance> {
  static constexpr bool higher_wins = true;
  static Money& value(Bidder& b) { return b.valuation; }
  static const Money& value(const Bidder& b) { return b.valuation; }
  static Money utility(const Outcome& o, AgentId id, const Bidder& t) { return utility_forward(o, id, t); }
  static Money cap(const ForwardInstance& m, AgentId) {
    Money top;
    for (const auto& [id, b] : m.agents) top = std::max(top, b.valuation);
    return top.is_zero() ? Money(1) : top * Money(2);
  }
  // Seller revenue: winners' prices net of any rewards paid out.
  static Money surplus(const Outcome& o, const ForwardInstance&) { return -o.total_payments(); }
  static void anchors(const ForwardInstance&, std::vector<Money>&) {}
};

struct Eval {
  std::int64_t allocation = 0;
  Money utility;
};

template <class M>
Eval evaluate(const Mechanism<M>& mechanism, const M& probe, AgentId agent, const typename M::agent_type& truth) {
  Outcome o = mechanism(probe);
  if (!o.participates(agent)) return {};
  return Eval{o.units(agent), Traits<M>::utility(o, agent, truth)};
}

void sort_unique(std::vector<Money>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::vector<NeighborSet> all_subsets(const NeighborSet& r) {
  std::vector<AgentId> items(r.begin(), r.end());
  std::vector<NeighborSet> out;
  const std::uint64_t count = std::uint64_t{1} << items.size();
  out.reserve(count);
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    NeighborSet s;
    for (std::size_t i = 0; i < items.size(); ++i)
      if (mask & (std::uint64_t{1} << i)) s.insert(items[i]);
    out.push_back(std::move(s));
  }
  return out;
}

// Every mechanism run needed for one agent, shared by the IC and both
// monotonicity checks.
template <class M>
class DeviationTable {
 public:
  struct Row {
    NeighborSet neighbors;
    std::optional<Money> threshold;
    std::map<Money, Eval> points;
  };

  DeviationTable(const Mechanism<M>& mechanism, const M& instance, AgentId agent, const FuzzOptions& options)
      : mechanism_(mechanism), instance_(instance), probe_(instance), agent_(agent), truth_(instance.agent(agent)) {
    using T = Traits<M>;
    true_type_ = ReportedType{T::value(truth_), truth_.neighbors};
    truthful_ = run(true_type_);

    std::mt19937_64 rng(options.seed ^ (0x9E3779B97F4A7C15ull * (agent.value + 1)));
    std::vector<NeighborSet> subsets;
    if (!options.samples && truth_.neighbors.size() <= options.max_exhaustive_neighbors) {
      subsets = all_subsets(truth_.neighbors);
    } else {
      sampled_ = true;
      std::vector<AgentId> items(truth_.neighbors.begin(), truth_.neighbors.end());
      std::set<NeighborSet> chosen{NeighborSet{}, truth_.neighbors};
      std::size_t want = options.samples.value_or(256);
      std::bernoulli_distribution coin(0.5);
      for (std::size_t k = 0; k < want * 4 && chosen.size() < want + 2; ++k) {
        NeighborSet s;
        for (AgentId id : items)
          if (coin(rng)) s.insert(id);
        chosen.insert(std::move(s));
      }
      subsets.assign(chosen.begin(), chosen.end());
    }

    cap_ = T::cap(instance, agent);
    base_ = base_cost_grid(instance, agent, options.grid_refinement);
    Money gap = base_.size() > 1 ? base_[1] - base_[0] : Money(1);
    for (std::size_t i = 1; i < base_.size(); ++i) gap = std::min(gap, base_[i] - base_[i - 1]);
    epsilon_ = gap / Money(1024);

    std::vector<Money> extra;
    if (sampled_) {
      std::uniform_int_distribution<std::int64_t> pick(0, 4096);
      for (std::size_t k = 0; k < options.samples.value_or(64); ++k)
        extra.push_back(Money(2) * cap_ * Money(pick(rng), 4096));
    }

    const std::int64_t grid = grid_denominator(instance);
    for (const auto& s : subsets) {
      Row row;
      row.neighbors = s;
      row.threshold = threshold(s, grid);
      rows_.push_back(std::move(row));
      Row& r = rows_.back();
      std::vector<Money> points = base_;
      if (r.threshold) {
        for (const Money& p : {*r.threshold - epsilon_, *r.threshold, *r.threshold + epsilon_})
          if (!p.is_negative()) points.push_back(p);
      }
      points.insert(points.end(), extra.begin(), extra.end());
      for (const Money& c : points) eval_at(r, c);
    }
  }

  [[nodiscard]] bool sampled() const { return sampled_; }
  [[nodiscard]] std::size_t evaluations() const { return evaluations_; }

  // Largest gain first; among equal gains keep the true value when possible so
  // a pure invitation deviation is reported as such.
  static bool more_telling(const DeviationWitness& a, const DeviationWitness& b) {
    if (a.deviant_utility != b.deviant_utility) return a.deviant_utility > b.deviant_utility;
    const bool a_true = a.reported_type.value == a.true_type.value;
    const bool b_true = b.reported_type.value == b.true_type.value;
    if (a_true != b_true) return a_true;
    return witness_less(a, b);
  }

  std::optional<DeviationWitness> incentive_witness() const {
    std::optional<DeviationWitness> best;
    for (const Row& row : rows_)
      for (const auto& [c, e] : row.points) {
        if (!(e.utility > truthful_.utility)) continue;
        DeviationWitness w = make(Property::IncentiveCompatibility, true_type_, truthful_, {c, row.neighbors}, e);
        if (!best || more_telling(w, *best)) best = w;
      }
    return best;
  }

  std::optional<DeviationWitness> value_witness() const {
    std::optional<DeviationWitness> best;
    for (const Row& row : rows_) {
      // Walk from the hardest report to the easiest; the allocation may never drop.
      std::vector<std::pair<Money, Eval>> seq(row.points.begin(), row.points.end());
      if (!Traits<M>::higher_wins) std::reverse(seq.begin(), seq.end());
      std::optional<std::size_t> peak;
      for (std::size_t k = 0; k < seq.size(); ++k) {
        if (peak && seq[k].second.allocation < seq[*peak].second.allocation) {
          DeviationWitness w = make(Property::ValueMonotonicity, {seq[*peak].first, row.neighbors}, seq[*peak].second,
                                    {seq[k].first, row.neighbors}, seq[k].second);
          if (!best || witness_less(w, *best)) best = w;
          break;
        }
        if (!peak || seq[k].second.allocation > seq[*peak].second.allocation) peak = k;
      }
    }
    return best;
  }

  std::optional<DeviationWitness> diffusion_witness() {
    std::optional<DeviationWitness> best;
    auto consider = [&](Row& wide, Row& narrow, const Money& c) {
      const Eval& a = eval_at(wide, c);
      const Eval& b = eval_at(narrow, c);
      if (b.allocation >= a.allocation) return;
      DeviationWitness w =
          make(Property::DiffusionMonotonicity, {c, wide.neighbors}, a, {c, narrow.neighbors}, b);
      if (!best || witness_less(w, *best)) best = w;
    };
    std::map<NeighborSet, std::size_t> index;
    for (std::size_t i = 0; i < rows_.size(); ++i) index[rows_[i].neighbors] = i;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      for (AgentId drop : NeighborSet(rows_[i].neighbors)) {
        NeighborSet smaller = rows_[i].neighbors;
        smaller.erase(drop);
        auto it = index.find(smaller);
        if (it == index.end()) continue;
        Row& wide = rows_[i];
        Row& narrow = rows_[it->second];
        for (const Money& c : base_) consider(wide, narrow, c);
        // A shifted threshold can hide between grid points; probe inside the gap.
        if (wide.threshold) {
          std::optional<Money> probe;
          if (!narrow.threshold) {
            probe = Traits<M>::higher_wins ? cap_ : Money{};
          } else if (Traits<M>::higher_wins ? *narrow.threshold > *wide.threshold
                                            : *narrow.threshold < *wide.threshold) {
            probe = midpoint(*narrow.threshold, *wide.threshold);
          }
          if (probe) consider(wide, narrow, *probe);
        }
      }
    }
    return best;
  }

 private:
  Eval run(const ReportedType& report) {
    auto& a = probe_.agent(agent_);
    Traits<M>::value(a) = report.value;
    a.neighbors = report.neighbors;
    ++evaluations_;
    return evaluate(mechanism_, probe_, agent_, truth_);
  }

  const Eval& eval_at(Row& row, const Money& c) {
    auto it = row.points.find(c);
    if (it != row.points.end()) return it->second;
    return row.points.emplace(c, run({c, row.neighbors})).first->second;
  }

  std::optional<Money> threshold(const NeighborSet& neighbors, std::int64_t grid) {
    auto wins = [&](const Money& c) { return run({c, neighbors}).allocation > 0; };
    if (!Traits<M>::higher_wins) return critical_threshold(wins, Money{}, cap_, grid);
    auto mirrored = [&](const Money& x) { return wins(cap_ - x); };
    auto x = critical_threshold(mirrored, Money{}, cap_, grid);
    if (!x) return std::nullopt;
    return cap_ - *x;
  }

  DeviationWitness make(Property p, const ReportedType& ref, const Eval& ref_eval, const ReportedType& rep,
                        const Eval& rep_eval) const {
    DeviationWitness w;
    w.property = p;
    w.agent = agent_;
    w.true_type = true_type_;
    w.reference_type = ref;
    w.reported_type = rep;
    w.reference_allocation = ref_eval.allocation;
    w.reported_allocation = rep_eval.allocation;
    w.truthful_utility = ref_eval.utility;
    w.deviant_utility = rep_eval.utility;
    return w;
  }

  const Mechanism<M>& mechanism_;
  const M& instance_;
  M probe_;
  AgentId agent_;
  typename M::agent_type truth_;
  ReportedType true_type_;
  Eval truthful_;
  bool sampled_ = false;
  std::size_t evaluations_ = 0;
  Money cap_;
  Money epsilon_;
  std::vector<Money> base_;
  std::vector<Row> rows_;
};

template <class M>
std::vector<AgentId> fuzzable_agents(const M& instance) {
  return reachable_market(instance).members();
}

template <class M>
CheckResult from_table(DeviationTable<M>& table, std::optional<DeviationWitness> w) {
  CheckResult r;
  r.witness = std::move(w);
  r.sampled = table.sampled();
  r.evaluations = table.evaluations();
  return r;
}

}  // namespace

template <class M>
M with_report(const M& instance, AgentId agent, const ReportedType& report) {
  M copy = instance;
  auto& a = copy.agent(agent);
  Traits<M>::value(a) = report.value;
  a.neighbors = report.neighbors;
  return copy;
}

template <class M>
std::vector<Money> base_cost_grid(const M& instance, AgentId agent, int refinement) {
  using T = Traits<M>;
  const Money cap = T::cap(instance, agent);
  std::vector<Money> pts{Money{}, cap, T::value(instance.agent(agent))};
  for (const auto& [id, a] : instance.agents)
    if (id != agent) pts.push_back(T::value(a));
  T::anchors(instance, pts);
  std::erase_if(pts, [&](const Money& m) { return m.is_negative() || m > cap; });
  sort_unique(pts);

  std::vector<Money> grid = pts;
  for (std::size_t i = 1; i < pts.size(); ++i) grid.push_back(midpoint(pts[i - 1], pts[i]));
  sort_unique(grid);
  if (refinement > 1) {
    std::vector<Money> fine = grid;
    for (std::size_t i = 1; i < grid.size(); ++i)
      for (int k = 1; k < refinement; ++k)
        fine.push_back(grid[i - 1] + (grid[i] - grid[i - 1]) * Money(k, refinement));
    sort_unique(fine);
    grid = std::move(fine);
  }
  grid.push_back(cap + Money(1));  // reporting beyond every reserve
  return grid;
}

template <class M>
CheckResult check_ir(const Mechanism<M>& mechanism, const M& instance) {
  CheckResult r;
  Outcome o = mechanism(instance);
  r.evaluations = 1;
  for (const auto& [id, units] : o.allocation) {
    const auto& truth = instance.agent(id);
    Money u = Traits<M>::utility(o, id, truth);
    if (!u.is_negative()) continue;
    ReportedType t{Traits<M>::value(truth), truth.neighbors};
    r.witness = DeviationWitness{Property::IndividualRationality, id, t, t, t, units, units, u, u};
    break;
  }
  return r;
}

template <class M>
CheckResult check_wbb(const Mechanism<M>& mechanism, const M& instance) {
  CheckResult r;
  Outcome o = mechanism(instance);
  r.evaluations = 1;
  Money s = Traits<M>::surplus(o, instance);
  if (s.is_negative()) r.witness = DeviationWitness{Property::WeakBudgetBalance, kRequester, {}, {}, {}, 0, 0, s, s};
  return r;
}

template <class M>
CheckResult check_ic(const Mechanism<M>& mechanism, const M& instance, AgentId agent, const FuzzOptions& options) {
  DeviationTable<M> table(mechanism, instance, agent, options);
  return from_table(table, table.incentive_witness());
}

template <class M>
CheckResult check_value_monotone(const Mechanism<M>& mechanism, const M& instance, AgentId agent,
                                 const FuzzOptions& options) {
  DeviationTable<M> table(mechanism, instance, agent, options);
  return from_table(table, table.value_witness());
}

template <class M>
CheckResult check_diffusion_monotone(const Mechanism<M>& mechanism, const M& instance, AgentId agent,
                                     const FuzzOptions& options) {
  DeviationTable<M> table(mechanism, instance, agent, options);
  auto w = table.diffusion_witness();
  return from_table(table, std::move(w));
}

template <class M>
FuzzReport fuzz_instance(const Mechanism<M>& mechanism, const M& instance, const FuzzOptions& options) {
  FuzzReport report;
  for (const CheckResult& r : {check_ir(mechanism, instance), check_wbb(mechanism, instance)}) {
    report.evaluations += r.evaluations;
    if (r.witness) report.witnesses.push_back(*r.witness);
  }
  for (AgentId agent : fuzzable_agents(instance)) {
    DeviationTable<M> table(mechanism, instance, agent, options);
    for (auto w : {table.incentive_witness(), table.value_witness(), table.diffusion_witness()})
      if (w) report.witnesses.push_back(*w);
    report.sampled = report.sampled || table.sampled();
    report.evaluations += table.evaluations();
  }
  std::sort(report.witnesses.begin(), report.witnesses.end(), witness_less);
  return report;
}

template <class M>
bool replay_witness(const Mechanism<M>& mechanism, const M& instance, const DeviationWitness& w) {
  if (w.property == Property::WeakBudgetBalance) {
    Outcome o = mechanism(instance);
    return Traits<M>::surplus(o, instance) == w.deviant_utility;
  }
  const auto& truth = instance.agent(w.agent);
  auto side = [&](const ReportedType& report) {
    return evaluate(mechanism, with_report(instance, w.agent, report), w.agent, truth);
  };
  Eval ref = side(w.reference_type);
  Eval rep = side(w.reported_type);
  return ref.allocation == w.reference_allocation && rep.allocation == w.reported_allocation &&
         ref.utility == w.truthful_utility && rep.utility == w.deviant_utility;
}

#define NETAUCTION_INSTANTIATE_FUZZER(M)                                                                  \
  template M with_report(const M&, AgentId, const ReportedType&);                                         \
  template std::vector<Money> base_cost_grid(const M&, AgentId, int);                                     \
  template CheckResult check_ir(const Mechanism<M>&, const M&);                                           \
  template CheckResult check_wbb(const Mechanism<M>&, const M&);                                          \
  template CheckResult check_ic(const Mechanism<M>&, const M&, AgentId, const FuzzOptions&);              \
  template CheckResult check_value_monotone(const Mechanism<M>&, const M&, AgentId, const FuzzOptions&);  \
  template CheckResult check_diffusion_monotone(const Mechanism<M>&, const M&, AgentId, const FuzzOptions&); \
  template FuzzReport fuzz_instance(const Mechanism<M>&, const M&, const FuzzOptions&);                   \
  template bool replay_witness(const Mechanism<M>&, const M&, const DeviationWitness&);

NETAUCTION_INSTANTIATE_FUZZER(HomogeneousInstance)
NETAUCTION_INSTANTIATE_FUZZER(HeterogeneousInstance)
NETAUCTION_INSTANTIATE_FUZZER(ForwardInstance)

}  // namespace netauction
