#include "netauction/corpus.hpp"

#include <algorithm>
#include <numeric>

namespace netauction {

namespace {

std::int64_t uniform(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

bool flip(std::mt19937_64& rng, double p) { return std::bernoulli_distribution(p)(rng); }

Money lattice(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi, std::int64_t den) {
  return Money(uniform(rng, lo * den, hi * den), den);
}

// Random directed invitation graph over ids 1..n, with at least one root.
template <class M>
void wire(M& m, int n, std::mt19937_64& rng, const CorpusOptions& o) {
  for (int i = 1; i <= n; ++i) {
    AgentId id{static_cast<std::uint32_t>(i)};
    if (flip(rng, o.root_prob)) m.requester.neighbors.insert(id);
    m.names[id] = "s" + std::to_string(i);
  }
  if (m.requester.neighbors.empty()) m.requester.neighbors.insert(AgentId{static_cast<std::uint32_t>(uniform(rng, 1, n))});
  for (auto& [id, a] : m.agents)
    for (int j = 1; j <= n; ++j)
      if (static_cast<std::uint32_t>(j) != id.value && flip(rng, o.edge_prob))
        a.neighbors.insert(AgentId{static_cast<std::uint32_t>(j)});
}

int supplier_count(std::mt19937_64& rng, const CorpusOptions& o) {
  return static_cast<int>(uniform(rng, o.min_suppliers, o.max_suppliers));
}

}  // namespace

HomogeneousInstance random_homogeneous_instance(std::mt19937_64& rng, const CorpusOptions& o) {
  HomogeneousInstance m;
  int n = supplier_count(rng, o);
  m.requester.demand = uniform(rng, 1, o.max_demand);
  m.requester.reserve_unit = Money(uniform(rng, 2, 10));
  for (int i = 1; i <= n; ++i) {
    SupplierHM s;
    s.ability = uniform(rng, 0, o.max_ability);
    s.unit_cost = lattice(rng, 0, 12, o.value_denominator);
    m.agents[AgentId{static_cast<std::uint32_t>(i)}] = s;
  }
  wire(m, n, rng, o);
  return m;
}

HeterogeneousInstance random_heterogeneous_instance(std::mt19937_64& rng, const CorpusOptions& o) {
  HeterogeneousInstance m;
  int n = supplier_count(rng, o);
  auto tasks = static_cast<std::size_t>(uniform(rng, 1, o.max_tasks));
  for (std::size_t t = 0; t < tasks; ++t) {
    m.requester.task_names.push_back("t" + std::to_string(t + 1));
    m.requester.reserve.push_back(Money(uniform(rng, 1, 8)));
  }
  std::vector<TaskIndex> all(tasks);
  std::iota(all.begin(), all.end(), TaskIndex{0});
  for (int i = 1; i <= n; ++i) {
    SupplierHT s;
    auto size = static_cast<std::size_t>(uniform(rng, 1, std::min<std::int64_t>(o.max_bundle, static_cast<std::int64_t>(tasks))));
    std::sample(all.begin(), all.end(), std::back_inserter(s.bundle), size, rng);
    s.total_cost = lattice(rng, 0, 14, o.value_denominator);
    m.agents[AgentId{static_cast<std::uint32_t>(i)}] = s;
  }
  wire(m, n, rng, o);
  return m;
}

ForwardInstance random_forward_instance(std::mt19937_64& rng, const CorpusOptions& o) {
  ForwardInstance m;
  int n = supplier_count(rng, o);
  m.requester.units = uniform(rng, 1, std::max(1, n / 2));
  for (int i = 1; i <= n; ++i) {
    Bidder b;
    b.valuation = lattice(rng, 0, 10, o.value_denominator);
    m.agents[AgentId{static_cast<std::uint32_t>(i)}] = b;
  }
  wire(m, n, rng, o);
  return m;
}

namespace {
template <class M, class Gen>
std::vector<M> corpus(std::size_t count, std::uint64_t seed, const CorpusOptions& o, Gen gen) {
  std::mt19937_64 rng(seed);
  std::vector<M> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(gen(rng, o));
  return out;
}
}  // namespace

std::vector<HomogeneousInstance> homogeneous_corpus(std::size_t count, std::uint64_t seed, const CorpusOptions& o) {
  return corpus<HomogeneousInstance>(count, seed, o, random_homogeneous_instance);
}

std::vector<HeterogeneousInstance> heterogeneous_corpus(std::size_t count, std::uint64_t seed,
                                                        const CorpusOptions& o) {
  return corpus<HeterogeneousInstance>(count, seed, o, random_heterogeneous_instance);
}

std::vector<ForwardInstance> forward_corpus(std::size_t count, std::uint64_t seed, const CorpusOptions& o) {
  return corpus<ForwardInstance>(count, seed, o, random_forward_instance);
}

}  // namespace netauction
