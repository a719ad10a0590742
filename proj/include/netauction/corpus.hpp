#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "netauction/model.hpp"

namespace netauction {

// Small random instances for exhaustive property checks. Values are drawn on a
// coarse rational lattice so ties and exact boundaries actually occur.
struct CorpusOptions {
  int min_suppliers = 1;
  int max_suppliers = 8;
  double edge_prob = 0.3;
  double root_prob = 0.4;  // chance the requester invites a given supplier
  std::int64_t max_demand = 8;
  std::int64_t max_ability = 4;
  int max_tasks = 6;
  int max_bundle = 3;
  std::int64_t value_denominator = 2;
};

HomogeneousInstance random_homogeneous_instance(std::mt19937_64& rng, const CorpusOptions& options = {});
HeterogeneousInstance random_heterogeneous_instance(std::mt19937_64& rng, const CorpusOptions& options = {});
ForwardInstance random_forward_instance(std::mt19937_64& rng, const CorpusOptions& options = {});

std::vector<HomogeneousInstance> homogeneous_corpus(std::size_t count, std::uint64_t seed,
                                                    const CorpusOptions& options = {});
std::vector<HeterogeneousInstance> heterogeneous_corpus(std::size_t count, std::uint64_t seed,
                                                        const CorpusOptions& options = {});
std::vector<ForwardInstance> forward_corpus(std::size_t count, std::uint64_t seed, const CorpusOptions& options = {});

}  // namespace netauction
