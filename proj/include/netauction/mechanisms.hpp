#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "netauction/fuzzer.hpp"
#include "netauction/model.hpp"

namespace netauction {

enum class InstanceVariant { Homogeneous, Heterogeneous, Forward };

std::string to_string(InstanceVariant v);

struct MechanismInfo {
  std::string name;
  InstanceVariant variant;
};

// ran-hm, d-vcg, nd-vcg, non-monotone, ran-ht, local-greedy, idm, dna-mu
const std::vector<MechanismInfo>& mechanism_registry();
std::optional<InstanceVariant> mechanism_variant(std::string_view name);

// Throw std::invalid_argument for unknown names or the wrong variant.
Mechanism<HomogeneousInstance> homogeneous_mechanism(std::string_view name);
Mechanism<HeterogeneousInstance> heterogeneous_mechanism(std::string_view name);
Mechanism<ForwardInstance> forward_mechanism(std::string_view name);

}  // namespace netauction
