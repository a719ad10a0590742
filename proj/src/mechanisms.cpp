#include "netauction/mechanisms.hpp"

#include <stdexcept>

#include "netauction/forward.hpp"
#include "netauction/heterogeneous.hpp"
#include "netauction/homogeneous.hpp"

namespace netauction {

std::string to_string(InstanceVariant v) {
  switch (v) {
    case InstanceVariant::Homogeneous: return "homogeneous";
    case InstanceVariant::Heterogeneous: return "heterogeneous";
    case InstanceVariant::Forward: return "forward";
  }
  return "?";
}

const std::vector<MechanismInfo>& mechanism_registry() {
  static const std::vector<MechanismInfo> registry{
      {"ran-hm", InstanceVariant::Homogeneous},     {"d-vcg", InstanceVariant::Homogeneous},
      {"nd-vcg", InstanceVariant::Homogeneous},     {"non-monotone", InstanceVariant::Homogeneous},
      {"ran-ht", InstanceVariant::Heterogeneous},   {"local-greedy", InstanceVariant::Heterogeneous},
      {"idm", InstanceVariant::Forward},            {"dna-mu", InstanceVariant::Forward},
  };
  return registry;
}

std::optional<InstanceVariant> mechanism_variant(std::string_view name) {
  for (const auto& m : mechanism_registry())
    if (m.name == name) return m.variant;
  return std::nullopt;
}

namespace {
[[noreturn]] void unknown(std::string_view name, InstanceVariant want) {
  throw std::invalid_argument("'" + std::string(name) + "' is not a " + to_string(want) + " mechanism");
}
}  // namespace

Mechanism<HomogeneousInstance> homogeneous_mechanism(std::string_view name) {
  if (name == "ran-hm") return [](const HomogeneousInstance& m) { return ran_hm(m); };
  if (name == "d-vcg") return [](const HomogeneousInstance& m) { return d_vcg(m); };
  if (name == "nd-vcg") return [](const HomogeneousInstance& m) { return nd_vcg(m); };
  if (name == "non-monotone") return [](const HomogeneousInstance& m) { return non_monotone_auction(m); };
  unknown(name, InstanceVariant::Homogeneous);
}

Mechanism<HeterogeneousInstance> heterogeneous_mechanism(std::string_view name) {
  if (name == "ran-ht") return [](const HeterogeneousInstance& m) { return ran_ht(m); };
  if (name == "local-greedy") return [](const HeterogeneousInstance& m) { return local_greedy(m); };
  unknown(name, InstanceVariant::Heterogeneous);
}

Mechanism<ForwardInstance> forward_mechanism(std::string_view name) {
  if (name == "idm") return [](const ForwardInstance& m) { return idm(m); };
  if (name == "dna-mu") return [](const ForwardInstance& m) { return dna_mu(m); };
  unknown(name, InstanceVariant::Forward);
}

}  // namespace netauction
