#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "netauction/corpus.hpp"
#include "netauction/forward.hpp"
#include "netauction/fuzzer.hpp"
#include "netauction/heterogeneous.hpp"
#include "netauction/homogeneous.hpp"
#include "netauction/instance_io.hpp"
#include "netauction/mechanisms.hpp"
#include "netauction/network.hpp"
#include "netauction/oracles.hpp"
#include "netauction/simulation.hpp"

using namespace netauction;
using nlohmann::json;

namespace {

enum Exit : int {
  kOk = 0,
  kViolation = 1,
  kParse = 2,
  kMismatch = 3,
  kOversized = 4,
  kUsage = 64,
  kInternal = 70,
};

std::optional<std::uint64_t> env_seed() {
  const char* s = std::getenv("NETAUCTION_SEED");
  if (s == nullptr || *s == '\0') return std::nullopt;
  try {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used, 0);
    if (used != std::string(s).size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw CLI::ValidationError("NETAUCTION_SEED", std::string("not an integer: ") + s);
  }
}

struct Loaded {
  AnyInstance instance;
  InstanceVariant variant;
};

// Returns an exit code on failure.
std::variant<Loaded, int> load(const std::string& path) {
  try {
    AnyInstance inst = load_instance(path);
    const auto v = variant_of(inst);
    return Loaded{std::move(inst), v};
  } catch (const ParseError& e) {
    std::cerr << path << ":" << e.line() << ":" << e.column() << ": " << e.what() << "\n";
    return kParse;
  }
}

std::optional<int> check_mechanism(const std::string& mechanism, std::optional<InstanceVariant> want) {
  const auto v = mechanism_variant(mechanism);
  if (!v) {
    std::cerr << "unknown mechanism '" << mechanism << "'\n";
    return kUsage;
  }
  if (want && *v != *want) {
    std::cerr << "mechanism '" << mechanism << "' expects a " << to_string(*v) << " instance, got "
              << to_string(*want) << "\n";
    return kMismatch;
  }
  return std::nullopt;
}

template <class M>
json outcome_json(const std::string& mechanism, const Outcome& o, const M& instance) {
  json j;
  j["mechanism"] = mechanism;
  json winners = json::array();
  for (AgentId w : o.winners()) winners.push_back(instance.name_of(w));
  j["winners"] = winners;
  json alloc = json::object(), pay = json::object();
  for (const auto& [id, units] : o.allocation) alloc[instance.name_of(id)] = units;
  for (const auto& [id, x] : o.payments) pay[instance.name_of(id)] = x.to_string();
  j["allocation"] = alloc;
  j["payments"] = pay;
  if constexpr (std::is_same_v<M, ForwardInstance>) {
    Money welfare;
    for (AgentId w : o.winners()) welfare += instance.agent(w).valuation;
    j["social_welfare"] = welfare.to_string();
    j["revenue"] = (-o.total_payments()).to_string();
  } else {
    j["social_cost"] = social_cost(o, instance).to_string();
    j["expenditure"] = requester_cost(o, instance).to_string();
    j["budget"] = budget(instance).to_string();
    j["requester_utility"] = requester_surplus(o, instance).to_string();
    if constexpr (std::is_same_v<M, HomogeneousInstance>)
      j["self_supplied_units"] = o.self_supplied_units;
    else
      j["self_supplied_tasks"] = o.self_supplied_tasks.count();
  }
  return j;
}

template <class M>
void print_outcome(const std::string& mechanism, const Outcome& o, const M& instance) {
  std::cout << "mechanism: " << mechanism << "\nwinners:";
  for (AgentId w : o.winners()) std::cout << " " << instance.name_of(w);
  std::cout << "\n";
  for (const auto& [id, units] : o.allocation) {
    std::cout << "  " << instance.name_of(id) << "  allocation " << units << "  payment " << o.payment(id).to_string();
    if constexpr (std::is_same_v<M, HomogeneousInstance>)
      std::cout << "  utility " << utility_hm(o, id, instance.agent(id)).to_string();
    else if constexpr (std::is_same_v<M, HeterogeneousInstance>)
      std::cout << "  utility " << utility_ht(o, id, instance.agent(id)).to_string();
    else
      std::cout << "  utility " << utility_forward(o, id, instance.agent(id)).to_string();
    std::cout << "\n";
  }
  const json j = outcome_json(mechanism, o, instance);
  for (const char* key : {"social_cost", "expenditure", "budget", "requester_utility", "social_welfare", "revenue"})
    if (j.contains(key)) std::cout << key << ": " << j[key].get<std::string>() << "\n";
}

int cmd_run(const std::string& path, const std::string& mechanism, bool as_json) {
  if (auto code = check_mechanism(mechanism, std::nullopt)) return *code;
  auto loaded = load(path);
  if (auto* code = std::get_if<int>(&loaded)) return *code;
  auto& [instance, variant] = std::get<Loaded>(loaded);
  if (auto code = check_mechanism(mechanism, variant)) return *code;

  auto show = [&](const auto& m, const Outcome& o) {
    if (as_json)
      std::cout << outcome_json(mechanism, o, m).dump(2) << "\n";
    else
      print_outcome(mechanism, o, m);
  };
  std::visit(
      [&](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, HomogeneousInstance>)
          show(m, homogeneous_mechanism(mechanism)(m));
        else if constexpr (std::is_same_v<M, HeterogeneousInstance>)
          show(m, heterogeneous_mechanism(mechanism)(m));
        else
          show(m, forward_mechanism(mechanism)(m));
      },
      instance);
  return kOk;
}

struct FuzzArgs {
  std::string mechanism;
  std::string instance_path;
  std::size_t random = 0;
  bool exhaustive = false;
  std::optional<std::size_t> samples;
  std::uint64_t seed = 7;
  unsigned threads = 0;
  int max_suppliers = 8;
};

template <class M>
Mechanism<M> mechanism_for(const std::string& name) {
  if constexpr (std::is_same_v<M, HomogeneousInstance>)
    return homogeneous_mechanism(name);
  else if constexpr (std::is_same_v<M, HeterogeneousInstance>)
    return heterogeneous_mechanism(name);
  else
    return forward_mechanism(name);
}

template <class M>
std::vector<M> corpus_for(std::size_t count, std::uint64_t seed, const CorpusOptions& options) {
  if constexpr (std::is_same_v<M, HomogeneousInstance>)
    return homogeneous_corpus(count, seed, options);
  else if constexpr (std::is_same_v<M, HeterogeneousInstance>)
    return heterogeneous_corpus(count, seed, options);
  else
    return forward_corpus(count, seed, options);
}

template <class M>
int fuzz_many(const FuzzArgs& args, const std::vector<M>& instances, bool tag_instances) {
  const auto mech = mechanism_for<M>(args.mechanism);
  FuzzOptions options;
  options.seed = args.seed;
  options.samples = args.samples;

  std::vector<FuzzReport> reports(instances.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < instances.size(); i = next++) reports[i] = fuzz_instance(mech, instances[i], options);
  };
  unsigned threads = args.threads ? args.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(instances.size(), 1)));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }

  std::size_t violations = 0, evaluations = 0, sampled = 0;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto& r = reports[i];
    evaluations += r.evaluations;
    if (r.sampled) ++sampled;
    const auto& inst = instances[i];
    for (const auto& w : r.witnesses) {
      ++violations;
      const std::string body = witness_to_json(w, [&](AgentId id) { return inst.name_of(id); });
      if (tag_instances)
        std::cout << "{\"instance\":" << i << ",\"witness\":" << body << "}\n";
      else
        std::cout << body << "\n";
    }
  }
  std::cerr << "fuzz " << args.mechanism << ": " << instances.size() << " instance(s), " << evaluations
            << " mechanism runs, " << violations << " witness(es)";
  if (sampled) std::cerr << ", " << sampled << " instance(s) sampled rather than enumerated";
  std::cerr << "\n";
  return violations ? kViolation : kOk;
}

int cmd_fuzz(FuzzArgs args) {
  if (auto code = check_mechanism(args.mechanism, std::nullopt)) return *code;
  if (auto s = env_seed()) args.seed = *s;
  if (args.exhaustive) args.samples.reset();
  const InstanceVariant want = *mechanism_variant(args.mechanism);

  if (!args.instance_path.empty()) {
    auto loaded = load(args.instance_path);
    if (auto* code = std::get_if<int>(&loaded)) return *code;
    auto& [instance, variant] = std::get<Loaded>(loaded);
    if (auto code = check_mechanism(args.mechanism, variant)) return *code;
    return std::visit(
        [&](const auto& m) {
          using M = std::decay_t<decltype(m)>;
          return fuzz_many<M>(args, std::vector<M>{m}, false);
        },
        instance);
  }

  CorpusOptions options;
  options.max_suppliers = args.max_suppliers;
  switch (want) {
    case InstanceVariant::Homogeneous:
      return fuzz_many(args, corpus_for<HomogeneousInstance>(args.random, args.seed, options), true);
    case InstanceVariant::Heterogeneous:
      return fuzz_many(args, corpus_for<HeterogeneousInstance>(args.random, args.seed, options), true);
    case InstanceVariant::Forward:
      return fuzz_many(args, corpus_for<ForwardInstance>(args.random, args.seed, options), true);
  }
  return kUsage;
}

int cmd_sweep(const std::string& config_path, const std::string& out_path, unsigned threads, bool no_timing) {
  ExperimentConfig config;
  try {
    config = load_experiment_config(config_path);
  } catch (const std::invalid_argument& e) {
    std::cerr << config_path << ": " << e.what() << "\n";
    return kParse;
  }
  if (auto s = env_seed()) config.base_seed = *s;
  if (no_timing) config.record_time = false;
  if (config.variant == InstanceVariant::Homogeneous)
    std::cerr << "note: homogeneous reserve price per unit is " << config.reserve_unit.to_string() << "\n";

  const auto records = run_sweep(config, threads);
  std::size_t errors = 0;
  for (const auto& r : records)
    if (!r.error.empty()) {
      if (errors++ < 10)
        std::cerr << "run failed (point " << r.point << ", rep " << r.rep << ", " << r.mechanism << "): " << r.error
                  << "\n";
    }
  if (errors) std::cerr << errors << " run(s) failed and were left out of the CSV\n";

  if (out_path == "-") {
    write_csv(std::cout, records);
  } else {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "cannot write " << out_path << "\n";
      return kUsage;
    }
    write_csv(out, records);
  }
  return kOk;
}

int cmd_oracle(const std::string& path, std::string mechanism) {
  auto loaded = load(path);
  if (auto* code = std::get_if<int>(&loaded)) return *code;
  auto& [instance, variant] = std::get<Loaded>(loaded);
  if (variant == InstanceVariant::Forward) {
    std::cerr << "no cost oracle for forward auctions\n";
    return kMismatch;
  }
  if (mechanism.empty()) mechanism = variant == InstanceVariant::Homogeneous ? "ran-hm" : "ran-ht";
  if (auto code = check_mechanism(mechanism, variant)) return *code;

  try {
    if (variant == InstanceVariant::Homogeneous) {
      const auto& m = std::get<HomogeneousInstance>(instance);
      std::vector<UnitOffer> offers;
      for (AgentId id : reachable_market(m).members()) {
        const auto& s = m.agent(id);
        offers.push_back({id, s.ability, s.unit_cost});
      }
      const UnitAllocation best = min_cost_multiunit_oracle(offers, m.requester.demand, m.requester.reserve_unit);
      const Money got = social_cost(homogeneous_mechanism(mechanism)(m), m);
      std::cout << "mechanism " << mechanism << " social_cost " << got.to_string() << "\noracle social_cost "
                << best.cost.to_string() << "\ngap " << (got - best.cost).to_string() << "\n";
    } else {
      const auto& m = std::get<HeterogeneousInstance>(instance);
      const SetCoverSolution best = min_social_cost_ht(m);
      const Money got = social_cost(heterogeneous_mechanism(mechanism)(m), m);
      std::cout << "mechanism " << mechanism << " social_cost " << got.to_string() << "\noracle social_cost "
                << best.cost.to_string() << "\noracle winners:";
      for (AgentId w : best.winners) std::cout << " " << m.name_of(w);
      std::cout << "\ngap " << (got - best.cost).to_string() << "\n";
    }
  } catch (const OracleSizeError& e) {
    std::cerr << "instance too large for exhaustive search: " << e.what() << "\n";
    return kOversized;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Diffusion reverse auctions on social networks"};
  app.require_subcommand(1);

  std::string path, mechanism, out_path, oracle_mechanism;
  bool as_json = false;
  auto* run = app.add_subcommand("run", "Run a mechanism on an instance file");
  run->add_option("instance", path, "Instance file")->required();
  run->add_option("mechanism", mechanism, "Mechanism name")->required();
  run->add_flag("--json", as_json, "Print the outcome as JSON");

  FuzzArgs fuzz;
  auto* fz = app.add_subcommand("fuzz", "Search for strategic deviations that break IR, IC, WBB or monotonicity");
  fz->add_option("mechanism", fuzz.mechanism, "Mechanism name")->required();
  auto* inst_opt = fz->add_option("instance", fuzz.instance_path, "Instance file");
  auto* rand_opt = fz->add_option("--random", fuzz.random, "Fuzz this many random instances instead");
  inst_opt->excludes(rand_opt);
  auto* exh = fz->add_flag("--exhaustive", fuzz.exhaustive, "Enumerate every invitation subset (default)");
  fz->add_option("--samples", fuzz.samples, "Sample this many deviations per agent")->excludes(exh);
  fz->add_option("--seed", fuzz.seed, "Random seed (NETAUCTION_SEED overrides)");
  fz->add_option("--threads", fuzz.threads, "Worker threads (0 = all cores)");
  fz->add_option("--max-suppliers", fuzz.max_suppliers, "Largest random instance")->check(CLI::Range(1, 20));

  unsigned sweep_threads = 0;
  bool no_timing = false;
  auto* sw = app.add_subcommand("sweep", "Run a simulation sweep and write CSV");
  sw->add_option("config", path, "Experiment config")->required();
  sw->add_option("out", out_path, "Output CSV ('-' for stdout)")->required();
  sw->add_option("--threads", sweep_threads, "Worker threads (0 = all cores)");
  sw->add_flag("--no-timing", no_timing, "Write ms = 0 so output is byte-reproducible");

  auto* orc = app.add_subcommand("oracle", "Compare a mechanism's social cost with the exhaustive optimum");
  orc->add_option("instance", path, "Instance file")->required();
  orc->add_option("--mechanism", oracle_mechanism, "Mechanism to compare (default ran-hm or ran-ht)");

  try {
    app.parse(argc, argv);
    if (*fz && fuzz.instance_path.empty() && fuzz.random == 0)
      throw CLI::ValidationError("fuzz", "give an instance file or --random N");
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*run) return cmd_run(path, mechanism, as_json);
    if (*fz) return cmd_fuzz(fuzz);
    if (*sw) return cmd_sweep(path, out_path, sweep_threads, no_timing);
    if (*orc) return cmd_oracle(path, oracle_mechanism);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}
