#include "netauction/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "netauction/heterogeneous.hpp"
#include "netauction/homogeneous.hpp"

namespace netauction {

namespace {

struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(int size) : parent(static_cast<std::size_t>(size)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Uniform rational on [lo, hi] with denominator 1000.
Money milli_uniform(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  std::uniform_int_distribution<std::int64_t> d(lo * 1000, hi * 1000);
  return Money(d(rng), 1000);
}

std::vector<std::vector<int>> adjacency(const SocialGraph& graph) {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(graph.n) + 1);
  for (auto [a, b] : graph.edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  return adj;
}

NeighborSet neighbor_ids(const std::vector<int>& nodes, int self) {
  NeighborSet out;
  for (int v : nodes)
    if (v != self) out.insert(AgentId{static_cast<std::uint32_t>(v)});
  return out;
}

}  // namespace

bool is_connected(const SocialGraph& graph) {
  DisjointSets sets(graph.n + 1);
  int components = graph.n + 1;
  for (auto [a, b] : graph.edges)
    if (sets.unite(a, b)) --components;
  return components == 1;
}

SocialGraph gen_random_graph(const GraphConfig& config) {
  if (config.n < 1) throw std::invalid_argument("graph needs at least one supplier");
  if (!(config.prob >= 0.0 && config.prob <= 1.0)) throw std::invalid_argument("edge probability must be in [0,1]");
  std::mt19937_64 rng(config.seed);
  std::bernoulli_distribution coin(config.prob);
  const int nodes = config.n + 1;
  SocialGraph g{config.n, {}};
  for (std::uint64_t attempt = 0; attempt < kMaxGraphAttempts; ++attempt) {
    g.edges.clear();
    DisjointSets sets(nodes);
    int components = nodes;
    for (int i = 0; i < nodes; ++i)
      for (int j = i + 1; j < nodes; ++j)
        if (coin(rng)) {
          g.edges.emplace_back(i, j);
          if (sets.unite(i, j)) --components;
        }
    if (components == 1) return g;
  }
  throw std::runtime_error("no connected graph after " + std::to_string(kMaxGraphAttempts) + " attempts (n=" +
                           std::to_string(config.n) + ", prob=" + std::to_string(config.prob) + ")");
}

SocialGraph gen_complete_graph(int n) {
  if (n < 1) throw std::invalid_argument("graph needs at least one supplier");
  SocialGraph g{n, {}};
  for (int i = 0; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) g.edges.emplace_back(i, j);
  return g;
}

SocialGraph gen_random_tree(int n, std::mt19937_64& rng) {
  if (n < 1) throw std::invalid_argument("graph needs at least one supplier");
  SocialGraph g{n, {}};
  for (int i = 1; i <= n; ++i) {
    std::uniform_int_distribution<int> parent(0, i - 1);
    g.edges.emplace_back(parent(rng), i);
  }
  return g;
}

HomogeneousInstance gen_instance_hm(const SocialGraph& graph, std::int64_t demand, std::mt19937_64& rng,
                                    const Money& reserve_unit) {
  auto adj = adjacency(graph);
  HomogeneousInstance m;
  m.requester.demand = demand;
  m.requester.reserve_unit = reserve_unit;
  m.requester.neighbors = neighbor_ids(adj[0], 0);
  m.requester.neighbors.erase(kRequester);
  std::uniform_int_distribution<std::int64_t> ability(1, 10);
  for (int i = 1; i <= graph.n; ++i) {
    SupplierHM s;
    s.ability = ability(rng);
    s.unit_cost = milli_uniform(rng, 1, 10);
    s.neighbors = neighbor_ids(adj[i], i);
    s.neighbors.erase(kRequester);
    AgentId id{static_cast<std::uint32_t>(i)};
    m.names[id] = "s" + std::to_string(i);
    m.agents.emplace(id, std::move(s));
  }
  return m;
}

HeterogeneousInstance gen_instance_ht(const SocialGraph& graph, std::size_t tasks, std::mt19937_64& rng) {
  if (tasks < 2) {
    static std::atomic<bool> warned{false};
    if (!warned.exchange(true))
      std::cerr << "warning: fewer than 2 tasks; bundle sizes are capped at " << tasks << "\n";
  }
  auto adj = adjacency(graph);
  HeterogeneousInstance m;
  for (std::size_t t = 0; t < tasks; ++t) {
    m.requester.task_names.push_back("t" + std::to_string(t + 1));
    m.requester.reserve.push_back(milli_uniform(rng, 1, 10));
  }
  m.requester.neighbors = neighbor_ids(adj[0], 0);
  m.requester.neighbors.erase(kRequester);

  std::vector<TaskIndex> all(tasks);
  std::iota(all.begin(), all.end(), TaskIndex{0});
  std::uniform_int_distribution<std::size_t> size(2, 10);
  for (int i = 1; i <= graph.n; ++i) {
    SupplierHT s;
    const std::size_t k = std::min(size(rng), tasks);
    // partial Fisher-Yates
    for (std::size_t j = 0; j < k; ++j) {
      std::uniform_int_distribution<std::size_t> pick(j, tasks - 1);
      std::swap(all[j], all[pick(rng)]);
    }
    s.bundle.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(s.bundle.begin(), s.bundle.end());
    s.total_cost = milli_uniform(rng, 5, 20);
    s.neighbors = neighbor_ids(adj[i], i);
    s.neighbors.erase(kRequester);
    AgentId id{static_cast<std::uint32_t>(i)};
    m.names[id] = "s" + std::to_string(i);
    m.agents.emplace(id, std::move(s));
  }
  return m;
}

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::Prob: return "prob";
    case SweepAxis::Tasks: return "tasks";
    case SweepAxis::Suppliers: return "suppliers";
  }
  return "?";
}

std::string to_string(Topology topology) {
  switch (topology) {
    case Topology::Random: return "random";
    case Topology::Complete: return "complete";
    case Topology::Tree: return "tree";
  }
  return "?";
}

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");

  ExperimentConfig c;
  try {
    c.name = j.value("name", std::string{});
    const std::string variant = j.value("variant", std::string("homogeneous"));
    if (variant == "homogeneous")
      c.variant = InstanceVariant::Homogeneous;
    else if (variant == "heterogeneous")
      c.variant = InstanceVariant::Heterogeneous;
    else
      throw std::invalid_argument("variant must be homogeneous or heterogeneous");

    const std::string topology = j.value("topology", std::string("random"));
    if (topology == "random")
      c.topology = Topology::Random;
    else if (topology == "complete")
      c.topology = Topology::Complete;
    else if (topology == "tree")
      c.topology = Topology::Tree;
    else
      throw std::invalid_argument("unknown topology '" + topology + "'");

    c.prob = j.value("prob", 0.05);
    c.repetitions = j.value("repetitions", 20);
    if (c.repetitions < 1) throw std::invalid_argument("repetitions must be at least 1");
    c.base_seed = j.value("seed", std::uint64_t{1});
    c.record_time = j.value("record_time", true);
    if (j.contains("reserve")) {
      const auto& r = j["reserve"];
      c.reserve_unit = r.is_string() ? Money::parse(r.get<std::string>())
                       : r.is_number_integer() ? Money(r.get<std::int64_t>())
                                               : Money::from_double(r.get<double>());
    }

    if (j.contains("sweep")) {
      const auto& s = j["sweep"];
      const std::string axis = s.value("axis", std::string("prob"));
      if (axis == "prob")
        c.axis = SweepAxis::Prob;
      else if (axis == "tasks")
        c.axis = SweepAxis::Tasks;
      else if (axis == "suppliers")
        c.axis = SweepAxis::Suppliers;
      else
        throw std::invalid_argument("unknown sweep axis '" + axis + "'");
      if (s.contains("values")) {
        c.points = s["values"].get<std::vector<double>>();
      } else {
        const double from = s.at("from").get<double>();
        const double to = s.at("to").get<double>();
        const double step = s.at("step").get<double>();
        if (!(step > 0) || to < from) throw std::invalid_argument("sweep needs from <= to and a positive step");
        const auto count = static_cast<std::size_t>(std::floor((to - from) / step + 1e-9)) + 1;
        for (std::size_t k = 0; k < count; ++k) {
          // round away accumulated binary noise so 0.05 + 6*0.02 prints as 0.17
          c.points.push_back(std::round((from + static_cast<double>(k) * step) * 1e9) / 1e9);
        }
      }
    } else {
      c.axis = SweepAxis::Prob;
      c.points = {c.prob};
    }
    if (c.points.empty()) throw std::invalid_argument("sweep has no points");

    if (j.contains("sizes")) {
      for (const auto& s : j["sizes"]) c.sizes.push_back({s.at("n").get<int>(), s.value("tasks", 0)});
    }
    if (c.sizes.empty()) throw std::invalid_argument("config needs at least one market size");

    if (j.contains("mechanisms")) {
      c.mechanisms = j["mechanisms"].get<std::vector<std::string>>();
    } else if (c.variant == InstanceVariant::Homogeneous) {
      c.mechanisms = {"nd-vcg", "d-vcg", "ran-hm"};
    } else {
      c.mechanisms = {"local-greedy", "ran-ht"};
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad config field: ") + e.what());
  }

  for (const auto& m : c.mechanisms) {
    auto v = mechanism_variant(m);
    if (!v) throw std::invalid_argument("unknown mechanism '" + m + "'");
    if (*v != c.variant) throw std::invalid_argument("mechanism '" + m + "' does not fit variant " + to_string(c.variant));
  }
  for (double p : c.points) {
    if (c.axis == SweepAxis::Prob && !(p >= 0 && p <= 1)) throw std::invalid_argument("prob points must lie in [0,1]");
    if (c.axis != SweepAxis::Prob && p < 1) throw std::invalid_argument("sweep points must be at least 1");
  }
  if (!(c.prob >= 0 && c.prob <= 1)) throw std::invalid_argument("prob must lie in [0,1]");
  return c;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_experiment_config(ss.str());
}

std::uint64_t run_seed(std::uint64_t base, std::size_t size_index, std::size_t point, int rep) {
  std::uint64_t s = base;
  std::uint64_t h = splitmix64(s);
  s = h ^ static_cast<std::uint64_t>(size_index);
  h = splitmix64(s);
  s = h ^ static_cast<std::uint64_t>(point);
  h = splitmix64(s);
  s = h ^ static_cast<std::uint64_t>(rep);
  return splitmix64(s);
}

namespace {

struct RunCoordinates {
  std::size_t size_index;
  std::size_t point;
  int rep;
};

void execute_run(const ExperimentConfig& config, const RunCoordinates& at, RunRecord* out) {
  const MarketSize& size = config.sizes[at.size_index];
  const double value = config.points[at.point];
  int n = size.n;
  int tasks = size.tasks;
  double prob = config.prob;
  switch (config.axis) {
    case SweepAxis::Prob: prob = value; break;
    case SweepAxis::Tasks: tasks = static_cast<int>(std::lround(value)); break;
    case SweepAxis::Suppliers: n = static_cast<int>(std::lround(value)); break;
  }

  for (std::size_t k = 0; k < config.mechanisms.size(); ++k) {
    RunRecord& r = out[k];
    r.axis = config.axis;
    r.size_index = at.size_index;
    r.point = at.point;
    r.rep = at.rep;
    r.mechanism = config.mechanisms[k];
    r.n = n;
    r.tasks = tasks;
    r.prob = config.topology == Topology::Complete ? 1.0 : prob;
  }

  std::uint64_t seed = run_seed(config.base_seed, at.size_index, at.point, at.rep);
  const std::uint64_t graph_seed = splitmix64(seed);
  std::mt19937_64 rng(splitmix64(seed));

  SocialGraph graph;
  try {
    switch (config.topology) {
      case Topology::Random: graph = gen_random_graph({n, prob, graph_seed}); break;
      case Topology::Complete: graph = gen_complete_graph(n); break;
      case Topology::Tree: {
        std::mt19937_64 tree_rng(graph_seed);
        graph = gen_random_tree(n, tree_rng);
        break;
      }
    }
  } catch (const std::exception& e) {
    for (std::size_t k = 0; k < config.mechanisms.size(); ++k) out[k].error = e.what();
    return;
  }

  auto timed = [&](RunRecord& r, auto&& body) {
    try {
      const auto t0 = std::chrono::steady_clock::now();
      body();
      const auto t1 = std::chrono::steady_clock::now();
      r.ms = config.record_time ? std::chrono::duration<double, std::milli>(t1 - t0).count() : 0.0;
    } catch (const std::exception& e) {
      r.error = e.what();
    }
  };

  if (config.variant == InstanceVariant::Homogeneous) {
    const auto instance = gen_instance_hm(graph, tasks, rng, config.reserve_unit);
    for (std::size_t k = 0; k < config.mechanisms.size(); ++k) {
      RunRecord& r = out[k];
      r.budget = budget(instance);
      timed(r, [&] {
        const Outcome o = homogeneous_mechanism(r.mechanism)(instance);
        r.social_cost = social_cost(o, instance);
        r.payment = requester_cost(o, instance);
        r.winners = static_cast<std::int64_t>(o.winners().size());
      });
    }
  } else {
    const auto instance = gen_instance_ht(graph, static_cast<std::size_t>(std::max(tasks, 0)), rng);
    for (std::size_t k = 0; k < config.mechanisms.size(); ++k) {
      RunRecord& r = out[k];
      r.budget = budget(instance);
      timed(r, [&] {
        const Outcome o = heterogeneous_mechanism(r.mechanism)(instance);
        r.social_cost = social_cost(o, instance);
        r.payment = requester_cost(o, instance);
        r.winners = static_cast<std::int64_t>(o.winners().size());
      });
    }
  }
}

}  // namespace

std::vector<RunRecord> run_sweep(const ExperimentConfig& config, unsigned threads) {
  if (config.repetitions < 1) throw std::invalid_argument("repetitions must be at least 1");
  std::vector<RunCoordinates> runs;
  for (std::size_t s = 0; s < config.sizes.size(); ++s)
    for (std::size_t p = 0; p < config.points.size(); ++p)
      for (int rep = 0; rep < config.repetitions; ++rep) runs.push_back({s, p, rep});

  const std::size_t per_run = config.mechanisms.size();
  std::vector<RunRecord> records(runs.size() * per_run);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(runs.size(), 1)));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < runs.size(); i = next++) execute_run(config, runs[i], records.data() + i * per_run);
  };
  std::vector<std::jthread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();
  return records;
}

void write_csv_header(std::ostream& out) {
  out << "sweep_axis,point,rep,mechanism,n,tasks,prob,social_cost,payment,budget,winners,ms\n";
}

void write_csv(std::ostream& out, const std::vector<RunRecord>& records) {
  write_csv_header(out);
  char buf[64];
  for (const auto& r : records) {
    if (!r.error.empty()) continue;
    std::snprintf(buf, sizeof buf, "%.6f", r.prob);
    out << to_string(r.axis) << ',' << r.point << ',' << r.rep << ',' << r.mechanism << ',' << r.n << ',' << r.tasks
        << ',' << buf << ',' << r.social_cost.to_decimal(6) << ',' << r.payment.to_decimal(6) << ','
        << r.budget.to_decimal(6) << ',' << r.winners << ',';
    std::snprintf(buf, sizeof buf, "%.3f", r.ms);
    out << buf << '\n';
  }
}

}  // namespace netauction
