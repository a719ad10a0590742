#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "netauction/mechanisms.hpp"
#include "netauction/model.hpp"

namespace netauction {

// Undirected graph on nodes 0..n; node 0 is the requester.
struct SocialGraph {
  int n = 0;  // supplier count
  std::vector<std::pair<int, int>> edges;
};

struct GraphConfig {
  int n = 1;
  double prob = 0.5;
  std::uint64_t seed = 0;
};

inline constexpr std::uint64_t kMaxGraphAttempts = 1'000'000;

// Each unordered pair gets an edge with probability `prob`; the whole graph is
// redrawn until it is connected. Throws std::runtime_error after
// kMaxGraphAttempts draws.
SocialGraph gen_random_graph(const GraphConfig& config);
SocialGraph gen_complete_graph(int n);
// Uniform random recursive tree: node i attaches to a uniform node in 0..i-1.
SocialGraph gen_random_tree(int n, std::mt19937_64& rng);
bool is_connected(const SocialGraph& graph);

// Edges become invitations in both directions.
HomogeneousInstance gen_instance_hm(const SocialGraph& graph, std::int64_t demand, std::mt19937_64& rng,
                                    const Money& reserve_unit = Money(10));
HeterogeneousInstance gen_instance_ht(const SocialGraph& graph, std::size_t tasks, std::mt19937_64& rng);

enum class SweepAxis { Prob, Tasks, Suppliers };
enum class Topology { Random, Complete, Tree };

std::string to_string(SweepAxis axis);
std::string to_string(Topology topology);

struct MarketSize {
  int n = 20;
  int tasks = 100;
};

struct ExperimentConfig {
  std::string name;
  InstanceVariant variant = InstanceVariant::Homogeneous;
  Topology topology = Topology::Random;
  SweepAxis axis = SweepAxis::Prob;
  std::vector<double> points;  // values along the sweep axis
  std::vector<MarketSize> sizes;
  double prob = 0.05;  // used when the axis is not prob
  int repetitions = 20;
  std::vector<std::string> mechanisms;
  std::uint64_t base_seed = 1;
  Money reserve_unit = Money(10);
  bool record_time = true;
};

// Throws std::invalid_argument on malformed configs.
ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::string& path);

struct RunRecord {
  SweepAxis axis = SweepAxis::Prob;
  std::size_t size_index = 0;
  std::size_t point = 0;
  int rep = 0;
  std::string mechanism;
  int n = 0;
  int tasks = 0;
  double prob = 0;
  Money social_cost;
  Money payment;  // requester expenditure, self-supplied units at reserve included
  Money budget;
  std::int64_t winners = 0;
  double ms = 0;
  std::string error;  // non-empty when the mechanism threw
};

// Deterministic per-run seed from the base seed and the run's coordinates.
std::uint64_t run_seed(std::uint64_t base, std::size_t size_index, std::size_t point, int rep);

// Results are ordered by (size, point, rep, mechanism) whatever the thread count.
std::vector<RunRecord> run_sweep(const ExperimentConfig& config, unsigned threads = 0);

void write_csv_header(std::ostream& out);
void write_csv(std::ostream& out, const std::vector<RunRecord>& records);

}  // namespace netauction
