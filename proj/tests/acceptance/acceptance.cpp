#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "netauction/corpus.hpp"
#include "netauction/forward.hpp"
#include "netauction/fuzzer.hpp"
#include "netauction/heterogeneous.hpp"
#include "netauction/homogeneous.hpp"
#include "netauction/instance_io.hpp"
#include "netauction/network.hpp"
#include "netauction/oracles.hpp"
#include "netauction/simulation.hpp"

using namespace netauction;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  std::string name;
  double limit_ms;
  std::function<Verdict()> check;
};

std::string fixture(const char* name) { return std::string(NETAUCTION_FIXTURES) + "/" + name; }
std::string config(const char* name) { return std::string(NETAUCTION_CONFIGS) + "/" + name; }

template <class M>
M load(const char* name) {
  return std::get<M>(load_instance(fixture(name)));
}

std::vector<std::string> names(const std::vector<AgentId>& ids, const auto& m) {
  std::vector<std::string> out;
  for (AgentId id : ids) out.push_back(m.name_of(id));
  return out;
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : ",") + x;
  return "{" + s + "}";
}

struct Process {
  int code = -1;
  std::string out;
};

Process run_cli(const std::string& args) {
  const std::string cmd = std::string("'") + NETAUCTION_CLI + "' " + args + " 2>/dev/null";
  Process p;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return p;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) p.out.append(buf.data(), n);
  const int status = pclose(pipe);
  p.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return p;
}

std::vector<nlohmann::json> witness_lines(const std::string& out) {
  std::vector<nlohmann::json> ws;
  std::istringstream in(out);
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) ws.push_back(nlohmann::json::parse(line));
  return ws;
}

Verdict worked_example() {
  auto m = load<HeterogeneousInstance>("example2.json");
  auto o = ran_ht(m);
  std::vector<std::string> pays;
  for (AgentId w : o.winners()) pays.push_back(o.payment(w).to_string());
  const auto winners = names(o.winners(), m);
  std::ostringstream d;
  d << "winners " << join(winners) << " payments " << join(pays) << " social cost " << social_cost(o, m).to_string()
    << " expenditure " << requester_cost(o, m).to_string() << " budget " << budget(m).to_string();
  const bool ok = winners == std::vector<std::string>{"s1", "s2", "s6"} &&
                  pays == std::vector<std::string>{"23", "12", "12"} && social_cost(o, m) == Money(31) &&
                  requester_cost(o, m) == Money(50) && budget(m) == Money(69);
  return {ok, d.str()};
}

Verdict dna_mu_trace() {
  auto m = load<ForwardInstance>("fig1.json");
  auto t = dna_mu_traced(m);
  const AgentId a{1}, d{4}, e{5}, f{6};
  auto price = [&](AgentId id) {
    const auto& p = t.prices.at(id);
    return p ? p->to_string() : std::string("-");
  };
  const auto winners = names(t.outcome.winners(), m);
  auto lie = m;
  lie.agent(f).neighbors.clear();
  const auto deviated = names(dna_mu(lie).winners(), m);
  std::ostringstream out;
  out << "winners " << join(winners) << " p_a=" << price(a) << " p_d=" << price(d) << " p_e=" << price(e)
      << "; f hides her invitee -> " << join(deviated);
  const bool ok = winners == std::vector<std::string>{"b", "c", "d", "e"} && t.prices.at(a) == Money(4) &&
                  t.prices.at(d) == Money(5) && t.prices.at(e) == Money(3) &&
                  deviated == std::vector<std::string>{"a", "b", "c", "f"};
  return {ok, out.str()};
}

Verdict fuzz_example1() {
  auto p = run_cli("fuzz non-monotone '" + fixture("example1.json") + "' --exhaustive");
  for (const auto& w : witness_lines(p.out))
    if (w["property"] == "IC" && w["agent"] == "d") {
      const Money reported = Money::parse(w["reported_type"]["value"].get<std::string>());
      std::ostringstream d;
      d << "exit " << p.code << ", IC witness for d reporting cost " << reported.to_string() << " with utility "
        << w["deviant_utility"].get<std::string>() << " > " << w["truthful_utility"].get<std::string>();
      return {p.code == 1 && reported < Money(3, 2), d.str()};
    }
  return {false, "no IC witness for d (exit " + std::to_string(p.code) + ")"};
}

Verdict fuzz_fig1() {
  auto p = run_cli("fuzz dna-mu '" + fixture("fig1.json") + "' --exhaustive");
  for (const auto& w : witness_lines(p.out))
    if (w["property"] == "IC" && w["agent"] == "f") {
      std::ostringstream d;
      d << "exit " << p.code << ", IC witness for f reporting neighbours " << w["reported_type"]["neighbors"].dump()
        << " with utility " << w["deviant_utility"].get<std::string>() << " > "
        << w["truthful_utility"].get<std::string>();
      return {p.code == 1, d.str()};
    }
  return {false, "no IC witness for f (exit " + std::to_string(p.code) + ")"};
}

template <class M>
std::string fuzz_suite(const Mechanism<M>& mech, const std::vector<M>& corpus, std::size_t& witnesses,
                       std::size_t& sampled) {
  std::map<std::string, std::size_t> by_property;
  std::size_t evaluations = 0;
  for (const auto& m : corpus) {
    auto r = fuzz_instance(mech, m);
    evaluations += r.evaluations;
    if (r.sampled) ++sampled;
    for (const auto& w : r.witnesses) {
      ++witnesses;
      ++by_property[to_string(w.property)];
    }
  }
  std::ostringstream d;
  d << corpus.size() << " instances, " << evaluations << " runs";
  for (const auto& [p, n] : by_property) d << ", " << p << " " << n;
  return d.str();
}

Verdict property_suites() {
  CorpusOptions opts;
  opts.max_suppliers = 8;
  std::size_t witnesses = 0, sampled = 0;
  const Mechanism<HomogeneousInstance> hm = [](const HomogeneousInstance& m) { return ran_hm(m); };
  const Mechanism<HeterogeneousInstance> ht = [](const HeterogeneousInstance& m) { return ran_ht(m); };
  const std::string a = fuzz_suite(hm, homogeneous_corpus(500, 20240501, opts), witnesses, sampled);
  const std::string b = fuzz_suite(ht, heterogeneous_corpus(500, 20240502, opts), witnesses, sampled);
  std::ostringstream d;
  d << "ran-hm: " << a << "; ran-ht: " << b << "; witnesses " << witnesses << ", sampled instances " << sampled;
  return {witnesses == 0 && sampled == 0, d.str()};
}

Verdict oracle_equivalence() {
  CorpusOptions opts;
  opts.max_suppliers = 12;
  opts.max_demand = 12;
  auto hom = homogeneous_corpus(200, 20240503, opts);
  std::size_t vcg_mismatch = 0, layer_mismatch = 0, layers_checked = 0;
  for (const auto& m : hom) {
    std::vector<UnitOffer> all;
    for (AgentId id : reachable_market(m).members()) all.push_back({id, m.agent(id).ability, m.agent(id).unit_cost});
    const Money best = min_cost_multiunit_oracle(all, m.requester.demand, m.requester.reserve_unit).cost;
    if (social_cost(d_vcg(m), m) != best) ++vcg_mismatch;

    const auto trace = ran_hm_traced(m);
    for (const auto& layer : trace.layers) {
      std::vector<UnitOffer> offers;
      Money bought;
      std::int64_t units = 0;
      for (AgentId id : layer.layer_eligible) {
        offers.push_back({id, m.agent(id).ability, m.agent(id).unit_cost});
        const std::int64_t u = trace.outcome.units(id);
        units += u;
        bought += Money(u) * m.agent(id).unit_cost;
      }
      // a saturated layer sells everything; the last one also hands the rest to the requester
      const std::int64_t demand = layer.includes_virtual ? layer.remaining_demand : units;
      if (layer.includes_virtual) bought += Money(trace.outcome.self_supplied_units) * m.requester.reserve_unit;
      const Money oracle = min_cost_multiunit_oracle(offers, demand, m.requester.reserve_unit).cost;
      ++layers_checked;
      if (bought != oracle || (layer.includes_virtual && layer.allocation_cost != oracle)) ++layer_mismatch;
    }
  }

  auto het = heterogeneous_corpus(200, 20240504, opts);
  std::vector<Money> gaps;
  std::size_t below = 0;
  for (const auto& m : het) {
    const Money gap = social_cost(ran_ht(m), m) - min_social_cost_ht(m).cost;
    if (gap.is_negative()) ++below;
    gaps.push_back(gap);
  }
  std::sort(gaps.begin(), gaps.end());
  const auto zero = static_cast<std::size_t>(std::count(gaps.begin(), gaps.end(), Money(0)));
  Money total;
  for (const auto& g : gaps) total += g;

  std::ostringstream d;
  d << "d-vcg mismatches " << vcg_mismatch << "/200; ran-hm layer mismatches " << layer_mismatch << "/"
    << layers_checked << "; ran-ht gap: optimal on " << zero << "/200, median " << gaps[gaps.size() / 2].to_decimal(3)
    << ", mean " << (total / Money(static_cast<std::int64_t>(gaps.size()))).to_decimal(3) << ", max "
    << gaps.back().to_decimal(3) << ", below optimum " << below;
  return {vcg_mismatch == 0 && layer_mismatch == 0 && below == 0, d.str()};
}

Verdict critical_payments() {
  const HeterogeneousMechanism mech = [](const HeterogeneousInstance& m) { return ran_ht(m); };
  std::size_t winners = 0, mismatches = 0;
  for (const auto& m : heterogeneous_corpus(500, 20240505)) {
    const auto o = ran_ht(m);
    for (AgentId w : o.winners()) {
      ++winners;
      if (critical_cost_search(mech, m, w, m.agent(w).neighbors) != o.payment(w)) ++mismatches;
    }
  }
  return {winners > 0 && mismatches == 0,
          std::to_string(winners) + " winners over 500 instances, " + std::to_string(mismatches) + " mismatches"};
}

Verdict tree_deficit() {
  auto c = load_experiment_config(config("hom_tree.json"));
  c.record_time = false;
  std::size_t dvcg_deficits = 0, dvcg_runs = 0, ran_deficits = 0, ran_runs = 0, errors = 0;
  for (const auto& r : run_sweep(c)) {
    if (!r.error.empty()) ++errors;
    const bool deficit = r.payment > r.budget;
    if (r.mechanism == "d-vcg") {
      ++dvcg_runs;
      if (deficit) ++dvcg_deficits;
    } else if (r.mechanism == "ran-hm") {
      ++ran_runs;
      if (deficit) ++ran_deficits;
    }
  }
  std::ostringstream d;
  d << "d-vcg deficit in " << dvcg_deficits << "/" << dvcg_runs << " runs, ran-hm deficit in " << ran_deficits << "/"
    << ran_runs << ", failed runs " << errors;
  return {dvcg_deficits > 0 && ran_deficits == 0 && ran_runs == 20 && errors == 0, d.str()};
}

bool same_outcome(const Outcome& a, const Outcome& b) {
  return a.allocation == b.allocation && a.payments == b.payments && a.self_supplied_units == b.self_supplied_units;
}

Verdict complete_graphs() {
  std::size_t identical = 0;
  const int instances = 20;
  for (int k = 0; k < instances; ++k) {
    std::mt19937_64 rng(run_seed(20240506, 0, 0, k));
    const auto m = gen_instance_hm(gen_complete_graph(20), 100, rng);
    const auto a = nd_vcg(m), b = d_vcg(m), c = ran_hm(m);
    if (same_outcome(a, b) && same_outcome(b, c)) ++identical;
  }
  return {identical == instances, std::to_string(identical) + "/20 instances with identical allocations and payments"};
}

struct Averages {
  std::map<std::string, Money> total;
  std::map<std::string, std::size_t> count;
  [[nodiscard]] Money mean(const std::string& m) const {
    return total.at(m) / Money(static_cast<std::int64_t>(count.at(m)));
  }
};

// Mean social cost per (size, point) and mechanism.
std::map<std::pair<std::size_t, std::size_t>, Averages> averages(const std::vector<RunRecord>& records,
                                                                 std::size_t& errors) {
  std::map<std::pair<std::size_t, std::size_t>, Averages> out;
  for (const auto& r : records) {
    if (!r.error.empty()) {
      ++errors;
      continue;
    }
    auto& a = out[{r.size_index, r.point}];
    a.total[r.mechanism] += r.social_cost;
    ++a.count[r.mechanism];
  }
  return out;
}

Verdict dominance() {
  std::ostringstream d;
  bool ok = true;

  // per instance at desk scale
  const std::vector<double> probs{0.05, 0.10, 0.15, 0.20, 0.25, 0.30};
  std::size_t not_worse = 0;
  const std::size_t corpus = 200;
  for (std::size_t k = 0; k < corpus; ++k) {
    const auto graph = gen_random_graph({20, probs[k % probs.size()], run_seed(20240507, 0, k, 0)});
    std::mt19937_64 rng(run_seed(20240507, 1, k, 0));
    const auto m = gen_instance_ht(graph, 100, rng);
    if (social_cost(ran_ht(m), m) <= social_cost(local_greedy(m), m)) ++not_worse;
  }
  ok = ok && not_worse * 100 >= corpus * 95;
  d << "ran-ht <= local greedy on " << not_worse << "/" << corpus << " instances";

  std::size_t errors = 0;
  auto het = load_experiment_config(config("het_prob_sweep.json"));
  het.record_time = false;
  std::size_t het_points = 0, het_ok = 0;
  for (const auto& [key, a] : averages(run_sweep(het), errors)) {
    ++het_points;
    if (a.mean("ran-ht") <= a.mean("local-greedy")) ++het_ok;
  }
  ok = ok && het_points > 0 && het_ok == het_points;
  d << "; mean ran-ht <= mean local greedy at " << het_ok << "/" << het_points << " sweep points";

  auto hom = load_experiment_config(config("hom_prob_reduced.json"));
  hom.record_time = false;
  std::size_t hom_points = 0, hom_ok = 0;
  for (const auto& [key, a] : averages(run_sweep(hom), errors)) {
    ++hom_points;
    if (a.mean("ran-hm") <= a.mean("nd-vcg")) ++hom_ok;
  }
  ok = ok && hom_points == 6 && hom_ok == hom_points && errors == 0;
  d << "; mean ran-hm <= mean nd-vcg at " << hom_ok << "/" << hom_points << " reduced-grid points; failed runs "
    << errors;
  return {ok, d.str()};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"worked heterogeneous example", 10, worked_example},
      {"DNA-MU trace and f deviation", 10, dna_mu_trace},
      {"counterexample: non-monotone mechanism, agent d", 5000, fuzz_example1},
      {"counterexample: DNA-MU, agent f", 5000, fuzz_fig1},
      {"property suites for RAN-HM and RAN-HT", 600000, property_suites},
      {"oracle equivalence", 0, oracle_equivalence},
      {"critical-payment identity", 0, critical_payments},
      {"deficit existence on random trees", 0, tree_deficit},
      {"complete-graph degeneracy", 0, complete_graphs},
      {"dominance trends", 900000, dominance},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = c.limit_ms <= 0 || ms < c.limit_ms;
    const bool pass = v.pass && in_time;
    if (!pass) ++failed;
    std::printf("%s %s: %s [%.1f ms%s]\n", pass ? "PASS" : "FAIL", c.name.c_str(), v.detail.c_str(), ms,
                c.limit_ms > 0 ? (in_time ? ", within budget" : ", over budget") : "");
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
  return failed == 0 ? 0 : 1;
}
