#include <stdexcept>

#include "doctest.h"
#include "netauction/corpus.hpp"
#include "netauction/heterogeneous.hpp"
#include "netauction/instance_io.hpp"
#include "netauction/network.hpp"
#include "netauction/oracles.hpp"

using namespace netauction;

namespace {

const AgentId S1{1}, S2{2}, S3{3}, S4{4}, S5{5}, S6{6}, S7{7}, S8{8};

HeterogeneousInstance example2() {
  return std::get<HeterogeneousInstance>(load_instance(std::string(NETAUCTION_FIXTURES) + "/example2.json"));
}

TaskSet all_tasks(const HeterogeneousInstance& m) { return TaskSet(m.requester.task_count(), true); }

bool selected_at(const HeterogeneousInstance& m, AgentId j, const Money& cost) {
  auto copy = m;
  copy.agent(j).total_cost = cost;
  return ran_ht(copy).units(j) > 0;
}

}  // namespace

TEST_CASE("worked example: layers, picks and payments") {
  auto m = example2();
  auto div = market_division(reachable_market(m));
  REQUIRE(div.d_star() == 3);
  CHECK(div.layers[0] == std::vector<AgentId>{S1, S2, S3});
  CHECK(div.layers[1] == std::vector<AgentId>{S4, S5, S6, S7});
  CHECK(div.layers[2] == std::vector<AgentId>{S8});

  const auto& r = m.requester.reserve;
  TaskSet u = all_tasks(m);
  CHECK(marginal_utility(m.agent(S1), u, r) == Money(26));
  CHECK(marginal_utility(m.agent(S2), u, r) == Money(17));
  CHECK(marginal_utility(m.agent(S3), u, r) == Money(19));

  auto first = greedy_layer_selection(div.layers[0], u, m);
  CHECK(first.winners == std::vector<AgentId>{S1, S2});

  auto o = ran_ht(m);
  CHECK(o.winners() == std::vector<AgentId>{S1, S2, S6});
  CHECK(o.payment(S1) == Money(23));
  CHECK(o.payment(S2) == Money(12));
  CHECK(o.payment(S6) == Money(12));
  CHECK(social_cost(o, m) == Money(31));
  CHECK(requester_cost(o, m) == Money(50));
  CHECK(budget(m) == Money(69));
  CHECK(is_feasible(o, m));
  for (AgentId loser : {S3, S4, S5, S7, S8}) CHECK(o.payment(loser) == Money(0));
}

TEST_CASE("marginal valuation counts only uncovered tasks") {
  auto m = example2();
  TaskSet u(m.requester.task_count());
  u.insert(0);  // a
  u.insert(4);  // e
  CHECK(marginal_valuation(m.agent(S8), u, m.requester.reserve) == Money(13));
  CHECK(marginal_valuation(m.agent(S5), u, m.requester.reserve) == Money(0));
  CHECK(marginal_utility(m.agent(S5), u, m.requester.reserve) == Money(-18));
}

TEST_CASE("payment of a supplier outside the layer is rejected") {
  auto m = example2();
  CHECK_THROWS_AS(ran_ht_payment(S6, {S1, S2, S3}, all_tasks(m), m), std::invalid_argument);
}

TEST_CASE("the zero-marginal skip decides whether a free, redundant supplier is picked") {
  auto m = example2();
  GreedyOptions keep_zero;
  keep_zero.skip_zero_marginal_valuation = false;
  auto o = ran_ht(m, keep_zero);
  CHECK(o.units(S3) == 1);
  CHECK(ran_ht(m).units(S3) == 0);
}

TEST_CASE("local greedy stops at the first layer") {
  auto m = example2();
  auto o = local_greedy(m);
  CHECK(o.winners() == std::vector<AgentId>{S1, S2});
  CHECK_FALSE(o.participates(S6));
  // a, g left to the requester
  CHECK(o.self_supplied_tasks.count() == 2);
  CHECK(social_cost(o, m) == Money(12 + 9 + 3 + 12));
}

TEST_CASE("no tasks means no winners") {
  auto inst = load_instance(std::string(NETAUCTION_FIXTURES) + "/empty_tasks.json");
  auto m = std::get<HeterogeneousInstance>(inst);
  auto o = ran_ht(m);
  CHECK(o.winners().empty());
  CHECK(o.total_payments() == Money(0));
}

TEST_CASE("a supplier who costs more than she covers is never picked") {
  HeterogeneousInstance m;
  m.requester.task_names = {"x"};
  m.requester.reserve = {Money(4)};
  m.requester.neighbors = {S1};
  m.agents[S1] = {{0}, Money(5), {}};
  auto o = ran_ht(m);
  CHECK(o.winners().empty());
  CHECK(o.self_supplied_tasks.count() == 1);
}

TEST_CASE("payments are critical costs across a random corpus") {
  auto corpus = heterogeneous_corpus(250, 12);
  std::size_t winners = 0;
  for (std::size_t k = 0; k < corpus.size(); ++k) {
    CAPTURE(k);
    const auto& m = corpus[k];
    const Money step(1, 4 * grid_denominator(m));
    auto o = ran_ht(m);
    for (AgentId j : o.winners()) {
      ++winners;
      const Money x = o.payment(j);
      CAPTURE(j.value);
      CHECK(x >= m.agent(j).total_cost);
      CHECK_FALSE(selected_at(m, j, x + step));
      if (x >= step) CHECK(selected_at(m, j, x - step));
    }
  }
  CHECK(winners > 100);
}

TEST_CASE("heterogeneous invariants over a random corpus") {
  auto corpus = heterogeneous_corpus(500, 31);
  std::size_t not_worse = 0;
  for (std::size_t k = 0; k < corpus.size(); ++k) {
    CAPTURE(k);
    const auto& m = corpus[k];
    auto o = ran_ht(m);
    auto g = local_greedy(m);
    CHECK(is_feasible(o, m));
    CHECK(is_feasible(g, m));
    CHECK(requester_cost(o, m) <= budget(m));
    for (const auto& [id, sel] : o.allocation) {
      CHECK(utility_ht(o, id, m.agent(id)) >= Money(0));
      if (sel == 0) CHECK(o.payment(id) == Money(0));
    }
    if (social_cost(o, m) <= social_cost(g, m)) ++not_worse;
  }
  MESSAGE("RAN-HT no costlier than local greedy on " << not_worse << " of " << corpus.size());
  CHECK(not_worse * 100 >= corpus.size() * 95);
}
