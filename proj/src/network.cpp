#include "netauction/network.hpp"

#include <algorithm>
#include <deque>

namespace netauction {

int InvitationGraph::index(AgentId id) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) return -1;
  return static_cast<int>(it - ids_.begin());
}

std::vector<int> InvitationGraph::distances(int silenced) const {
  std::vector<int> dist(ids_.size(), -1);
  std::deque<int> queue;
  for (int r : roots_) {
    if (dist[static_cast<std::size_t>(r)] < 0) {
      dist[static_cast<std::size_t>(r)] = 1;
      queue.push_back(r);
    }
  }
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    if (u == silenced) continue;
    for (int v : out_[static_cast<std::size_t>(u)]) {
      if (dist[static_cast<std::size_t>(v)] < 0) {
        dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

std::vector<AgentId> ReachableMarket::members() const {
  std::vector<AgentId> out;
  out.reserve(distance.size());
  for (const auto& [id, d] : distance) out.push_back(id);
  return out;
}

ReachableMarket reachable_market(const InvitationGraph& graph) {
  ReachableMarket market;
  auto dist = graph.distances();
  for (std::size_t i = 0; i < dist.size(); ++i)
    if (dist[i] > 0) market.distance.emplace_hint(market.distance.end(), graph.id(static_cast<int>(i)), dist[i]);
  return market;
}

MarketDivision market_division(const ReachableMarket& market) {
  MarketDivision division;
  for (const auto& [id, d] : market.distance) {
    if (static_cast<int>(division.layers.size()) < d) division.layers.resize(static_cast<std::size_t>(d));
    division.layers[static_cast<std::size_t>(d - 1)].push_back(id);
  }
  return division;
}

NeighborSet children(const InvitationGraph& graph, AgentId agent) {
  NeighborSet out;
  int a = graph.index(agent);
  if (a < 0) return out;
  auto full = graph.distances();
  if (full[static_cast<std::size_t>(a)] < 0) return out;
  auto cut = graph.distances(a);
  for (std::size_t i = 0; i < full.size(); ++i)
    if (full[i] > 0 && cut[i] < 0) out.insert(graph.id(static_cast<int>(i)));
  return out;
}

std::map<AgentId, NeighborSet> all_children(const InvitationGraph& graph) {
  // Vertex n is the requester. Iterative dominators over reverse postorder.
  const int n = static_cast<int>(graph.size());
  auto succ = [&](int u) -> const std::vector<int>& { return u == n ? graph.roots() : graph.out(u); };

  std::vector<int> order;  // postorder
  std::vector<int> post_index(static_cast<std::size_t>(n + 1), -1);
  std::vector<char> seen(static_cast<std::size_t>(n + 1), 0);
  std::vector<std::pair<int, std::size_t>> stack{{n, 0}};
  seen[static_cast<std::size_t>(n)] = 1;
  while (!stack.empty()) {
    auto& [u, next] = stack.back();
    const auto& s = succ(u);
    if (next < s.size()) {
      int v = s[next++];
      if (!seen[static_cast<std::size_t>(v)]) {
        seen[static_cast<std::size_t>(v)] = 1;
        stack.emplace_back(v, 0);
      }
    } else {
      post_index[static_cast<std::size_t>(u)] = static_cast<int>(order.size());
      order.push_back(u);
      stack.pop_back();
    }
  }

  std::vector<std::vector<int>> pred(static_cast<std::size_t>(n + 1));
  for (int u : order)
    for (int v : succ(u)) pred[static_cast<std::size_t>(v)].push_back(u);

  std::vector<int> idom(static_cast<std::size_t>(n + 1), -1);
  idom[static_cast<std::size_t>(n)] = n;
  auto intersect = [&](int a, int b) {
    while (a != b) {
      while (post_index[static_cast<std::size_t>(a)] < post_index[static_cast<std::size_t>(b)]) a = idom[static_cast<std::size_t>(a)];
      while (post_index[static_cast<std::size_t>(b)] < post_index[static_cast<std::size_t>(a)]) b = idom[static_cast<std::size_t>(b)];
    }
    return a;
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      int u = *it;
      if (u == n) continue;
      int new_idom = -1;
      for (int p : pred[static_cast<std::size_t>(u)]) {
        if (idom[static_cast<std::size_t>(p)] < 0) continue;
        new_idom = new_idom < 0 ? p : intersect(p, new_idom);
      }
      if (idom[static_cast<std::size_t>(u)] != new_idom) {
        idom[static_cast<std::size_t>(u)] = new_idom;
        changed = true;
      }
    }
  }

  // Every reachable vertex contributes itself to each strict dominator above it.
  std::map<AgentId, NeighborSet> result;
  for (int u : order)
    if (u != n) result[graph.id(u)];
  for (int u : order) {
    if (u == n) continue;
    for (int d = idom[static_cast<std::size_t>(u)]; d != n; d = idom[static_cast<std::size_t>(d)])
      result[graph.id(d)].insert(graph.id(u));
  }
  return result;
}

}  // namespace netauction
