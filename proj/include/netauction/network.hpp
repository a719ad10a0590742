#pragma once

#include <map>
#include <optional>
#include <vector>

#include "netauction/model.hpp"

namespace netauction {

// Dense, index-based copy of the reported invitation edges. Edges back to the
// requester are dropped.
class InvitationGraph {
 public:
  template <class M>
  static InvitationGraph of(const M& instance) {
    InvitationGraph g;
    g.ids_.reserve(instance.agents.size());
    for (const auto& [id, agent] : instance.agents) g.ids_.push_back(id);
    g.out_.resize(g.ids_.size());
    for (AgentId r : instance.requester.neighbors)
      if (int i = g.index(r); i >= 0) g.roots_.push_back(i);
    int idx = 0;
    for (const auto& [id, agent] : instance.agents) {
      for (AgentId n : agent.neighbors)
        if (int j = g.index(n); j >= 0 && j != idx) g.out_[static_cast<std::size_t>(idx)].push_back(j);
      ++idx;
    }
    return g;
  }

  [[nodiscard]] std::size_t size() const { return ids_.size(); }
  [[nodiscard]] AgentId id(int index) const { return ids_[static_cast<std::size_t>(index)]; }
  // -1 when the id is not a supplier of this graph.
  [[nodiscard]] int index(AgentId id) const;
  [[nodiscard]] const std::vector<int>& roots() const { return roots_; }
  [[nodiscard]] const std::vector<int>& out(int index) const { return out_[static_cast<std::size_t>(index)]; }

  // BFS levels from the requester; -1 marks unreachable. An agent listed in
  // `silenced` stays in the market but her invitations are ignored.
  [[nodiscard]] std::vector<int> distances(int silenced = -1) const;

 private:
  std::vector<AgentId> ids_;  // sorted
  std::vector<std::vector<int>> out_;
  std::vector<int> roots_;
};

struct ReachableMarket {
  std::map<AgentId, int> distance;

  [[nodiscard]] bool contains(AgentId id) const { return distance.count(id) != 0; }
  [[nodiscard]] std::vector<AgentId> members() const;
};

struct MarketDivision {
  std::vector<std::vector<AgentId>> layers;  // layers[k] holds distance k+1, ids ascending

  [[nodiscard]] int d_star() const { return static_cast<int>(layers.size()); }
};

ReachableMarket reachable_market(const InvitationGraph& graph);

template <class M>
ReachableMarket reachable_market(const M& instance) {
  return reachable_market(InvitationGraph::of(instance));
}

// Same closure with selected suppliers' reported neighbor sets replaced.
template <class M>
ReachableMarket reachable_market(const M& instance, const std::map<AgentId, NeighborSet>& reports) {
  M copy = instance;
  for (const auto& [id, r] : reports) copy.agent(id).neighbors = r;
  return reachable_market(copy);
}

MarketDivision market_division(const ReachableMarket& market);

// Suppliers that drop out of the market when `agent` invites nobody.
NeighborSet children(const InvitationGraph& graph, AgentId agent);

template <class M>
NeighborSet children(const M& instance, AgentId agent) {
  (void)instance.agent(agent);  // throws for unknown agents
  return children(InvitationGraph::of(instance), agent);
}

// Children of every reachable supplier at once, read off the dominator tree of
// the invitation graph rooted at the requester.
std::map<AgentId, NeighborSet> all_children(const InvitationGraph& graph);

template <class M>
std::map<AgentId, NeighborSet> all_children(const M& instance) {
  return all_children(InvitationGraph::of(instance));
}

}  // namespace netauction
