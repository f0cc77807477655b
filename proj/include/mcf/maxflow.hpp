#pragma once

#include <span>
#include <vector>

#include "mcf/core.hpp"
#include "mcf/numeric.hpp"

namespace mcf {

/// Dinic max-flow on an explicit residual representation.
class Dinic {
 public:
  explicit Dinic(int node_count) : head_(static_cast<std::size_t>(node_count), -1) {}

  /// Returns an edge id usable with flow_on() after max_flow().
  int add_edge(int from, int to, i64 capacity);

  i64 max_flow(int source, int sink);

  i64 flow_on(int edge_id) const;

  int node_count() const { return static_cast<int>(head_.size()); }

 private:
  struct Edge {
    int to;
    int next;
    i64 cap;
  };
  bool bfs(int source, int sink);
  i64 dfs(int v, int sink, i64 limit);

  std::vector<int> head_;
  std::vector<Edge> edges_;
  std::vector<int> level_;
  std::vector<int> iter_;
};

/// Feasibility of a demand vector over a capacitated arc set, via the
/// standard super-source/super-sink reduction. Returns the arc flows of
/// one feasible flow, or nothing when infeasible.
struct DemandFlowResult {
  bool feasible = false;
  std::vector<i64> flow;  // per input arc, valid when feasible
};

DemandFlowResult route_demands(int node_count, std::span<const Arc> arcs,
                               std::span<const i64> capacity, std::span<const i64> demand);

}  // namespace mcf
