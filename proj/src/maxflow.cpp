#include "mcf/maxflow.hpp"

#include <algorithm>
#include <deque>

namespace mcf {

int Dinic::add_edge(int from, int to, i64 capacity) {
  int id = static_cast<int>(edges_.size());
  edges_.push_back({to, head_[static_cast<std::size_t>(from)], capacity});
  head_[static_cast<std::size_t>(from)] = id;
  edges_.push_back({from, head_[static_cast<std::size_t>(to)], 0});
  head_[static_cast<std::size_t>(to)] = id + 1;
  return id;
}

bool Dinic::bfs(int source, int sink) {
  level_.assign(head_.size(), -1);
  std::deque<int> queue{source};
  level_[static_cast<std::size_t>(source)] = 0;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int e = head_[static_cast<std::size_t>(v)]; e >= 0; e = edges_[static_cast<std::size_t>(e)].next) {
      const Edge& ed = edges_[static_cast<std::size_t>(e)];
      if (ed.cap > 0 && level_[static_cast<std::size_t>(ed.to)] < 0) {
        level_[static_cast<std::size_t>(ed.to)] = level_[static_cast<std::size_t>(v)] + 1;
        queue.push_back(ed.to);
      }
    }
  }
  return level_[static_cast<std::size_t>(sink)] >= 0;
}

i64 Dinic::dfs(int v, int sink, i64 limit) {
  if (v == sink || limit == 0) return limit;
  i64 pushed = 0;
  for (int& e = iter_[static_cast<std::size_t>(v)]; e >= 0; e = edges_[static_cast<std::size_t>(e)].next) {
    Edge& ed = edges_[static_cast<std::size_t>(e)];
    if (ed.cap <= 0 || level_[static_cast<std::size_t>(ed.to)] != level_[static_cast<std::size_t>(v)] + 1)
      continue;
    i64 got = dfs(ed.to, sink, std::min(limit - pushed, ed.cap));
    if (got > 0) {
      ed.cap -= got;
      edges_[static_cast<std::size_t>(e ^ 1)].cap += got;
      pushed += got;
      if (pushed == limit) return pushed;
    }
  }
  level_[static_cast<std::size_t>(v)] = -1;
  return pushed;
}

i64 Dinic::max_flow(int source, int sink) {
  i64 total = 0;
  while (bfs(source, sink)) {
    iter_ = head_;
    total += dfs(source, sink, std::numeric_limits<i64>::max());
  }
  return total;
}

i64 Dinic::flow_on(int edge_id) const {
  return edges_[static_cast<std::size_t>(edge_id ^ 1)].cap;
}

DemandFlowResult route_demands(int node_count, std::span<const Arc> arcs,
                               std::span<const i64> capacity, std::span<const i64> demand) {
  i64 positive = 0;
  for (i64 b : demand)
    if (b > 0) positive = checked_add(positive, b, "demand total");
  Dinic dinic(node_count + 2);
  int source = node_count, sink = node_count + 1;
  // Finite stand-in for uncapacitated arcs; any feasible flow needs at
  // most the total routed supply on one arc.
  i64 inf_stand_in = std::max<i64>(positive, 1);
  std::vector<int> edge_id(arcs.size());
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    i64 cap = capacity[a] == kInfiniteCapacity ? inf_stand_in : capacity[a];
    edge_id[a] = dinic.add_edge(arcs[a].tail, arcs[a].head, cap);
  }
  for (int v = 0; v < node_count; ++v) {
    i64 b = demand[static_cast<std::size_t>(v)];
    if (b < 0) dinic.add_edge(source, v, -b);
    if (b > 0) dinic.add_edge(v, sink, b);
  }
  DemandFlowResult res;
  res.feasible = dinic.max_flow(source, sink) == positive;
  if (res.feasible) {
    res.flow.resize(arcs.size());
    for (std::size_t a = 0; a < arcs.size(); ++a) res.flow[a] = dinic.flow_on(edge_id[a]);
  }
  return res;
}

}  // namespace mcf
