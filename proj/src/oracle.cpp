#include "mcf/oracle.hpp"

#include <algorithm>

#include "mcf/maxflow.hpp"

namespace mcf {
namespace oracle {

namespace {

constexpr int kMaxNodes = 50;
constexpr i64 kMaxDemandNorm = 1000;

/// Directed negative cycle restricted to the uncapacitated arcs.
bool has_negative_infinite_cycle(const ProblemInstance& inst) {
  std::vector<std::size_t> inf_arcs;
  for (std::size_t a = 0; a < inst.arcs.size(); ++a)
    if (inst.capacity[a] == kInfiniteCapacity) inf_arcs.push_back(a);
  if (inf_arcs.empty()) return false;
  std::vector<i128> dist(static_cast<std::size_t>(inst.node_count), 0);
  for (int round = 0; round < inst.node_count; ++round) {
    bool changed = false;
    for (std::size_t a : inf_arcs) {
      auto v = static_cast<std::size_t>(inst.arcs[a].tail);
      auto w = static_cast<std::size_t>(inst.arcs[a].head);
      if (dist[v] + inst.cost[a] < dist[w]) {
        dist[w] = dist[v] + inst.cost[a];
        changed = true;
      }
    }
    if (!changed) return false;
  }
  return true;
}

struct Residual {
  // Per instance arc: forward residual u - x (cost c) and backward
  // residual x (cost -c).
  const ProblemInstance* inst;
  std::vector<i64> x;
  std::vector<i64> cap;  // finite stand-in capacities

  i64 residual(std::size_t edge) const {  // edge 2a = forward, 2a+1 = backward
    std::size_t a = edge / 2;
    return edge % 2 == 0 ? cap[a] - x[a] : x[a];
  }
  i64 cost(std::size_t edge) const {
    std::size_t a = edge / 2;
    return edge % 2 == 0 ? inst->cost[a] : -inst->cost[a];
  }
  int from(std::size_t edge) const {
    std::size_t a = edge / 2;
    return edge % 2 == 0 ? inst->arcs[a].tail : inst->arcs[a].head;
  }
  int to(std::size_t edge) const {
    std::size_t a = edge / 2;
    return edge % 2 == 0 ? inst->arcs[a].head : inst->arcs[a].tail;
  }
  void push(std::size_t edge, i64 amount) {
    std::size_t a = edge / 2;
    x[a] += edge % 2 == 0 ? amount : -amount;
  }
};

/// Bellman-Ford over the residual graph from the given sources (dist 0).
/// Unreachable nodes keep has[] == false. Throws on a negative cycle,
/// which cannot happen for min-cost pseudoflows.
struct BfResult {
  std::vector<i128> dist;
  std::vector<char> has;
  std::vector<int> pred_edge;  // residual edge id into each node
};

BfResult bellman_ford(const Residual& res, std::span<const char> is_source) {
  const int n = res.inst->node_count;
  BfResult out;
  out.dist.assign(static_cast<std::size_t>(n), 0);
  out.has.assign(is_source.begin(), is_source.end());
  out.pred_edge.assign(static_cast<std::size_t>(n), -1);
  const std::size_t edges = 2 * res.inst->arcs.size();
  for (int round = 0; round <= n; ++round) {
    bool changed = false;
    for (std::size_t e = 0; e < edges; ++e) {
      if (res.residual(e) <= 0) continue;
      auto v = static_cast<std::size_t>(res.from(e));
      auto w = static_cast<std::size_t>(res.to(e));
      if (!out.has[v]) continue;
      i128 nd = out.dist[v] + res.cost(e);
      if (!out.has[w] || nd < out.dist[w]) {
        out.has[w] = 1;
        out.dist[w] = nd;
        out.pred_edge[w] = static_cast<int>(e);
        changed = true;
      }
    }
    if (!changed) return out;
    if (round == n) throw InternalError("oracle: negative cycle in a min-cost residual graph");
  }
  return out;
}

}  // namespace

Solution ssp_mincost(const ProblemInstance& inst) {
  inst.validate();
  InstanceStats st = InstanceStats::of(inst);
  if (inst.node_count > kMaxNodes || st.b_one_norm > kMaxDemandNorm)
    throw ContractViolation("ssp_mincost: instance beyond the oracle scale cap");

  const bool negative_infinite_cycle = has_negative_infinite_cycle(inst);

  // Finite stand-in capacities: demands plus every finite capacity bound
  // any flow value an optimal basic solution can place on an open arc.
  i128 bound_wide = st.b_one_norm + 1;
  for (std::size_t a = 0; a < inst.arcs.size(); ++a)
    if (inst.capacity[a] != kInfiniteCapacity) bound_wide += inst.capacity[a];
  const i64 bound = narrow_i64(bound_wide, "oracle capacity bound");

  std::vector<i64> cap(inst.capacity);
  for (i64& u : cap)
    if (u == kInfiniteCapacity) u = bound;

  if (negative_infinite_cycle) {
    DemandFlowResult feas = route_demands(inst.node_count, inst.arcs, cap, inst.demand);
    Solution sol;
    sol.status = feas.feasible ? SolveStatus::Unbounded : SolveStatus::Infeasible;
    return sol;
  }

  Residual res{&inst, std::vector<i64>(inst.arcs.size(), 0), cap};
  for (std::size_t a = 0; a < inst.arcs.size(); ++a)
    if (inst.cost[a] < 0) res.x[a] = cap[a];

  const int n = inst.node_count;
  // excess_v = (Ax)_v - b_v; positive nodes push, negative nodes pull.
  std::vector<i64> excess(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v)
    excess[static_cast<std::size_t>(v)] = -inst.demand[static_cast<std::size_t>(v)];
  for (std::size_t a = 0; a < inst.arcs.size(); ++a) {
    excess[static_cast<std::size_t>(inst.arcs[a].head)] =
        checked_add(excess[static_cast<std::size_t>(inst.arcs[a].head)], res.x[a], "oracle excess");
    excess[static_cast<std::size_t>(inst.arcs[a].tail)] =
        checked_add(excess[static_cast<std::size_t>(inst.arcs[a].tail)], -res.x[a], "oracle excess");
  }

  while (true) {
    std::vector<char> sources(static_cast<std::size_t>(n), 0);
    bool any_excess = false;
    bool any_deficit = false;
    for (int v = 0; v < n; ++v) {
      if (excess[static_cast<std::size_t>(v)] > 0) {
        sources[static_cast<std::size_t>(v)] = 1;
        any_excess = true;
      } else if (excess[static_cast<std::size_t>(v)] < 0) {
        any_deficit = true;
      }
    }
    if (!any_excess) {
      if (any_deficit) return Solution{SolveStatus::Infeasible, 0, {}, {}};
      break;
    }
    BfResult bf = bellman_ford(res, sources);
    int target = -1;
    for (int v = 0; v < n; ++v) {
      if (excess[static_cast<std::size_t>(v)] >= 0 || !bf.has[static_cast<std::size_t>(v)]) continue;
      if (target < 0 || bf.dist[static_cast<std::size_t>(v)] < bf.dist[static_cast<std::size_t>(target)])
        target = v;
    }
    if (target < 0) return Solution{SolveStatus::Infeasible, 0, {}, {}};

    i64 amount = -excess[static_cast<std::size_t>(target)];
    std::vector<int> path;
    int v = target;
    while (!sources[static_cast<std::size_t>(v)]) {
      int e = bf.pred_edge[static_cast<std::size_t>(v)];
      path.push_back(e);
      amount = std::min(amount, res.residual(static_cast<std::size_t>(e)));
      v = res.from(static_cast<std::size_t>(e));
    }
    amount = std::min(amount, excess[static_cast<std::size_t>(v)]);
    for (int e : path) res.push(static_cast<std::size_t>(e), amount);
    excess[static_cast<std::size_t>(v)] -= amount;
    excess[static_cast<std::size_t>(target)] += amount;
  }

  // Potentials from residual shortest-path distances: y = dist makes the
  // slack c + y_tail - y_head nonnegative on every forward-residual arc
  // and nonpositive wherever the backward residual is open.
  std::vector<char> all(static_cast<std::size_t>(n), 1);
  BfResult bf = bellman_ford(res, all);
  Solution sol;
  sol.status = SolveStatus::Optimal;
  sol.flow = res.x;
  sol.potential.resize(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v)
    sol.potential[static_cast<std::size_t>(v)] = narrow_i64(bf.dist[static_cast<std::size_t>(v)], "oracle potential");
  i128 objective = 0;
  for (std::size_t a = 0; a < inst.arcs.size(); ++a)
    objective += checked_mul(i128(inst.cost[a]), res.x[a], "oracle objective");
  sol.objective = narrow_i64(objective, "oracle objective");
  return sol;
}

DualityReport duality_certificates(int node_count, std::span<const Arc> arcs,
                                   std::span<const i64> cost, std::span<const i64> demand,
                                   std::span<const double> x, std::span<const double> y) {
  DualityReport rep;
  std::vector<double> residual = apply_incidence<double>(node_count, arcs, x);
  for (int v = 0; v < node_count; ++v) {
    double r = residual[static_cast<std::size_t>(v)] - static_cast<double>(demand[static_cast<std::size_t>(v)]);
    rep.primal_residual_inf = std::max(rep.primal_residual_inf, std::abs(r));
  }
  rep.min_x = x.empty() ? 0.0 : *std::min_element(x.begin(), x.end());
  bool first = true;
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    double s = static_cast<double>(cost[a]) + y[static_cast<std::size_t>(arcs[a].tail)] -
               y[static_cast<std::size_t>(arcs[a].head)];
    if (first || s < rep.min_slack) rep.min_slack = s;
    first = false;
    rep.gap += x[a] * s;
    rep.max_cs_violation = std::max(rep.max_cs_violation, std::abs(x[a] * s));
  }
  return rep;
}

}  // namespace oracle
}  // namespace mcf
