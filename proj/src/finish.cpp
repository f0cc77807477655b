#include "mcf/finish.hpp"

#include "mcf/maxflow.hpp"

namespace mcf {

i128 dual_objective(std::span<const i64> demand, std::span<const i64> y) {
  i128 obj = 0;
  for (std::size_t v = 0; v < demand.size(); ++v)
    obj += checked_mul(i128(demand[v]), y[v], "b^T y");
  return obj;
}

bool check_infeasible(const AuxiliaryNetwork& aux, std::span<const i64> y,
                      const ProblemInstance& reduced) {
  InstanceStats st = InstanceStats::of(reduced);
  i128 mcu = checked_mul(checked_mul(i128(reduced.arc_count()), st.max_abs_cost, "mCU"),
                         st.max_finite_capacity, "mCU");
  return dual_objective(aux.demand, y) > mcu;
}

std::vector<i64> recover_flow(const AuxiliaryNetwork& aux, std::span<const i64> y) {
  std::vector<Arc> admissible;
  std::vector<int> admissible_id;  // auxiliary arc index
  for (int a = 0; a < aux.arc_count(); ++a) {
    if (aux.kind[static_cast<std::size_t>(a)] == AuxArcKind::Hat) continue;
    i64 slack = checked_add(
        aux.cost[static_cast<std::size_t>(a)],
        checked_add(y[static_cast<std::size_t>(aux.arcs[static_cast<std::size_t>(a)].tail)],
                    -y[static_cast<std::size_t>(aux.arcs[static_cast<std::size_t>(a)].head)], "slack"),
        "slack");
    if (slack != 0) continue;
    admissible.push_back(aux.arcs[static_cast<std::size_t>(a)]);
    admissible_id.push_back(a);
  }

  i64 norm = 0;
  for (i64 b : aux.demand) norm = checked_add(norm, b < 0 ? -b : b, "||b||_1");
  std::vector<i64> capacity(admissible.size(), std::max<i64>(norm, 1));

  DemandFlowResult routed = route_demands(aux.node_count, admissible, capacity, aux.demand);
  if (!routed.feasible)
    throw InternalError("admissible network cannot route the demands despite a feasible certificate");

  std::vector<i64> flow(static_cast<std::size_t>(aux.original_arc_count), 0);
  for (std::size_t j = 0; j < admissible.size(); ++j) {
    int a = admissible_id[j];
    if (aux.kind[static_cast<std::size_t>(a)] != AuxArcKind::Acute) continue;
    flow[static_cast<std::size_t>(aux.origin[static_cast<std::size_t>(a)])] = routed.flow[j];
  }
  return flow;
}

}  // namespace mcf
