#include <doctest.h>

#include "mcf/finish.hpp"
#include "mcf/init.hpp"

using namespace mcf;

namespace {

ProblemInstance running_example() {
  ProblemInstance inst;
  inst.node_count = 2;
  inst.arcs = {{0, 1}};
  inst.cost = {5};
  inst.capacity = {3};
  inst.demand = {-1, 1};
  return inst;
}

/// Optimal integral auxiliary potentials for the running example, found
/// by making the costed and free legs tight for a flow of 1.
std::vector<i64> optimal_aux_potentials(const AuxiliaryNetwork& aux) {
  // y = (0, 5, 5): costed leg 5 + 0 - 5 = 0, free leg 0 + 5 - 5 = 0.
  REQUIRE(aux.node_count == 3);
  return {0, 5, 5};
}

}  // namespace

TEST_CASE("dual objective is exact") {
  std::vector<i64> demand{-1, -2, 3};
  std::vector<i64> y{0, 5, 5};
  CHECK(dual_objective(demand, y) == i128(5));
}

TEST_CASE("infeasibility threshold on the running example") {
  InitResult init = balance_arcs(running_example());
  std::vector<i64> y = optimal_aux_potentials(init.aux);
  // b^T y = -1*0 + -2*5 + 3*5 = 5 <= m C U = 1 * 5 * 3.
  CHECK_FALSE(check_infeasible(init.aux, y, running_example()));

  std::vector<i64> big{0, 5000, 5000};
  CHECK(check_infeasible(init.aux, big, running_example()));
}

TEST_CASE("recover_flow reads the admissible network") {
  ProblemInstance inst = running_example();
  InitResult init = balance_arcs(inst);
  std::vector<i64> y = optimal_aux_potentials(init.aux);
  std::vector<i64> flow = recover_flow(init.aux, y);
  REQUIRE(flow.size() == 1);
  CHECK(flow[0] == 1);
  // Strong duality: c^T x = b^T y.
  CHECK(i128(inst.cost[0]) * flow[0] == dual_objective(init.aux.demand, y));
}

TEST_CASE("recover_flow returns zero flow for zero demands") {
  ProblemInstance inst;
  inst.node_count = 2;
  inst.arcs = {{0, 1}, {1, 0}};
  inst.cost = {1, 1};
  inst.capacity = {3, 3};
  inst.demand = {0, 0};
  InitResult init = balance_arcs(inst);
  // All-zero original flow is optimal; gadget nodes still need their
  // capacity routed, handled inside the admissible max-flow.
  std::vector<i64> y(static_cast<std::size_t>(init.aux.node_count), 0);
  // Make the free legs tight: y_vw = 0 already does it (cost 0, y_w = 0).
  std::vector<i64> flow = recover_flow(init.aux, y);
  CHECK(flow == std::vector<i64>{0, 0});
}
