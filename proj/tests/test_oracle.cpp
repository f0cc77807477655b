#include <doctest.h>

#include <functional>
#include <optional>

#include "mcf/gen.hpp"
#include "mcf/oracle.hpp"

using namespace mcf;

TEST_CASE("oracle solves the running example") {
  ProblemInstance inst = parse_dimacs(std::string("p min 2 1\nn 1 -1\nn 2 1\na 1 2 0 3 5\n"));
  Solution sol = oracle::ssp_mincost(inst);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective == 5);
  CHECK(sol.flow == std::vector<i64>{1});
  CHECK(check_solution(inst, sol).ok);
}

TEST_CASE("oracle flags an unreachable sink") {
  ProblemInstance inst;
  inst.node_count = 3;
  inst.arcs = {{0, 1}, {2, 1}};
  inst.cost = {1, 1};
  inst.capacity = {5, 5};
  inst.demand = {-1, -1, 2};  // node 2 is a sink with no incoming arc
  CHECK(oracle::ssp_mincost(inst).status == SolveStatus::Infeasible);
}

TEST_CASE("oracle flags a negative uncapacitated cycle") {
  ProblemInstance inst;
  inst.node_count = 2;
  inst.arcs = {{0, 1}, {1, 0}};
  inst.cost = {1, -2};
  inst.capacity = {kInfiniteCapacity, kInfiniteCapacity};
  inst.demand = {0, 0};
  CHECK(oracle::ssp_mincost(inst).status == SolveStatus::Unbounded);
}

TEST_CASE("oracle refuses instances beyond test scale") {
  ProblemInstance inst;
  inst.node_count = 60;
  inst.demand.assign(60, 0);
  CHECK_THROWS_AS(oracle::ssp_mincost(inst), ContractViolation);
}

namespace {

/// Exhaustive minimum over all integral flows; tractable for u <= 3 and
/// few arcs. Returns nullopt when infeasible.
std::optional<i64> brute_force(const ProblemInstance& inst) {
  const int m = inst.arc_count();
  std::vector<i64> flow(static_cast<std::size_t>(m), 0);
  std::optional<i64> best;
  std::function<void(int)> walk = [&](int a) {
    if (a == m) {
      auto residual = apply_incidence<i64>(inst, std::span<const i64>(flow));
      for (int v = 0; v < inst.node_count; ++v)
        if (residual[static_cast<std::size_t>(v)] != inst.demand[static_cast<std::size_t>(v)])
          return;
      i64 objective = 0;
      for (int i = 0; i < m; ++i)
        objective += inst.cost[static_cast<std::size_t>(i)] * flow[static_cast<std::size_t>(i)];
      if (!best || objective < *best) best = objective;
      return;
    }
    for (i64 v = 0; v <= inst.capacity[static_cast<std::size_t>(a)]; ++v) {
      flow[static_cast<std::size_t>(a)] = v;
      walk(a + 1);
    }
  };
  walk(0);
  return best;
}

}  // namespace

TEST_CASE("oracle matches exhaustive enumeration on tiny instances") {
  GenSpec spec;
  spec.node_count = 4;
  spec.arc_count = 6;
  spec.cost_floor = -3;
  spec.max_cost = 4;
  spec.max_capacity = 3;
  spec.demand_units = 3;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    ProblemInstance inst = generate(spec, seed);
    Solution sol = oracle::ssp_mincost(inst);
    std::optional<i64> ref = brute_force(inst);
    if (ref) {
      REQUIRE(sol.status == SolveStatus::Optimal);
      CHECK(sol.objective == *ref);
      CHECK(check_solution(inst, sol).ok);
    } else {
      CHECK(sol.status == SolveStatus::Infeasible);
    }
  }
}

TEST_CASE("duality certificates report residuals faithfully") {
  std::vector<Arc> arcs{{0, 1}};
  std::vector<i64> cost{5};
  std::vector<i64> demand{-1, 1};
  SUBCASE("exact optimal pair") {
    std::vector<double> x{1.0}, y{0.0, 5.0};
    auto rep = oracle::duality_certificates(2, arcs, cost, demand, x, y);
    CHECK(rep.primal_residual_inf == doctest::Approx(0.0));
    CHECK(rep.min_slack == doctest::Approx(0.0));
    CHECK(rep.gap == doctest::Approx(0.0));
    CHECK(rep.max_cs_violation == doctest::Approx(0.0));
  }
  SUBCASE("perturbed pair") {
    std::vector<double> x{1.5}, y{0.0, 4.0};
    auto rep = oracle::duality_certificates(2, arcs, cost, demand, x, y);
    CHECK(rep.primal_residual_inf == doctest::Approx(0.5));
    CHECK(rep.min_slack == doctest::Approx(1.0));
    CHECK(rep.gap == doctest::Approx(1.5));
  }
}
