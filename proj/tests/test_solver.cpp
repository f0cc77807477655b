#include <doctest.h>

#include <sstream>

#include "mcf/gen.hpp"
#include "mcf/oracle.hpp"
#include "mcf/solver.hpp"

using namespace mcf;

TEST_CASE("pipeline solves the running example end to end") {
  ProblemInstance inst = parse_dimacs(std::string("p min 2 1\nn 1 -1\nn 2 1\na 1 2 0 3 5\n"));
  SolveReport rep = solve(inst);
  REQUIRE(rep.solution.status == SolveStatus::Optimal);
  CHECK(rep.solution.objective == 5);
  CHECK(rep.solution.flow == std::vector<i64>{1});
  CHECK(write_solution(rep.solution).substr(0, 8) == "s 5\nf 1 ");
  CHECK(check_solution(inst, rep.solution).ok);
}

TEST_CASE("pipeline recognizes infeasible and unbounded instances") {
  SUBCASE("stuck sink") {
    ProblemInstance inst;
    inst.node_count = 2;
    inst.arcs = {{1, 0}};
    inst.cost = {1};
    inst.capacity = {5};
    inst.demand = {-1, 1};
    CHECK(solve(inst).solution.status == SolveStatus::Infeasible);
  }
  SUBCASE("negative uncapacitated cycle") {
    ProblemInstance inst;
    inst.node_count = 2;
    inst.arcs = {{0, 1}, {1, 0}};
    inst.cost = {1, -2};
    inst.capacity = {kInfiniteCapacity, kInfiniteCapacity};
    inst.demand = {0, 0};
    CHECK(solve(inst).solution.status == SolveStatus::Unbounded);
  }
  SUBCASE("negative cycle with unmeetable demand is infeasible") {
    ProblemInstance inst;
    inst.node_count = 3;
    inst.arcs = {{0, 1}, {1, 0}};
    inst.cost = {1, -2};
    inst.capacity = {kInfiniteCapacity, kInfiniteCapacity};
    inst.demand = {-1, 0, 1};
    CHECK(solve(inst).solution.status == SolveStatus::Infeasible);
  }
}

TEST_CASE("disconnected instances are solved per component") {
  ProblemInstance inst;
  inst.node_count = 4;
  inst.arcs = {{0, 1}, {2, 3}};
  inst.cost = {2, 3};
  inst.capacity = {5, 5};
  inst.demand = {-1, 1, -2, 2};
  SolveReport rep = solve(inst);
  REQUIRE(rep.solution.status == SolveStatus::Optimal);
  CHECK(rep.solution.objective == 2 * 1 + 3 * 2);
  CHECK(check_solution(inst, rep.solution).ok);
}

TEST_CASE("pipeline matches the oracle across random instances") {
  GenSpec spec;
  spec.node_count = 8;
  spec.arc_count = 14;
  spec.cost_floor = -5;
  spec.max_cost = 8;
  spec.max_capacity = 9;
  spec.demand_units = 6;
  spec.infinite_probability = 0.2;
  spec.zero_cap_probability = 0.1;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    ProblemInstance inst = generate(spec, seed);
    Solution ref = oracle::ssp_mincost(inst);
    SolverOptions opt;
    opt.seed = seed;
    SolveReport rep = solve(inst, opt);
    CHECK(rep.solution.status == ref.status);
    if (ref.status == SolveStatus::Optimal) {
      CHECK(rep.solution.objective == ref.objective);
      CHECK(check_solution(inst, rep.solution).ok);
    }
  }
}

TEST_CASE("both electrical backends produce optimal answers") {
  GenSpec spec;
  spec.node_count = 7;
  spec.arc_count = 12;
  spec.max_cost = 6;
  spec.max_capacity = 7;
  spec.demand_units = 5;
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    ProblemInstance inst = generate(spec, seed);
    Solution ref = oracle::ssp_mincost(inst);
    for (eflow::FlowBackend backend :
         {eflow::FlowBackend::NaiveWalk, eflow::FlowBackend::OffsetTree}) {
      SolverOptions opt;
      opt.seed = seed;
      opt.backend = backend;
      SolveReport rep = solve(inst, opt);
      CHECK(rep.solution.status == ref.status);
      if (ref.status == SolveStatus::Optimal) CHECK(rep.solution.objective == ref.objective);
    }
  }
}

TEST_CASE("identical seeds give byte-identical solutions and traces") {
  GenSpec spec;
  spec.node_count = 6;
  spec.arc_count = 11;
  spec.demand_units = 5;
  ProblemInstance inst = generate(spec, 4);
  auto run = [&](std::uint64_t seed) {
    std::ostringstream trace;
    SolverOptions opt;
    opt.seed = seed;
    opt.trace = &trace;
    SolveReport rep = solve(inst, opt);
    return std::pair<std::string, std::string>(write_solution(rep.solution), trace.str());
  };
  auto [sol_a, trace_a] = run(123);
  auto [sol_b, trace_b] = run(123);
  CHECK(sol_a == sol_b);
  CHECK(trace_a == trace_b);
  auto [sol_c, trace_c] = run(124);
  CHECK(sol_c == sol_a);  // optimum is seed-independent
  CHECK(trace_c != trace_a);
}

TEST_CASE("exact mode agrees on a small instance") {
  GenSpec spec;
  spec.node_count = 4;
  spec.arc_count = 6;
  spec.max_cost = 4;
  spec.max_capacity = 5;
  spec.demand_units = 3;
  ProblemInstance inst = generate(spec, 2);
  Solution ref = oracle::ssp_mincost(inst);
  SolverOptions opt;
  opt.exact_mode = true;
  SolveReport rep = solve(inst, opt);
  CHECK(rep.solution.status == ref.status);
  if (ref.status == SolveStatus::Optimal) CHECK(rep.solution.objective == ref.objective);
}

TEST_CASE("exact mode is capped at ten nodes") {
  GenSpec spec;
  spec.node_count = 12;
  spec.arc_count = 14;
  ProblemInstance inst = generate(spec, 0);
  SolverOptions opt;
  opt.exact_mode = true;
  CHECK_THROWS_AS(solve(inst, opt), ContractViolation);
}
