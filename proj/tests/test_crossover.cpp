#include <doctest.h>

#include "mcf/crossover.hpp"
#include "mcf/gen.hpp"
#include "mcf/init.hpp"
#include "mcf/ipm.hpp"
#include "mcf/oracle.hpp"
#include "mcf/preprocess.hpp"
#include "mcf/rng.hpp"

using namespace mcf;

TEST_CASE("select_branch rule") {
  CHECK(select_branch(-3, true) == Branch::UseOut);
  CHECK(select_branch(0, false) == Branch::UseOut);
  CHECK(select_branch(0, true) == Branch::UseIn);
  CHECK(select_branch(2, true) == Branch::UseIn);
}

TEST_CASE("crossover hand example") {
  std::vector<Arc> arcs{{0, 1}};
  std::vector<i64> cost{5};
  std::vector<i64> demand{-1, 1};
  std::vector<double> y0{0.2, 5.1};
  CrossoverResult r = crossover(2, arcs, cost, demand, y0);
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.y == std::vector<i64>{0, 5});
  CHECK(r.b_dot_y == 5);
  CHECK(r.min_slack == 0);
  REQUIRE(r.iterations.size() == 1);
  CHECK(r.iterations[0].arc == 0);
  CHECK(r.iterations[0].branch == Branch::UseOut);
  CHECK(r.iterations[0].delta == doctest::Approx(-0.1));
}

TEST_CASE("integral optimal y0 collapses to a shift") {
  std::vector<Arc> arcs{{0, 1}, {1, 2}};
  std::vector<i64> cost{2, 3};
  std::vector<i64> demand{-1, 0, 1};
  std::vector<double> y0{7.0, 9.0, 12.0};  // integral, tight everywhere
  CrossoverResult r = crossover(3, arcs, cost, demand, y0);
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.y == std::vector<i64>{0, 2, 5});
  CHECK(r.b_dot_y == 5);
}

TEST_CASE("crossover signals infeasibility when the frontier is stuck") {
  // Node 0 owes a unit but no arc leaves it.
  std::vector<Arc> arcs{{1, 0}};
  std::vector<i64> cost{1};
  std::vector<i64> demand{-1, 1};
  std::vector<double> y0{0.0, 0.0};
  CHECK(crossover(2, arcs, cost, demand, y0).status == SolveStatus::Infeasible);
}

TEST_CASE("crossover against the oracle on certified IPM outputs") {
  GenSpec spec;
  spec.node_count = 5;
  spec.arc_count = 8;
  spec.max_cost = 6;
  spec.max_capacity = 7;
  spec.demand_units = 4;
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    ProblemInstance inst = generate(spec, seed);
    PreprocessResult pre = preprocess(inst);
    int comp_count = 0;
    weak_components(pre.reduced.node_count, pre.reduced.arcs, &comp_count);
    if (comp_count != 1 || pre.reduced.arc_count() < 2) continue;
    Solution feasibility = oracle::ssp_mincost(pre.reduced);
    if (feasibility.status != SolveStatus::Optimal) continue;

    InitResult init = balance_arcs(pre.reduced);
    Iterate<double> it;
    it.x = init.point.x;
    it.y = init.point.y;
    it.s = init.point.s;
    IpmConfig<double> cfg;
    cfg.target_gap = 0.5;
    reduce_gap<double>(init.aux.node_count, init.aux.arcs, init.aux.cost, it,
                       static_cast<double>(init.point.q), cfg, Rng(seed));

    CrossoverResult r = crossover(init.aux.node_count, init.aux.arcs, init.aux.cost,
                                  init.aux.demand, it.y);
    REQUIRE(r.status == SolveStatus::Optimal);
    CHECK(r.min_slack >= 0);

    // One new tight arc per settled node; both endpoints are settled, so
    // the final potentials witness the zero slack directly.
    for (const CrossoverIteration& itn : r.iterations) {
      const Arc& a = init.aux.arcs[static_cast<std::size_t>(itn.arc)];
      i64 slack = init.aux.cost[static_cast<std::size_t>(itn.arc)] +
                  r.y[static_cast<std::size_t>(a.tail)] - r.y[static_cast<std::size_t>(a.head)];
      CHECK(slack == 0);
    }

    // Monotone objective across iterations.
    for (std::size_t k = 1; k < r.iterations.size(); ++k)
      CHECK(r.iterations[k].objective >= r.iterations[k - 1].objective - 1e-6);

    // Optimality on the auxiliary network.
    ProblemInstance aux_inst;
    aux_inst.node_count = init.aux.node_count;
    aux_inst.arcs = init.aux.arcs;
    aux_inst.cost = init.aux.cost;
    aux_inst.demand = init.aux.demand;
    aux_inst.capacity.assign(init.aux.arcs.size(), kInfiniteCapacity);
    Solution ref = oracle::ssp_mincost(aux_inst);
    REQUIRE(ref.status == SolveStatus::Optimal);
    CHECK(r.b_dot_y == ref.objective);
    ++checked;
  }
  CHECK(checked >= 10);
}
