#include <doctest.h>

#include <cmath>

#include "mcf/init.hpp"
#include "mcf/ipm.hpp"
#include "mcf/rng.hpp"

using namespace mcf;

TEST_CASE("potential at the all-ones point") {
  std::vector<double> x(4, 1.0), s(4, 1.0);
  // m = 4, p = 2, q = 6: P = 6 ln 4 - 0 - 4 ln 4 = 2 ln 4.
  CHECK(potential<double>(x, s, 6.0, 4.0) == doctest::Approx(2.0 * std::log(4.0)));
}

TEST_CASE("potential dominates the geometric-mean bound") {
  Rng rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t m = 4 + rng.next_below(12);
    double p = std::ceil(std::sqrt(static_cast<double>(m)));
    double q = static_cast<double>(m) + p;
    std::vector<double> x, s;
    for (std::size_t a = 0; a < m; ++a) {
      x.push_back(0.1 + rng.next_double() * 5.0);
      s.push_back(0.1 + rng.next_double() * 5.0);
    }
    double gap = duality_gap<double>(x, s);
    CHECK(potential<double>(x, s, q, static_cast<double>(m)) >= p * std::log(gap) - 1e-9);
  }
}

TEST_CASE("potential is invariant under primal-dual rescaling") {
  std::vector<double> x{0.5, 2.0, 1.25, 3.0};
  std::vector<double> s{4.0, 0.25, 2.0, 0.75};
  std::vector<double> ones(4, 1.0), prod(4);
  for (int a = 0; a < 4; ++a)
    prod[static_cast<std::size_t>(a)] =
        x[static_cast<std::size_t>(a)] * s[static_cast<std::size_t>(a)];
  CHECK(potential<double>(x, s, 6.0, 4.0) ==
        doctest::Approx(potential<double>(ones, prod, 6.0, 4.0)));
}

TEST_CASE("potential rejects nonpositive products") {
  std::vector<double> x{1.0, -1.0}, s{1.0, 1.0};
  CHECK_THROWS_AS(potential<double>(x, s, 4.0, 2.0), NumericAlarm);
}

TEST_CASE("projection inputs") {
  std::vector<Arc> arcs{{0, 1}, {1, 2}, {2, 0}};
  std::vector<double> x{1.0, 1.0, 1.0};
  std::vector<double> s{2.0, 1.0, 3.0};
  double q = 5.0;
  auto proj = projection_inputs<double>(3, arcs, x, s, q);
  CHECK(proj.gap == doctest::Approx(6.0));
  SUBCASE("unit x gives unit resistances and chi = A g'") {
    for (double r : proj.net.resistance) CHECK(r == doctest::Approx(1.0));
    // g' = (q / gap) * x s - 1.
    CHECK(proj.gradient[0] == doctest::Approx(5.0 / 6.0 * 2.0 - 1.0));
    auto chi = apply_incidence<double>(3, arcs, std::span<const double>(proj.gradient));
    for (int v = 0; v < 3; ++v)
      CHECK(proj.net.current_source[static_cast<std::size_t>(v)] ==
            doctest::Approx(chi[static_cast<std::size_t>(v)]));
  }
  SUBCASE("sources always sum to zero") {
    double sum = 0.0;
    for (double c : proj.net.current_source) sum += c;
    CHECK(sum == doctest::Approx(0.0));
  }
}

TEST_CASE("primal step geometry") {
  std::vector<double> x{1.0, 2.0, 4.0};
  SUBCASE("zero direction is a fixed point") {
    Decomposition<double> d;
    d.xhat = {0.0, 0.0, 0.0};
    d.xhat_inf = 0.0;
    std::vector<double> before = x;
    CHECK(primal_step<double>(x, d) == doctest::Approx(1.0));
    CHECK(x == before);
  }
  SUBCASE("normalization caps the per-coordinate move at lambda") {
    Decomposition<double> d;
    d.xhat = {2.0, -2.0, 1.0};
    d.xhat_inf = 2.0;
    double min_ratio = primal_step<double>(x, d);
    CHECK(min_ratio == doctest::Approx(0.75));
    CHECK(x[0] == doctest::Approx(1.0 * 0.75));
    CHECK(x[1] == doctest::Approx(2.0 * 1.25));
    CHECK(x[2] == doctest::Approx(4.0 * 0.875));
  }
}

TEST_CASE("dual step recomputes slacks from the potentials") {
  std::vector<Arc> arcs{{0, 1}};
  std::vector<i64> cost{5};
  std::vector<double> y{0.0, 0.0};
  std::vector<double> s{5.0};
  SUBCASE("zero voltages change nothing") {
    std::vector<double> pi{0.0, 0.0};
    dual_step<double>(arcs, cost, y, s, pi, 0.7);
    CHECK(y == std::vector<double>{0.0, 0.0});
    CHECK(s[0] == doctest::Approx(5.0));
  }
  SUBCASE("slacks follow y exactly") {
    std::vector<double> pi{1.0, 3.0};
    dual_step<double>(arcs, cost, y, s, pi, 0.5);
    CHECK(y[0] == doctest::Approx(0.5));
    CHECK(y[1] == doctest::Approx(1.5));
    CHECK(s[0] == doctest::Approx(5.0 + 0.5 - 1.5));
  }
  SUBCASE("a nonpositive slack raises the alarm") {
    std::vector<double> pi{0.0, 10.0};
    CHECK_THROWS_AS(dual_step<double>(arcs, cost, y, s, pi, 1.0), NumericAlarm);
  }
}

TEST_CASE("reduce_gap drives the running example below target") {
  ProblemInstance inst;
  inst.node_count = 2;
  inst.arcs = {{0, 1}};
  inst.cost = {2};
  inst.capacity = {3};
  inst.demand = {-1, 1};
  InitResult init = balance_arcs(inst);

  Iterate<double> it;
  it.x = init.point.x;
  it.y = init.point.y;
  it.s = init.point.s;
  double q = static_cast<double>(init.point.q);

  IpmConfig<double> cfg;
  cfg.target_gap = 0.5;
  long primal = 0, dual = 0;
  bool decreases_ok = true, ratios_ok = true, dichotomy_ok = true;
  cfg.on_iteration = [&](const IterationTrace& tr) {
    double drop = tr.potential_before - tr.potential_after;
    if (tr.kind == StepKind::Primal) {
      ++primal;
      if (drop < 1.0 / 64.0 - 1e-9) decreases_ok = false;
      if (tr.min_step_ratio < 0.75 - 1e-12) ratios_ok = false;
      if (tr.z_norm_sq < 0.25) dichotomy_ok = false;
    } else {
      ++dual;
      if (drop < 1.0 / 12.0 - 1e-9) decreases_ok = false;
      if (tr.z_norm_sq >= 0.25) dichotomy_ok = false;
    }
  };

  IpmResult res = reduce_gap<double>(init.aux.node_count, init.aux.arcs, init.aux.cost,
                                     it, q, cfg, Rng(0));
  CHECK(res.final_gap < 0.5);
  CHECK(res.iterations == primal + dual);
  CHECK(res.iterations <= static_cast<long>(64.0 * res.initial_potential + 1.0));
  CHECK(decreases_ok);
  CHECK(ratios_ok);
  CHECK(dichotomy_ok);
  for (double v : it.x) CHECK(v > 0.0);
  for (double v : it.s) CHECK(v > 0.0);

  // Conservation survives the whole run.
  auto residual = apply_incidence<double>(init.aux.node_count, init.aux.arcs,
                                          std::span<const double>(it.x));
  for (int v = 0; v < init.aux.node_count; ++v)
    CHECK(std::abs(residual[static_cast<std::size_t>(v)] -
                   static_cast<double>(init.aux.demand[static_cast<std::size_t>(v)])) <= 1e-6);
}

TEST_CASE("reduce_gap returns immediately when already below target") {
  std::vector<Arc> arcs{{0, 1}, {1, 0}};
  std::vector<i64> cost{1, 1};
  Iterate<double> it;
  it.x = {0.01, 0.01};
  it.y = {0.0, 0.0};
  it.s = {1.0, 1.0};
  IpmConfig<double> cfg;
  cfg.target_gap = 0.5;
  IpmResult res = reduce_gap<double>(2, arcs, cost, it, 6.0, cfg, Rng(0));
  CHECK(res.iterations == 0);
}
