#include <doctest.h>

#include <sstream>

#include "mcf/core.hpp"
#include "mcf/gen.hpp"
#include "mcf/rng.hpp"

using namespace mcf;

TEST_CASE("parse_dimacs reads the minimal instance") {
  ProblemInstance inst = parse_dimacs(std::string(
      "c tiny\np min 2 1\nn 1 -1\nn 2 1\na 1 2 0 3 2\n"));
  CHECK(inst.node_count == 2);
  CHECK(inst.arc_count() == 1);
  CHECK(inst.demand == std::vector<i64>{-1, 1});
  CHECK(inst.arcs[0] == Arc{0, 1});
  CHECK(inst.capacity[0] == 3);
  CHECK(inst.cost[0] == 2);
}

TEST_CASE("parse_dimacs accepts an empty arc section") {
  ProblemInstance inst = parse_dimacs(std::string("p min 3 0\n"));
  CHECK(inst.node_count == 3);
  CHECK(inst.arc_count() == 0);
  CHECK(inst.demand == std::vector<i64>{0, 0, 0});
}

TEST_CASE("parse_dimacs reports the offending line") {
  try {
    parse_dimacs(std::string("p min 2 1\nn 1 -1\nn 2 1\na 1 2 0 3 abc\n"));
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line_number == 4);
  }
}

TEST_CASE("parse_dimacs rejects nonzero lower bounds") {
  CHECK_THROWS_AS(parse_dimacs(std::string("p min 2 1\nn 1 -1\nn 2 1\na 1 2 1 3 2\n")),
                  Error);
}

TEST_CASE("parse_dimacs rejects an unbalanced demand vector") {
  CHECK_THROWS_AS(parse_dimacs(std::string("p min 2 1\nn 1 -1\nn 2 2\na 1 2 0 3 2\n")),
                  ValidationError);
}

TEST_CASE("infinite-capacity spellings") {
  ProblemInstance a = parse_dimacs(std::string("p min 2 1\nn 1 -1\nn 2 1\na 1 2 0 inf 2\n"));
  ProblemInstance b = parse_dimacs(std::string("p min 2 1\nn 1 -1\nn 2 1\na 1 2 0 -1 2\n"));
  ProblemInstance c = parse_dimacs(std::string("p min 2 1\nn 1 -1\nn 2 1\na 1 2 0 0 2\n"), true);
  CHECK(a.capacity[0] == kInfiniteCapacity);
  CHECK(b.capacity[0] == kInfiniteCapacity);
  CHECK(c.capacity[0] == kInfiniteCapacity);
}

TEST_CASE("apply_incidence on a single arc") {
  std::vector<Arc> arcs{{0, 1}};
  std::vector<double> f{1.0};
  auto out = apply_incidence<double>(2, arcs, f);
  CHECK(out == std::vector<double>{-1.0, 1.0});
}

TEST_CASE("directed cycles lie in the kernel of the incidence operator") {
  std::vector<Arc> arcs{{0, 1}, {1, 2}, {2, 0}};
  std::vector<double> f{5.0, 5.0, 5.0};
  auto out = apply_incidence<double>(3, arcs, f);
  for (double v : out) CHECK(v == doctest::Approx(0.0));
}

TEST_CASE("apply_incidence on a triangle with distinct flows") {
  std::vector<Arc> arcs{{0, 1}, {1, 2}, {2, 0}};
  std::vector<double> f{1.0, 2.0, 3.0};
  auto out = apply_incidence<double>(3, arcs, f);
  CHECK(out == std::vector<double>{2.0, -1.0, -1.0});
}

TEST_CASE("adjoint_slacks evaluates s = c - A^T y") {
  std::vector<Arc> arcs{{0, 1}};
  std::vector<i64> c{5};
  SUBCASE("tight") {
    std::vector<double> y{0.0, 5.0};
    CHECK(adjoint_slacks<double, i64>(arcs, c, y)[0] == doctest::Approx(0.0));
  }
  SUBCASE("zero potentials give s = c") {
    std::vector<double> y{0.0, 0.0};
    CHECK(adjoint_slacks<double, i64>(arcs, c, y)[0] == doctest::Approx(5.0));
  }
  SUBCASE("fractional potentials") {
    std::vector<double> y{0.2, 5.1};
    CHECK(adjoint_slacks<double, i64>(arcs, c, y)[0] == doctest::Approx(0.1));
  }
}

TEST_CASE("adjointness of incidence and slack operators") {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 2 + static_cast<int>(rng.next_below(8));
    int m = 1 + static_cast<int>(rng.next_below(12));
    std::vector<Arc> arcs;
    std::vector<i64> cost;
    for (int a = 0; a < m; ++a) {
      int t = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
      int h = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
      if (t == h) h = (h + 1) % n;
      arcs.push_back({t, h});
      cost.push_back(rng.next_range(-9, 9));
    }
    std::vector<double> f, y;
    for (int a = 0; a < m; ++a) f.push_back(rng.next_double() * 4.0 - 2.0);
    for (int v = 0; v < n; ++v) y.push_back(rng.next_double() * 4.0 - 2.0);
    auto Af = apply_incidence<double>(n, arcs, f);
    auto s = adjoint_slacks<double, i64>(arcs, cost, y);
    // y^T(Af) + (s - c)^T f = 0 for any f, y.
    double lhs = 0.0;
    for (int v = 0; v < n; ++v) lhs += y[static_cast<std::size_t>(v)] * Af[static_cast<std::size_t>(v)];
    for (int a = 0; a < m; ++a)
      lhs += (s[static_cast<std::size_t>(a)] - static_cast<double>(cost[static_cast<std::size_t>(a)])) *
             f[static_cast<std::size_t>(a)];
    CHECK(std::abs(lhs) <= 1e-9 * (1.0 + std::abs(lhs)));
  }
}

TEST_CASE("DIMACS round-trip preserves the instance exactly") {
  GenSpec spec;
  spec.cost_floor = -5;
  spec.infinite_probability = 0.3;
  spec.zero_cap_probability = 0.1;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    ProblemInstance inst = generate(spec, seed);
    ProblemInstance back = parse_dimacs(write_dimacs(inst));
    CHECK(back.node_count == inst.node_count);
    CHECK(back.arcs == inst.arcs);
    CHECK(back.demand == inst.demand);
    CHECK(back.cost == inst.cost);
    CHECK(back.capacity == inst.capacity);
  }
}

TEST_CASE("solution writer format") {
  Solution sol;
  sol.objective = 5;
  sol.flow = {1};
  sol.potential = {0, 5};
  CHECK(write_solution(sol) == "s 5\nf 1 1\ny 1 0\ny 2 5\n");
  Solution bad;
  bad.status = SolveStatus::Infeasible;
  CHECK(write_solution(bad) == "s INFEASIBLE\n");
}

TEST_CASE("solution checker accepts the valid pair and flags violations") {
  ProblemInstance inst = parse_dimacs(std::string("p min 2 1\nn 1 -1\nn 2 1\na 1 2 0 3 5\n"));
  Solution sol;
  sol.objective = 5;
  sol.flow = {1};
  sol.potential = {0, 5};
  CHECK(check_solution(inst, sol).ok);

  Solution wrong = sol;
  wrong.flow = {2};  // breaks conservation
  CHECK_FALSE(check_solution(inst, wrong).ok);

  Solution off = sol;
  off.objective = 4;
  CHECK_FALSE(check_solution(inst, off).ok);
}

TEST_CASE("weak components") {
  std::vector<Arc> arcs{{0, 1}, {2, 3}};
  int count = 0;
  auto comp = weak_components(5, arcs, &count);
  CHECK(count == 3);
  CHECK(comp[0] == comp[1]);
  CHECK(comp[2] == comp[3]);
  CHECK(comp[0] != comp[2]);
  CHECK(comp[4] != comp[0]);
}
