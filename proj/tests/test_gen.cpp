#include <doctest.h>

#include "mcf/gen.hpp"

using namespace mcf;

TEST_CASE("generator is deterministic per (spec, seed)") {
  GenSpec spec;
  spec.cost_floor = -3;
  spec.infinite_probability = 0.2;
  CHECK(write_dimacs(generate(spec, 9)) == write_dimacs(generate(spec, 9)));
  CHECK(write_dimacs(generate(spec, 9)) != write_dimacs(generate(spec, 10)));
}

TEST_CASE("generated instances are connected and balanced") {
  for (GenFamily family :
       {GenFamily::RandomConnected, GenFamily::Grid, GenFamily::Transshipment}) {
    GenSpec spec;
    spec.family = family;
    spec.node_count = 9;
    spec.arc_count = 14;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      ProblemInstance inst = generate(spec, seed);
      CHECK(inst.node_count == 9);
      CHECK(inst.arc_count() == 14);
      int comp_count = 0;
      weak_components(inst.node_count, inst.arcs, &comp_count);
      CHECK(comp_count == 1);
      i64 sum = 0;
      for (i64 b : inst.demand) sum += b;
      CHECK(sum == 0);
      CHECK_NOTHROW(inst.validate());
    }
  }
}

TEST_CASE("generator enforces the skeleton lower bound") {
  GenSpec spec;
  spec.node_count = 10;
  spec.arc_count = 5;
  CHECK_THROWS_AS(generate(spec, 0), ValidationError);
}

TEST_CASE("family names parse") {
  CHECK(parse_family("random-connected") == GenFamily::RandomConnected);
  CHECK(parse_family("grid") == GenFamily::Grid);
  CHECK(parse_family("transshipment") == GenFamily::Transshipment);
  CHECK_THROWS_AS(parse_family("nope"), ValidationError);
}
