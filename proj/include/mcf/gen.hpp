#pragma once

#include <cstdint>
#include <string>

#include "mcf/core.hpp"

namespace mcf {

enum class GenFamily { RandomConnected, Grid, Transshipment };

GenFamily parse_family(const std::string& name);  // throws ValidationError

struct GenSpec {
  GenFamily family = GenFamily::RandomConnected;
  int node_count = 10;
  int arc_count = 20;       // lower-bounded by the connecting skeleton
  i64 max_cost = 10;        // costs drawn from [cost_floor, max_cost]
  i64 cost_floor = 0;       // negative to allow negative costs
  i64 max_capacity = 10;
  i64 demand_units = 10;    // ||b||_1 = 2 * demand_units at most
  double infinite_probability = 0.0;  // chance an arc is uncapacitated
  double zero_cap_probability = 0.0;
};

/// Deterministic per (spec, seed): weakly connected, demand-balanced.
ProblemInstance generate(const GenSpec& spec, std::uint64_t seed);

}  // namespace mcf
