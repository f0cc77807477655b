#include "mcf/gen.hpp"

#include <algorithm>
#include <cmath>

#include "mcf/rng.hpp"

namespace mcf {

namespace {

void add_arc(ProblemInstance& inst, int tail, int head, const GenSpec& spec, Rng& rng) {
  inst.arcs.push_back({tail, head});
  inst.cost.push_back(rng.next_range(spec.cost_floor, spec.max_cost));
  double roll = rng.next_double();
  if (roll < spec.zero_cap_probability)
    inst.capacity.push_back(0);
  else if (roll < spec.zero_cap_probability + spec.infinite_probability)
    inst.capacity.push_back(kInfiniteCapacity);
  else
    inst.capacity.push_back(rng.next_range(1, spec.max_capacity));
}

/// Connecting skeleton arcs (tail, head ordered by the family layout).
std::vector<Arc> skeleton(const GenSpec& spec, Rng& rng) {
  std::vector<Arc> arcs;
  const int n = spec.node_count;
  switch (spec.family) {
    case GenFamily::RandomConnected:
      for (int v = 1; v < n; ++v) {
        int u = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(v)));
        if (rng.next_below(2) == 0)
          arcs.push_back({u, v});
        else
          arcs.push_back({v, u});
      }
      break;
    case GenFamily::Grid: {
      int cols = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(n))));
      for (int v = 1; v < n; ++v) {
        int left = v - 1;
        int up = v - cols;
        int u = (v % cols != 0) ? left : up;
        if (u < 0) u = left;
        if (rng.next_below(2) == 0)
          arcs.push_back({u, v});
        else
          arcs.push_back({v, u});
      }
      break;
    }
    case GenFamily::Transshipment: {
      // Sources feed a middle layer that feeds sinks; a chain through the
      // middle keeps everything weakly connected.
      int third = std::max(1, n / 3);
      for (int v = 1; v < n; ++v) {
        int layer = std::min(2, v / third);
        int u;
        if (layer == 0)
          u = v - 1;
        else if (layer == 1)
          u = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(third)));
        else
          u = third + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(std::max(1, third))));
        if (u == v) u = v - 1;
        arcs.push_back({u, v});
      }
      break;
    }
  }
  return arcs;
}

}  // namespace

GenFamily parse_family(const std::string& name) {
  if (name == "random-connected") return GenFamily::RandomConnected;
  if (name == "grid") return GenFamily::Grid;
  if (name == "transshipment") return GenFamily::Transshipment;
  throw ValidationError("unknown generator family: " + name);
}

ProblemInstance generate(const GenSpec& spec, std::uint64_t seed) {
  if (spec.node_count < 1) throw ValidationError("generator needs at least one node");
  if (spec.arc_count < spec.node_count - 1)
    throw ValidationError("generator needs at least n-1 arcs to stay connected");
  Rng rng(seed, 0x67656eull);

  ProblemInstance inst;
  inst.node_count = spec.node_count;
  inst.demand.assign(static_cast<std::size_t>(spec.node_count), 0);

  for (const Arc& arc : skeleton(spec, rng)) add_arc(inst, arc.tail, arc.head, spec, rng);
  while (inst.arc_count() < spec.arc_count) {
    int tail = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(spec.node_count)));
    int head = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(spec.node_count)));
    if (tail == head) continue;
    add_arc(inst, tail, head, spec, rng);
  }

  if (spec.node_count > 1) {
    i64 units = rng.next_range(0, spec.demand_units);
    for (i64 i = 0; i < units; ++i) {
      int src = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(spec.node_count)));
      int dst = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(spec.node_count)));
      if (src == dst) continue;
      inst.demand[static_cast<std::size_t>(src)] -= 1;
      inst.demand[static_cast<std::size_t>(dst)] += 1;
    }
  }
  inst.validate();
  return inst;
}

}  // namespace mcf
