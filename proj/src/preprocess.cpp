#include "mcf/preprocess.hpp"

#include <sstream>

#include <json.hpp>

namespace mcf {

namespace {

const char* kind_name(ReductionRecord::Kind k) {
  switch (k) {
    case ReductionRecord::Kind::ZeroCapDelete: return "zero_cap_delete";
    case ReductionRecord::Kind::CapacityCap: return "capacity_cap";
    case ReductionRecord::Kind::NegCostFlip: return "neg_cost_flip";
    case ReductionRecord::Kind::ParallelSplit: return "parallel_split";
  }
  return "?";
}

}  // namespace

std::string ReductionTrace::to_json() const {
  nlohmann::json j;
  j["original_arc_count"] = original_arc_count;
  j["objective_offset"] = objective_offset;
  auto& records_json = j["records"] = nlohmann::json::array();
  for (const ReductionRecord& r : records) {
    nlohmann::json rj;
    rj["kind"] = kind_name(r.kind);
    rj["arc"] = r.original_arc;
    if (r.kind == ReductionRecord::Kind::CapacityCap || r.kind == ReductionRecord::Kind::NegCostFlip)
      rj["capacity"] = r.capped_capacity;
    if (r.kind == ReductionRecord::Kind::NegCostFlip) rj["cost_contribution"] = r.cost_contribution;
    records_json.push_back(std::move(rj));
  }
  return j.dump();
}

ReductionTrace empty_trace(const ProblemInstance& inst) {
  ReductionTrace t;
  t.original_arc_count = inst.arc_count();
  t.arc_origin.resize(inst.arcs.size());
  for (std::size_t a = 0; a < inst.arcs.size(); ++a) t.arc_origin[a] = static_cast<int>(a);
  t.arc_flipped.assign(inst.arcs.size(), 0);
  t.flip_capacity.assign(inst.arcs.size(), 0);
  t.arc_deleted.assign(inst.arcs.size(), 0);
  return t;
}

bool detect_unbounded(const ProblemInstance& inst) {
  std::vector<std::size_t> inf_arcs;
  for (std::size_t a = 0; a < inst.arcs.size(); ++a)
    if (inst.capacity[a] == kInfiniteCapacity) inf_arcs.push_back(a);
  if (inf_arcs.empty()) return false;

  // Bellman-Ford from a virtual source connected to every node with
  // length 0, over the uncapacitated arcs only.
  std::vector<i128> dist(static_cast<std::size_t>(inst.node_count), 0);
  for (int round = 0; round < inst.node_count; ++round) {
    bool changed = false;
    for (std::size_t a : inf_arcs) {
      std::size_t v = static_cast<std::size_t>(inst.arcs[a].tail);
      std::size_t w = static_cast<std::size_t>(inst.arcs[a].head);
      if (dist[v] + inst.cost[a] < dist[w]) {
        dist[w] = dist[v] + inst.cost[a];
        changed = true;
      }
    }
    if (!changed) return false;
  }
  return true;
}

ProblemInstance delete_zero_capacity_arcs(const ProblemInstance& inst, ReductionTrace& trace) {
  ProblemInstance out;
  out.node_count = inst.node_count;
  out.demand = inst.demand;
  std::vector<int> origin;
  std::vector<char> flipped;
  for (std::size_t a = 0; a < inst.arcs.size(); ++a) {
    if (inst.capacity[a] == 0) {
      trace.records.push_back({ReductionRecord::Kind::ZeroCapDelete, trace.arc_origin[a], 0, 0});
      trace.arc_deleted[static_cast<std::size_t>(trace.arc_origin[a])] = 1;
      continue;
    }
    out.arcs.push_back(inst.arcs[a]);
    out.cost.push_back(inst.cost[a]);
    out.capacity.push_back(inst.capacity[a]);
    origin.push_back(trace.arc_origin[a]);
    flipped.push_back(trace.arc_flipped[a]);
  }
  trace.arc_origin = std::move(origin);
  trace.arc_flipped = std::move(flipped);
  return out;
}

ProblemInstance finitize_capacities(const ProblemInstance& inst, ReductionTrace& trace) {
  i128 norm = 0;
  for (i64 b : inst.demand) norm += (b < 0 ? -b : b);
  // Path flows of an optimum need at most ||b||_1 / 2 per arc. With
  // negative costs present, an optimum may add circulations on cycles
  // through uncapacitated arcs. Every profitable cycle crosses some
  // negative-cost arc; when all of those have finite capacity the total
  // circulation is at most their summed capacity, otherwise the cycle is
  // still throttled by some finite arc (an all-uncapacitated negative
  // cycle was ruled out upstream), so all finite capacities count. The
  // extra +1 keeps some optimum strictly below the new capacity, which
  // forces every optimal dual to keep these arcs at slack >= 0, exactly
  // as an uncapacitated arc requires.
  i128 bound = (norm + 1) / 2 + 1;
  bool negative_uncapacitated = false;
  for (std::size_t a = 0; a < inst.arcs.size(); ++a)
    if (inst.cost[a] < 0 && inst.capacity[a] == kInfiniteCapacity) negative_uncapacitated = true;
  bool any_negative = false;
  for (i64 c : inst.cost)
    if (c < 0) any_negative = true;
  for (std::size_t a = 0; a < inst.arcs.size(); ++a) {
    if (inst.capacity[a] == kInfiniteCapacity) continue;
    if (inst.cost[a] < 0 || (any_negative && negative_uncapacitated)) bound += inst.capacity[a];
  }
  i64 cap_value = std::max<i64>(1, narrow_i64(bound, "finite capacity bound"));
  ProblemInstance out = inst;
  for (std::size_t a = 0; a < out.arcs.size(); ++a) {
    if (out.capacity[a] != kInfiniteCapacity) continue;
    out.capacity[a] = cap_value;
    trace.records.push_back({ReductionRecord::Kind::CapacityCap, trace.arc_origin[a], cap_value, 0});
  }
  return out;
}

ProblemInstance eliminate_negative_costs(const ProblemInstance& inst, ReductionTrace& trace) {
  ProblemInstance out = inst;
  for (std::size_t a = 0; a < out.arcs.size(); ++a) {
    if (out.cost[a] >= 0) continue;
    if (out.capacity[a] == kInfiniteCapacity)
      throw ContractViolation("eliminate_negative_costs requires finite capacities");
    i64 u = out.capacity[a];
    i64 c = out.cost[a];
    // Saturate the arc: reverse it, adjust the endpoint demands, and
    // book the saturated cost into the objective offset.
    int tail = out.arcs[a].tail, head = out.arcs[a].head;
    out.arcs[a] = {head, tail};
    out.cost[a] = -c;
    out.demand[static_cast<std::size_t>(tail)] =
        checked_add(out.demand[static_cast<std::size_t>(tail)], u, "demand update");
    out.demand[static_cast<std::size_t>(head)] =
        checked_add(out.demand[static_cast<std::size_t>(head)], -u, "demand update");
    i64 contribution = narrow_i64(checked_mul(i128(c), i128(u), "c_a*u_a"), "objective offset term");
    trace.objective_offset = checked_add(trace.objective_offset, contribution, "objective offset");
    int orig = trace.arc_origin[a];
    trace.arc_flipped[a] = trace.arc_flipped[a] ? 0 : 1;
    trace.flip_capacity[static_cast<std::size_t>(orig)] = u;
    trace.records.push_back({ReductionRecord::Kind::NegCostFlip, orig, u, contribution});
  }
  return out;
}

ProblemInstance make_capacities_odd(const ProblemInstance& inst, ReductionTrace& trace) {
  ProblemInstance out = inst;
  std::size_t original_m = out.arcs.size();
  for (std::size_t a = 0; a < original_m; ++a) {
    if (out.capacity[a] == kInfiniteCapacity)
      throw ContractViolation("make_capacities_odd requires finite capacities");
    if (out.capacity[a] <= 0)
      throw ContractViolation("make_capacities_odd requires positive capacities");
    if (out.capacity[a] % 2 != 0) continue;
    out.capacity[a] -= 1;
    out.arcs.push_back(out.arcs[a]);
    out.cost.push_back(out.cost[a]);
    out.capacity.push_back(1);
    trace.arc_origin.push_back(trace.arc_origin[a]);
    trace.arc_flipped.push_back(trace.arc_flipped[a]);
    trace.records.push_back({ReductionRecord::Kind::ParallelSplit, trace.arc_origin[a], 0, 0});
  }
  return out;
}

PreprocessResult preprocess(const ProblemInstance& inst) {
  PreprocessResult result;
  result.trace = empty_trace(inst);
  ProblemInstance cur = delete_zero_capacity_arcs(inst, result.trace);
  cur = finitize_capacities(cur, result.trace);
  cur = eliminate_negative_costs(cur, result.trace);
  cur = make_capacities_odd(cur, result.trace);
  result.reduced = std::move(cur);
  return result;
}

Solution undo_reductions(const ProblemInstance& original, const ReductionTrace& trace,
                         std::span<const i64> reduced_flow, std::span<const i64> potentials) {
  if (reduced_flow.size() != trace.arc_origin.size())
    throw ContractViolation("undo_reductions: flow length mismatch");
  Solution sol;
  sol.status = SolveStatus::Optimal;
  sol.potential.assign(potentials.begin(), potentials.end());
  std::vector<i64> acc(static_cast<std::size_t>(trace.original_arc_count), 0);
  std::vector<char> seen_flip(static_cast<std::size_t>(trace.original_arc_count), 0);
  for (std::size_t j = 0; j < reduced_flow.size(); ++j) {
    std::size_t orig = static_cast<std::size_t>(trace.arc_origin[j]);
    acc[orig] = checked_add(acc[orig], reduced_flow[j], "recovered flow");
    if (trace.arc_flipped[j]) seen_flip[orig] = 1;
  }
  sol.flow.resize(static_cast<std::size_t>(trace.original_arc_count));
  for (std::size_t o = 0; o < sol.flow.size(); ++o) {
    if (trace.arc_deleted[o]) {
      sol.flow[o] = 0;
    } else if (seen_flip[o]) {
      sol.flow[o] = trace.flip_capacity[o] - acc[o];
    } else {
      sol.flow[o] = acc[o];
    }
  }
  i128 objective = 0;
  for (std::size_t o = 0; o < sol.flow.size(); ++o)
    objective += checked_mul(i128(original.cost[o]), i128(sol.flow[o]), "objective term");
  sol.objective = narrow_i64(objective, "objective");
  return sol;
}

}  // namespace mcf
