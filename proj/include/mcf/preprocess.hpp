#pragma once

#include <string>
#include <vector>

#include "mcf/core.hpp"

namespace mcf {

/// Record of one reversible instance transformation.
struct ReductionRecord {
  enum class Kind { ZeroCapDelete, CapacityCap, NegCostFlip, ParallelSplit };
  Kind kind;
  int original_arc;       // index in the instance the chain started from
  i64 capped_capacity;    // CapacityCap: new finite value; NegCostFlip: capacity at flip time
  i64 cost_contribution;  // NegCostFlip: c_a * u_a added to the offset
};

/// Everything needed to map a solution of the reduced instance back to
/// the instance the chain started from.
struct ReductionTrace {
  int original_arc_count = 0;
  i64 objective_offset = 0;
  std::vector<ReductionRecord> records;

  // Per reduced arc: originating arc index and whether the reduced arc
  // is the reversal of the original (negative-cost saturation).
  std::vector<int> arc_origin;
  std::vector<char> arc_flipped;
  // Capacity each original arc had when (and if) it was flipped.
  std::vector<i64> flip_capacity;  // indexed by original arc, 0 if unused
  std::vector<char> arc_deleted;   // original arcs removed outright

  std::string to_json() const;
};

/// True iff the subgraph of uncapacitated arcs contains a directed
/// negative-cost cycle (Bellman-Ford restricted to those arcs).
bool detect_unbounded(const ProblemInstance& inst);

/// Reduced instance plus the trace of every step. Chain, in order:
/// zero-capacity deletion, capacity finitization, negative-cost
/// saturation, odd-capacity splitting. Requires detect_unbounded(inst)
/// to be false.
struct PreprocessResult {
  ProblemInstance reduced;
  ReductionTrace trace;
};
PreprocessResult preprocess(const ProblemInstance& inst);

// Individual steps, exposed for tests. Each extends the trace in place.
ProblemInstance delete_zero_capacity_arcs(const ProblemInstance&, ReductionTrace&);
ProblemInstance finitize_capacities(const ProblemInstance&, ReductionTrace&);
ProblemInstance eliminate_negative_costs(const ProblemInstance&, ReductionTrace&);
ProblemInstance make_capacities_odd(const ProblemInstance&, ReductionTrace&);

ReductionTrace empty_trace(const ProblemInstance&);

/// Maps flow + potentials of the reduced instance back to the original.
Solution undo_reductions(const ProblemInstance& original, const ReductionTrace& trace,
                         std::span<const i64> reduced_flow, std::span<const i64> potentials);

}  // namespace mcf
