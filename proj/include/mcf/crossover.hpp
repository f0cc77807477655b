#pragma once

#include <span>
#include <vector>

#include "mcf/core.hpp"

namespace mcf {

enum class Branch { UseOut, UseIn };

/// Branch rule of the frontier expansion: grow along an outgoing arc iff
/// the frontier still owes flow (b(S) < 0) or no arc enters it.
inline Branch select_branch(i64 b_of_s, bool in_queue_has_live) {
  return (b_of_s < 0 || !in_queue_has_live) ? Branch::UseOut : Branch::UseIn;
}

struct CrossoverIteration {
  int k = 0;            // 1-based
  int arc = -1;         // selected arc a^k
  Branch branch = Branch::UseOut;
  int settled_node = -1;
  double delta = 0.0;   // lazy shift Delta^k
  double objective = 0.0;  // b^T y^k with the shift materialized
};

struct CrossoverResult {
  SolveStatus status = SolveStatus::Optimal;  // Optimal or Infeasible
  std::vector<i64> y;          // exact integral potentials, y[start] = 0
  i64 b_dot_y = 0;
  i64 min_slack = 0;           // min_a c_a + y_tail - y_head, exact
  std::vector<CrossoverIteration> iterations;
  double delta0 = 0.0;         // -y0[start]
};

/// Frontier-growing rounding of fractional potentials y0 into exact
/// integral potentials. Requires a weakly connected graph and, for
/// optimality, a primal certificate x^T s0 < 1 held by the caller.
/// Start node: index 0. Float keys order candidates; settled potentials
/// are computed in integer arithmetic only.
CrossoverResult crossover(int node_count, std::span<const Arc> arcs, std::span<const i64> cost,
                          std::span<const i64> demand, std::span<const double> y0);

}  // namespace mcf
