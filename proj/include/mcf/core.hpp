#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mcf/errors.hpp"
#include "mcf/numeric.hpp"

namespace mcf {

struct Arc {
  int tail;
  int head;
  friend bool operator==(const Arc&, const Arc&) = default;
};

/// Sentinel for an uncapacitated arc.
inline constexpr i64 kInfiniteCapacity = std::numeric_limits<i64>::max();

/// Directed multigraph with integer demands, costs and capacities.
/// Demand convention: b_v = inflow(v) - outflow(v) at a feasible flow,
/// so sinks have positive demand.
struct ProblemInstance {
  int node_count = 0;
  std::vector<Arc> arcs;
  std::vector<i64> demand;    // per node
  std::vector<i64> cost;      // per arc
  std::vector<i64> capacity;  // per arc, kInfiniteCapacity for none

  int arc_count() const { return static_cast<int>(arcs.size()); }

  /// Throws ValidationError on self-loops, size mismatches or a nonzero
  /// demand sum.
  void validate() const;
};

struct InstanceStats {
  i64 max_abs_cost = 0;       // C
  i64 max_finite_capacity = 0;  // U
  i64 gamma = 0;              // max{C, U}
  i64 b_one_norm = 0;

  static InstanceStats of(const ProblemInstance& inst);
};

enum class SolveStatus { Optimal, Infeasible, Unbounded };

const char* to_string(SolveStatus s);

struct Solution {
  SolveStatus status = SolveStatus::Optimal;
  i64 objective = 0;               // defined for Optimal only
  std::vector<i64> flow;           // per arc, Optimal only
  std::vector<i64> potential;      // per node, Optimal only
};

/// DIMACS min-cost-flow reader. `zero_cap_is_infinite` treats a literal
/// capacity token `0` as uncapacitated; the tokens `inf` and `-1` always
/// mean uncapacitated.
ProblemInstance parse_dimacs(std::istream& in, bool zero_cap_is_infinite = false);
ProblemInstance parse_dimacs(const std::string& text, bool zero_cap_is_infinite = false);

void write_dimacs(std::ostream& out, const ProblemInstance& inst);
std::string write_dimacs(const ProblemInstance& inst);

/// `s <objective>` / `s INFEASIBLE` / `s UNBOUNDED`, then `f`/`y` lines
/// (1-based indices).
void write_solution(std::ostream& out, const Solution& sol);
std::string write_solution(const Solution& sol);

/// Af for the incidence operator A of the given arc list: the entry at
/// node v is sum of flow into v minus sum of flow out of v. The matrix
/// is never materialized.
template <class T>
std::vector<T> apply_incidence(int node_count, std::span<const Arc> arcs, std::span<const T> flow) {
  if (flow.size() != arcs.size()) throw ContractViolation("apply_incidence: flow length mismatch");
  std::vector<T> out(static_cast<std::size_t>(node_count), T(0));
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    out[static_cast<std::size_t>(arcs[a].head)] += flow[a];
    out[static_cast<std::size_t>(arcs[a].tail)] -= flow[a];
  }
  return out;
}

template <class T>
std::vector<T> apply_incidence(const ProblemInstance& inst, std::span<const T> flow) {
  return apply_incidence<T>(inst.node_count, inst.arcs, flow);
}

/// s = c - A^T y, i.e. s_a = c_a + y_tail - y_head per arc.
template <class T, class C>
std::vector<T> adjoint_slacks(std::span<const Arc> arcs, std::span<const C> cost,
                              std::span<const T> potentials) {
  if (cost.size() != arcs.size()) throw ContractViolation("adjoint_slacks: cost length mismatch");
  std::vector<T> s(arcs.size());
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    s[a] = T(cost[a]) + potentials[static_cast<std::size_t>(arcs[a].tail)] -
           potentials[static_cast<std::size_t>(arcs[a].head)];
  }
  return s;
}

inline std::vector<double> adjoint_slacks(const ProblemInstance& inst,
                                          std::span<const double> potentials) {
  if (potentials.size() != static_cast<std::size_t>(inst.node_count))
    throw ContractViolation("adjoint_slacks: potential length mismatch");
  std::vector<double> c(inst.cost.begin(), inst.cost.end());
  return adjoint_slacks<double, double>(inst.arcs, c, potentials);
}

struct CheckReport {
  bool ok = true;
  std::string detail;  // first violation found, empty when ok
};

/// Validates an Optimal solution: capacity bounds, exact conservation,
/// objective value, and capacitated complementary slackness
/// (x_a < u_a implies s_a >= 0, x_a > 0 implies s_a <= 0).
CheckReport check_solution(const ProblemInstance& inst, const Solution& sol);

/// Weakly connected components; returns component id per node.
std::vector<int> weak_components(int node_count, std::span<const Arc> arcs, int* count_out);

}  // namespace mcf
