#pragma once

#include <vector>

#include "mcf/core.hpp"
#include "mcf/numeric.hpp"

namespace mcf {

enum class AuxArcKind : unsigned char { Acute, Grave, Hat };

/// Uncapacitated auxiliary network: one gadget node per original arc,
/// three arcs per original arc (arc 3a is the costed leg, 3a+1 the free
/// leg, 3a+2 the expensive bypass).
struct AuxiliaryNetwork {
  int node_count = 0;  // n + m
  std::vector<Arc> arcs;
  std::vector<i64> cost;
  std::vector<i64> demand;
  std::vector<AuxArcKind> kind;
  std::vector<int> origin;  // original arc per auxiliary arc
  int original_node_count = 0;
  int original_arc_count = 0;

  int arc_count() const { return static_cast<int>(arcs.size()); }
  int gadget_node(int original_arc) const { return original_node_count + original_arc; }
};

/// Strictly interior primal/dual pair on the auxiliary network.
/// x and s are half-integral / rational at construction; they are held
/// in double precision here, with the exact window check done before
/// conversion (see verify_initial_products).
struct InteriorPoint {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> s;
  i64 t = 0;
  i64 gamma_cap = 0;  // the Gamma used for t and the product window
  i64 p = 0;
  i64 q = 0;  // m1 + p
};

/// The unique flow supported on a BFS spanning tree with Az = b.
/// Integral; may be negative or exceed capacities. Requires a weakly
/// connected instance.
std::vector<i64> tree_solution(const ProblemInstance& inst);

/// Gadget construction plus interior starting points with all products
/// x_a s_a inside [t, t + Gamma^2]. Requires odd finite capacities and
/// nonnegative costs.
struct InitResult {
  AuxiliaryNetwork aux;
  InteriorPoint point;
  std::vector<i64> tree_flow;  // the z used for hat directions
};
InitResult balance_arcs(const ProblemInstance& inst, std::span<const i64> z);
InitResult balance_arcs(const ProblemInstance& inst);

/// Exact (integer arithmetic on doubled products) re-check of the
/// initialization window and the hat-cost floor. Throws InternalError
/// on violation; returns doubled products for inspection.
std::vector<i128> verify_initial_products(const ProblemInstance& inst, const InitResult& init);

/// P(x, s) of the freshly constructed point; asserts the closed-form
/// upper bound (m1+p)/(m*Gamma) + p*ln(m1^2 Gamma^3).
double initial_potential(const InitResult& init);

}  // namespace mcf
