#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "mcf/core.hpp"
#include "mcf/numeric.hpp"
#include "mcf/rng.hpp"

namespace mcf {
namespace eflow {

template <class Real>
struct ResistiveNetwork {
  int node_count = 0;
  std::vector<Arc> arcs;
  std::vector<Real> resistance;      // > 0 per arc
  std::vector<Real> current_source;  // chi per node, sums to zero

  int arc_count() const { return static_cast<int>(arcs.size()); }
};

/// Rooted spanning tree with the per-non-tree-arc cycle data used for
/// randomized cycle repair.
template <class Real>
struct SpanningTreeIndex {
  int root = 0;
  std::vector<int> parent;          // -1 at root
  std::vector<int> parent_arc;      // arc connecting node to parent
  std::vector<int> depth;
  std::vector<int> order;           // top-down traversal order
  std::vector<char> in_tree;        // per arc
  std::vector<int> non_tree;        // arc ids
  std::vector<int> non_tree_pos;    // arc id -> index into non_tree, -1 for tree arcs
  std::vector<Real> cycle_resistance;  // r(C_a), aligned with non_tree
  std::vector<Real> cumulative;        // prefix sums of r(C_a)/r_a
  Real tau = Real(0);               // tree condition number

  /// Sampling probability of the i-th non-tree arc.
  Real probability(std::size_t i) const {
    Real w = cumulative[i] - (i == 0 ? Real(0) : cumulative[i - 1]);
    return w / tau;
  }
};

enum class FlowBackend { NaiveWalk, OffsetTree };

template <class Real>
struct Config {
  Real tolerance = Real(1) / Real(8);  // delta: stop once gap < delta
  FlowBackend backend = FlowBackend::NaiveWalk;
  double safety_cap_multiplier = 200.0;  // K
  bool allow_exact_fallback = true;
  std::function<void(long iteration, double energy, double gap)> on_recompute;
};

template <class Real>
struct ElectricalSolution {
  std::vector<Real> flow;      // Af = chi by construction
  std::vector<Real> voltages;  // tree-induced
  Real gap = Real(0);
  long iterations = 0;
  bool used_fallback = false;
};

/// Best-of two heuristics (shortest-path tree under r, minimum spanning
/// tree under r), judged by the measured tree condition number.
template <class Real>
SpanningTreeIndex<Real> build_spanning_tree(const ResistiveNetwork<Real>& net, Rng rng);

/// Unique flow supported on tree arcs with Af = chi (leaf elimination).
template <class Real>
std::vector<Real> tree_flow(const ResistiveNetwork<Real>& net, const SpanningTreeIndex<Real>& tree);

/// Tree-induced voltages: pi(root) = 0 and walking root->v adds
/// +f_a r_a when traversing an arc along its direction, -f_a r_a
/// against it, so Ohm's law reads f_a = (pi_head - pi_tail)/r_a.
template <class Real>
std::vector<Real> tree_voltages(const ResistiveNetwork<Real>& net, const SpanningTreeIndex<Real>& tree,
                                std::span<const Real> flow);

/// One cycle-repair step on the fundamental cycle of a non-tree arc.
template <class Real>
void cycle_update(const ResistiveNetwork<Real>& net, const SpanningTreeIndex<Real>& tree,
                  std::vector<Real>& flow, int non_tree_arc);

/// f^T R f - 2 pi^T chi + sum_a (pi_head - pi_tail)^2 / r_a.
template <class Real>
Real gap(const ResistiveNetwork<Real>& net, std::span<const Real> flow, std::span<const Real> voltages);

template <class Real>
Real energy(const ResistiveNetwork<Real>& net, std::span<const Real> flow);

/// Randomized certifying solver: terminates with gap < cfg.tolerance,
/// falling back to a dense exact solve past the safety cap.
template <class Real>
ElectricalSolution<Real> solve(const ResistiveNetwork<Real>& net, const Config<Real>& cfg, Rng rng);

/// Dense exact solve of the reduced weighted Laplacian; the reference
/// implementation and the safety fallback (oracle module).
template <class Real>
std::pair<std::vector<Real>, std::vector<Real>> exact_electrical(const ResistiveNetwork<Real>& net);

}  // namespace eflow
}  // namespace mcf

#include "mcf/eflow_impl.hpp"
