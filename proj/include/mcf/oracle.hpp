#pragma once

#include <span>

#include "mcf/core.hpp"

namespace mcf {
namespace oracle {

/// Reference exact solver: negative-cost arcs saturated up front, then
/// successive shortest paths with Bellman-Ford. Pseudo-polynomial, so it
/// refuses instances beyond test scale (n > 50 or ||b||_1 > 1000).
Solution ssp_mincost(const ProblemInstance& inst);

/// Feasibility / residual report for a primal-dual triple on the
/// uncapacitated LP min{c^T x : Ax = b, x >= 0}.
struct DualityReport {
  double primal_residual_inf = 0.0;  // ||Ax - b||_inf
  double min_x = 0.0;
  double min_slack = 0.0;            // min_a (c_a + y_tail - y_head)
  double gap = 0.0;                  // x^T s
  double max_cs_violation = 0.0;     // max_a |x_a s_a|
};

DualityReport duality_certificates(int node_count, std::span<const Arc> arcs,
                                   std::span<const i64> cost, std::span<const i64> demand,
                                   std::span<const double> x, std::span<const double> y);

}  // namespace oracle
}  // namespace mcf
