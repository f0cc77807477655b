#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "mcf/core.hpp"
#include "mcf/eflow.hpp"
#include "mcf/ipm.hpp"

namespace mcf {

struct SolverOptions {
  std::uint64_t seed = 0;
  double target_gap = 0.5;  // in (0, 1]
  double delta = 0.125;     // electrical tolerance, in (0, 1/8]
  eflow::FlowBackend backend = eflow::FlowBackend::NaiveWalk;
  bool exact_mode = false;  // rational iterates; instances with <= 10 nodes
  std::ostream* trace = nullptr;  // JSON lines when set
  std::function<void(const IterationTrace&)> on_ipm_iteration;
};

struct ComponentStats {
  int node_count = 0;
  int arc_count = 0;      // reduced arcs in the component
  int aux_arc_count = 0;  // m1, 0 when routed to the reference solver
  double initial_potential = 0.0;
  long ipm_iterations = 0;
  int retries = 0;  // target-gap halvings taken by the certificate guard
};

struct SolveReport {
  Solution solution;
  long ipm_iterations = 0;
  std::vector<ComponentStats> components;
};

/// Full pipeline: unboundedness detection, preprocessing, per-component
/// initialization, potential reduction, crossover, and primal recovery.
SolveReport solve(const ProblemInstance& inst, const SolverOptions& opt = {});

}  // namespace mcf
