#pragma once

#include <span>

#include "mcf/core.hpp"
#include "mcf/init.hpp"

namespace mcf {

/// Dual objective b^T y over the auxiliary network, 128-bit exact.
i128 dual_objective(std::span<const i64> demand, std::span<const i64> y);

/// True iff b^T y exceeds m*C*U of the reduced instance, which certifies
/// that some bypass arc must carry flow, i.e. the instance is infeasible.
bool check_infeasible(const AuxiliaryNetwork& aux, std::span<const i64> y,
                      const ProblemInstance& reduced);

/// Optimal integral flow per reduced arc, via a max-flow on the
/// admissible (zero-slack) costed and free gadget legs. Requires
/// check_infeasible == false; throws InternalError if the admissible
/// network cannot route the demands.
std::vector<i64> recover_flow(const AuxiliaryNetwork& aux, std::span<const i64> y);

}  // namespace mcf
