#pragma once

#include <cstddef>

#include "persuasion/lp.hpp"
#include "persuasion/model.hpp"

namespace persuasion {

// Obedient direct-recommendation LP. Variable sigma(a|omega) lives at index
// omega * (K + 1) + a. Rows, in order: K*K pairwise obedience rows (k, l),
// K join rows, K leave rows, then one stochasticity equality per state.
// The objective weights location k by v_k when `weighted`, else by 1.
lp::LinearProgram build_centralized_lp(const SystemModel& system, bool weighted);

struct CentralizedResult {
  CentralizedMechanism mechanism;
  EvaluationReport report;
  double objective = 0.0;
  double lp_max_violation = 0.0;
  std::size_t iterations = 0;
};

// Optimal centralized mechanism over [K]_0; the report evaluates it under the
// obedient strategy.
CentralizedResult solve_centralized(const SystemModel& system, bool weighted = false);

// Largest breach of the obedience rows by a direct mechanism (0 if obedient).
double obedience_violation(const SystemModel& system, const CentralizedMechanism& mech);

}  // namespace persuasion
