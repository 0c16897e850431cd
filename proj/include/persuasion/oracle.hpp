#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "persuasion/model.hpp"

namespace persuasion {
struct BinarySummary;
}

namespace persuasion::oracle {

// Posterior utilities within this absolute distance count as ties.
inline constexpr double kTieTol = 1e-9;
// Signals at or below this probability are never best-responded to.
inline constexpr double kNegligibleSignal = 1e-12;
// Weighted obedience slack accepted by optimal_strategy_ok.
inline constexpr double kSlackTol = 1e-7;

// Customer's choice given posterior utilities E[h_k | s] (index k-1). Leaving
// is worth 0. Among actions within kTieTol of the best, the one with the
// largest operator payoff wins (leaving pays 0), then the smallest index.
std::size_t best_action(std::span<const double> posterior, std::span<const double> payoff,
                        double tie_tol = kTieTol);

// Pure Bayesian best response by full enumeration over (state, signal).
CustomerStrategy best_response(const SystemModel& system, const CentralizedMechanism& mech);
CustomerStrategy best_response(const SystemModel& system, const DecentralizedMechanism& mech);

// T, V, per-location throughput and per-signal diagnostics by enumeration.
EvaluationReport evaluate(const SystemModel& system, const CentralizedMechanism& mech,
                          const CustomerStrategy& strategy);
EvaluationReport evaluate(const SystemModel& system, const DecentralizedMechanism& mech,
                          const CustomerStrategy& strategy);

DecentralizedMechanism full_information(const SystemModel& system);
DecentralizedMechanism no_information(const SystemModel& system);

// True iff some strategy in F_d is optimal under the binary mechanism, decided
// signal by signal over U = {0,1}^K.
bool fd_strategy_exists(const SystemModel& system, const DecentralizedMechanism& mech);

struct GridResult {
  DecentralizedMechanism mechanism;
  double throughput = 0.0;
  std::size_t candidates = 0;
  std::size_t accepted = 0;
};

// Optional filter on the per-location summaries of each candidate.
using GridFilter = std::function<bool(std::span<const BinarySummary>)>;

// Exhaustive search over binary decentralized mechanisms with
// sigma_k(1|omega_k) on {0, step, 2*step, ..., 1}; each candidate is scored by
// the best-response throughput. Requires sum_k |Omega_k| <= 8.
GridResult grid_search_decentralized(const SystemModel& system, double resolution,
                                     const GridFilter& filter = {});

}  // namespace persuasion::oracle
