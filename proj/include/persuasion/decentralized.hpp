#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "persuasion/model.hpp"

namespace persuasion {

// Optimal binary signaling for one location in isolation.
struct IsolatedSolution {
  std::size_t location = 0;
  LocationSignaling mechanism;
  double th_iso = 0.0;
};

// maximize sum mu*sigma(1|.) s.t. sum mu*sigma(1|.)*h >= 0, sum mu*sigma(0|.)*h <= 0.
IsolatedSolution solve_isolated(const LocationModel& location, std::size_t index = 0);

// Sums that decide obedience for one binary location.
struct BinarySummary {
  double mass_one = 0.0;       // sum mu_k sigma_k(1|.)
  double mass_zero = 0.0;      // sum mu_k sigma_k(0|.)
  double utility_one = 0.0;    // sum mu_k sigma_k(1|.) h_k
  double utility_zero = 0.0;   // sum mu_k sigma_k(0|.) h_k
  double max_zero_term = 0.0;  // max over states of mu_k sigma_k(0|.)
  double mean_utility = 0.0;   // sum mu_k h_k
};

BinarySummary summarize(const LocationModel& location, const LocationSignaling& signaling);

enum class ObedienceKind { ConditionI, ConditionII, Neither };

struct ObedienceVerdict {
  ObedienceKind kind = ObedienceKind::Neither;
  // 0-based location for ConditionI.
  std::size_t location = 0;

  bool admits_fd() const { return kind != ObedienceKind::Neither; }
};

std::string to_string(const ObedienceVerdict& v);

// Whether some F_d strategy is optimal under a binary decentralized mechanism
// on an independent system. Condition (I) is tested before (II).
ObedienceVerdict check_obedience(const SystemModel& system, const DecentralizedMechanism& mech);
ObedienceVerdict check_obedience(std::span<const BinarySummary> locations);

// 1 - prod_k (1 - sum mu_k sigma_k(1|.)): throughput of any F_d strategy.
double product_throughput(const SystemModel& system, const DecentralizedMechanism& mech);

struct ComposeResult {
  DecentralizedMechanism mechanism;
  CustomerStrategy strategy;
  EvaluationReport report;
  std::vector<IsolatedSolution> isolated;
  // 1 - prod(1 - th_iso)
  double closed_form = 0.0;
};

// Optimal decentralized mechanism for an independent system: product of the
// K isolated optima, customer joins the signaling-1 location with the highest
// posterior utility (smallest index on ties).
ComposeResult compose_optimal(const SystemModel& system);

struct HeterogeneousResult {
  DecentralizedMechanism mechanism;
  CustomerStrategy strategy;
  double value = 0.0;
  // Retained locations, highest payoff first.
  std::vector<std::size_t> order;
  std::vector<IsolatedSolution> isolated;
};

// Product of isolated optima for locations with positive payoff that can be
// persuaded; the customer joins the highest-payoff location signaling 1.
// Throws PreconditionError if a retained location has E[h_k] >= 0.
HeterogeneousResult heterogeneous_compose(const SystemModel& system);

struct FallbackResult {
  DecentralizedMechanism mechanism;
  // Location that simulates the centralized recommendation (0-based).
  std::size_t location = 0;
  std::vector<double> per_location_throughput;
};

// Decentralized mechanism guaranteeing Th/K for arbitrary priors: the location
// with the largest centralized throughput T_k samples the other locations'
// states from mu(.|omega_k) and signals 1 iff the centralized mechanism would
// recommend it; every other location always signals 0.
FallbackResult correlated_fallback(const SystemModel& system, const CentralizedMechanism& central);

}  // namespace persuasion
