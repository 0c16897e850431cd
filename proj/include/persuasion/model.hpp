#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace persuasion {

// Tolerance for every stochasticity / normalization check.
inline constexpr double kProbTol = 1e-9;
// Refuse dense joint tables above this many state tuples unless overridden.
inline constexpr std::size_t kMaxJointStates = std::size_t{1} << 20;

struct LocationModel {
  std::string name;
  std::vector<std::string> states;
  std::vector<double> prior;
  std::vector<double> utility;
  double payoff = 1.0;

  std::size_t num_states() const { return states.size(); }
};

enum class PriorMode { Independent, Joint };

using StateTuple = std::vector<std::size_t>;

// K locations plus either independent marginals or an explicit joint prior.
//
// State tuples are enumerated in mixed-radix order with location 0 varying
// fastest. Every table indexed by a state tuple (joint prior, centralized
// mechanisms, LP variables) uses this order.
//
// The constructor only checks what is needed to index consistently; use
// validate() for the full set of invariants, or make_system() to do both and
// throw on any violation.
class SystemModel {
 public:
  SystemModel() = default;
  explicit SystemModel(std::vector<LocationModel> locations);
  SystemModel(std::vector<LocationModel> locations, std::vector<double> joint,
              bool allow_large = false);

  std::size_t num_locations() const { return locations_.size(); }
  const std::vector<LocationModel>& locations() const { return locations_; }
  const LocationModel& location(std::size_t k) const { return locations_.at(k); }
  PriorMode prior_mode() const { return mode_; }
  bool independent() const { return mode_ == PriorMode::Independent; }

  // |Omega| = prod_k |Omega_k|.
  std::size_t num_joint_states() const { return num_joint_; }
  std::size_t stride(std::size_t k) const { return strides_.at(k); }

  StateTuple decode(std::size_t index) const;
  std::size_t encode(std::span<const std::size_t> tuple) const;
  // State of location k inside the joint index.
  std::size_t state_of(std::size_t index, std::size_t k) const {
    return (index / strides_[k]) % locations_[k].num_states();
  }

  // mu(omega) for a flat joint index.
  double joint_prior_at(std::size_t index) const;
  // Dense copy of mu over all of Omega.
  std::vector<double> joint_prior_table() const;
  // Stored joint table (Joint mode only).
  const std::vector<double>& joint_table() const { return joint_; }

  // Marginal of location k computed from the joint prior (Joint mode) or the
  // stored prior (Independent mode).
  std::vector<double> marginal(std::size_t k) const;

 private:
  void init_strides(bool allow_large);

  std::vector<LocationModel> locations_;
  PriorMode mode_ = PriorMode::Independent;
  std::vector<double> joint_;
  std::vector<std::size_t> strides_;
  std::size_t num_joint_ = 1;
};

// mu(omega); throws InputError on a malformed or out-of-range tuple.
double joint_prior(const SystemModel& system, std::span<const std::size_t> state);

struct Violation {
  std::string field;
  std::string message;
  double magnitude = 0.0;
};

std::vector<Violation> validate(const LocationModel& location);
std::vector<Violation> validate(const SystemModel& system);

// Build and validate; throws InputError listing every violation.
SystemModel make_system(std::vector<LocationModel> locations,
                        std::optional<std::vector<double>> joint = std::nullopt,
                        bool allow_large = false);

std::string describe(const std::vector<Violation>& violations);

// sigma(s|omega) over a finite signal set. Rows are states (flat joint index),
// columns are signals.
class CentralizedMechanism {
 public:
  CentralizedMechanism() = default;
  CentralizedMechanism(std::vector<std::string> signals, std::size_t num_states);
  CentralizedMechanism(std::vector<std::string> signals, std::size_t num_states,
                       std::vector<double> table);

  // Direct mechanism over [K]_0 = {0, 1, ..., K}; signal k recommends action k.
  static CentralizedMechanism direct(std::size_t num_locations,
                                     std::size_t num_states);

  std::size_t num_signals() const { return signals_.size(); }
  std::size_t num_states() const { return num_states_; }
  const std::vector<std::string>& signals() const { return signals_; }

  // Entries are clamped to >= 0 on read.
  double prob(std::size_t state, std::size_t signal) const;
  double& raw(std::size_t state, std::size_t signal) {
    return table_[state * signals_.size() + signal];
  }
  const std::vector<double>& table() const { return table_; }

 private:
  std::vector<std::string> signals_;
  std::size_t num_states_ = 0;
  std::vector<double> table_;
};

std::vector<Violation> validate(const CentralizedMechanism& mech,
                                const SystemModel& system);

// sigma_k(s_k|omega_k) for one location.
struct LocationSignaling {
  std::vector<std::string> signals;
  // Row-major: table[state * signals.size() + signal].
  std::vector<double> table;

  std::size_t num_signals() const { return signals.size(); }
  std::size_t num_states() const {
    return signals.empty() ? 0 : table.size() / signals.size();
  }
  double prob(std::size_t state, std::size_t signal) const;

  // Binary signaling {0, 1} with P(1 | state) = send_one[state].
  static LocationSignaling binary(std::span<const double> send_one);
  // Always sends signal 0 (binary signal set).
  static LocationSignaling silent(std::size_t num_states);
};

// Product mechanism sigma(s|omega) = prod_k sigma_k(s_k|omega_k). Joint signal
// indices are mixed radix with location 0 fastest, so for binary signal sets
// bit k of the joint index is u_k.
class DecentralizedMechanism {
 public:
  DecentralizedMechanism() = default;
  explicit DecentralizedMechanism(std::vector<LocationSignaling> per_location);

  std::size_t num_locations() const { return per_location_.size(); }
  const std::vector<LocationSignaling>& per_location() const { return per_location_; }
  const LocationSignaling& location(std::size_t k) const { return per_location_.at(k); }

  bool binary() const;
  std::size_t num_joint_signals() const;
  std::size_t signal_of(std::size_t joint_signal, std::size_t k) const;

  // Expand to the joint table; checks row-stochasticity of the product.
  CentralizedMechanism to_centralized(const SystemModel& system) const;

 private:
  std::vector<LocationSignaling> per_location_;
};

std::vector<Violation> validate(const DecentralizedMechanism& mech,
                                const SystemModel& system);

// f(a|s) with actions {0 = leave, 1..K = join location a}.
class CustomerStrategy {
 public:
  CustomerStrategy() = default;
  CustomerStrategy(std::size_t num_signals, std::size_t num_locations);

  // f(a|s) = 1{a = s} on the direct signal set [K]_0.
  static CustomerStrategy obedient(std::size_t num_locations);
  // Deterministic strategy from a per-signal action list.
  static CustomerStrategy pure(std::span<const std::size_t> actions,
                               std::size_t num_locations);

  std::size_t num_signals() const { return num_signals_; }
  std::size_t num_actions() const { return num_actions_; }
  double prob(std::size_t signal, std::size_t action) const {
    return table_[signal * num_actions_ + action];
  }
  double& at(std::size_t signal, std::size_t action) {
    return table_[signal * num_actions_ + action];
  }
  // Action with the largest mass (smallest index on ties).
  std::size_t main_action(std::size_t signal) const;

 private:
  std::size_t num_signals_ = 0;
  std::size_t num_actions_ = 0;
  std::vector<double> table_;
};

std::vector<Violation> validate(const CustomerStrategy& strategy);
// Class F_d over the binary signal space U = {0,1}^K: never leave on u != 0,
// never join a location signaling 0.
bool in_class_fd(const CustomerStrategy& strategy, std::size_t num_locations);

struct SignalStats {
  std::size_t signal = 0;
  double probability = 0.0;
  // E[h_k | s] for k = 1..K (index k-1).
  std::vector<double> posterior_utility;
  std::size_t action = 0;
};

struct EvaluationReport {
  double throughput = 0.0;
  double value = 0.0;
  std::vector<double> per_location_throughput;
  std::vector<SignalStats> signal_stats;
  bool optimal_strategy_ok = false;
  // min over signals of sum_omega mu*sigma*(u(chosen) - u(best)); <= 0.
  double worst_obedience_slack = 0.0;
};

}  // namespace persuasion
