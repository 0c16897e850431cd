#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include "persuasion/model.hpp"

namespace persuasion {

// Seeded generator whose draws are identical on every platform:
// std::mt19937_64 is fully specified and the conversions below are ours.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform integer in [lo, hi].
  std::size_t integer(std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(engine_() % (hi - lo + 1));
  }
  bool coin(double p = 0.5) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

struct InstanceOptions {
  std::size_t min_states = 2;
  std::size_t max_states = 3;
  // At least one state with h >= 0 per location.
  bool force_nonnegative_state = true;
  // E[h_k] < 0 at every location (implies force_nonnegative_state).
  bool negative_mean = false;
  // Payoffs uniform in (0, payoff_max]; otherwise all 1.
  bool random_payoffs = false;
  double payoff_max = 3.0;
};

// Priors: uniform draws normalized to sum 1. Utilities: uniform in [-2, 2].
SystemModel random_independent(Rng& rng, std::size_t K, const InstanceOptions& options = {});

// Random dense joint prior (uniform draws, normalized); location priors are
// its marginals.
SystemModel random_joint(Rng& rng, std::size_t K, const InstanceOptions& options = {});

// Binary decentralized mechanism. With probability `edge` a location gets a
// boundary table instead of uniform draws: always-1, always-0, or its isolated
// optimum.
DecentralizedMechanism random_binary_mechanism(Rng& rng, const SystemModel& system,
                                               double edge = 0.0);

}  // namespace persuasion
