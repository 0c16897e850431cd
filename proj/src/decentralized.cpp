#include "persuasion/decentralized.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "persuasion/centralized.hpp"
#include "persuasion/errors.hpp"
#include "persuasion/lp.hpp"
#include "persuasion/oracle.hpp"

namespace persuasion {

namespace {

constexpr double kObedienceTol = 1e-9;
constexpr double kExactZero = 1e-12;

void require_valid(const SystemModel& system) {
  if (auto v = validate(system); !v.empty()) throw InputError(describe(v));
}

void require_binary(const SystemModel& system, const DecentralizedMechanism& mech) {
  if (auto v = validate(mech, system); !v.empty()) throw InputError(describe(v));
  if (!mech.binary()) throw InputError("obedience characterization needs binary signal sets");
}

std::vector<BinarySummary> summaries(const SystemModel& system,
                                     const DecentralizedMechanism& mech) {
  std::vector<BinarySummary> out;
  for (std::size_t k = 0; k < system.num_locations(); ++k) {
    out.push_back(summarize(system.location(k), mech.location(k)));
  }
  return out;
}

}  // namespace

IsolatedSolution solve_isolated(const LocationModel& location, std::size_t index) {
  if (auto v = validate(location); !v.empty()) throw InputError(describe(v));
  const std::size_t m = location.num_states();
  lp::LinearProgram lp(m);
  std::vector<double> weighted(m);
  double mean = 0.0;
  for (std::size_t w = 0; w < m; ++w) {
    lp.objective[w] = location.prior[w];
    lp.upper[w] = 1.0;
    weighted[w] = location.prior[w] * location.utility[w];
    mean += weighted[w];
  }
  // sum mu sigma(1|.) h >= 0
  lp.add(weighted, lp::Relation::GreaterEqual, 0.0);
  // sum mu (1 - sigma(1|.)) h <= 0
  lp.add(weighted, lp::Relation::GreaterEqual, mean);

  const auto sol = lp::solve(lp);
  if (sol.status != lp::Status::Optimal) {
    throw InternalError("isolated LP for location '" + location.name + "' reported " +
                        lp::to_string(sol.status));
  }
  std::vector<double> send_one(m);
  for (std::size_t w = 0; w < m; ++w) send_one[w] = std::clamp(sol.x[w], 0.0, 1.0);

  IsolatedSolution out;
  out.location = index;
  out.mechanism = LocationSignaling::binary(send_one);
  for (std::size_t w = 0; w < m; ++w) out.th_iso += location.prior[w] * send_one[w];
  return out;
}

BinarySummary summarize(const LocationModel& location, const LocationSignaling& signaling) {
  if (signaling.num_signals() != 2 || signaling.num_states() != location.num_states()) {
    throw InputError("location '" + location.name + "': expected a binary signaling table");
  }
  BinarySummary s;
  for (std::size_t w = 0; w < location.num_states(); ++w) {
    const double mu = location.prior[w];
    const double h = location.utility[w];
    const double zero = mu * signaling.prob(w, 0);
    const double one = mu * signaling.prob(w, 1);
    s.mass_zero += zero;
    s.mass_one += one;
    s.utility_zero += zero * h;
    s.utility_one += one * h;
    s.max_zero_term = std::max(s.max_zero_term, zero);
    s.mean_utility += mu * h;
  }
  return s;
}

std::string to_string(const ObedienceVerdict& v) {
  switch (v.kind) {
    case ObedienceKind::ConditionI: return "ConditionI(" + std::to_string(v.location + 1) + ")";
    case ObedienceKind::ConditionII: return "ConditionII";
    case ObedienceKind::Neither: return "Neither";
  }
  return "?";
}

ObedienceVerdict check_obedience(std::span<const BinarySummary> locations) {
  const std::size_t K = locations.size();
  for (std::size_t k = 0; k < K; ++k) {
    const auto& s = locations[k];
    if (s.max_zero_term > kExactZero || s.mean_utility < -kObedienceTol) continue;
    bool cross = true;
    for (std::size_t l = 0; l < K && cross; ++l) {
      if (l == k) continue;
      const auto& o = locations[l];
      cross = o.mass_zero * s.mean_utility >= o.utility_zero - kObedienceTol;
    }
    if (cross) return {ObedienceKind::ConditionI, k};
  }
  const bool isolated_ok =
      std::all_of(locations.begin(), locations.end(), [](const BinarySummary& s) {
        return s.utility_one >= -kObedienceTol && s.utility_zero <= kObedienceTol;
      });
  return {isolated_ok ? ObedienceKind::ConditionII : ObedienceKind::Neither, 0};
}

ObedienceVerdict check_obedience(const SystemModel& system, const DecentralizedMechanism& mech) {
  if (!system.independent()) {
    throw PreconditionError("the obedience characterization assumes independent locations");
  }
  require_binary(system, mech);
  const auto s = summaries(system, mech);
  return check_obedience(s);
}

double product_throughput(const SystemModel& system, const DecentralizedMechanism& mech) {
  require_binary(system, mech);
  double none = 1.0;
  for (const auto& s : summaries(system, mech)) none *= 1.0 - s.mass_one;
  return 1.0 - none;
}

ComposeResult compose_optimal(const SystemModel& system) {
  require_valid(system);
  if (!system.independent()) {
    throw InputError(
        "optimal decentralized composition requires independent locations; use "
        "correlated_fallback for a joint prior");
  }
  const std::size_t K = system.num_locations();
  ComposeResult r;
  std::vector<LocationSignaling> per;
  double none = 1.0;
  for (std::size_t k = 0; k < K; ++k) {
    r.isolated.push_back(solve_isolated(system.location(k), k));
    per.push_back(r.isolated.back().mechanism);
    none *= 1.0 - r.isolated.back().th_iso;
  }
  r.closed_form = 1.0 - none;
  r.mechanism = DecentralizedMechanism(std::move(per));

  // Posterior utility of each location given that it signals 1.
  std::vector<double> h_one(K, -std::numeric_limits<double>::infinity());
  for (std::size_t k = 0; k < K; ++k) {
    const auto s = summarize(system.location(k), r.mechanism.location(k));
    if (s.mass_one > kExactZero) h_one[k] = s.utility_one / s.mass_one;
  }
  const std::size_t U = std::size_t{1} << K;
  std::vector<std::size_t> actions(U, 0);
  for (std::size_t u = 1; u < U; ++u) {
    std::size_t pick = K;
    for (std::size_t k = 0; k < K; ++k) {
      if (!((u >> k) & 1U)) continue;
      if (pick == K || h_one[k] > h_one[pick] + oracle::kTieTol) pick = k;
    }
    actions[u] = pick + 1;
  }
  r.strategy = CustomerStrategy::pure(actions, K);
  r.report = oracle::evaluate(system, r.mechanism, r.strategy);
  return r;
}

HeterogeneousResult heterogeneous_compose(const SystemModel& system) {
  require_valid(system);
  if (!system.independent()) {
    throw PreconditionError("heterogeneous composition requires independent locations");
  }
  const std::size_t K = system.num_locations();
  HeterogeneousResult r;
  for (std::size_t k = 0; k < K; ++k) {
    const auto& loc = system.location(k);
    if (loc.payoff <= 0.0) continue;
    bool persuadable = false;
    double mean = 0.0;
    for (std::size_t w = 0; w < loc.num_states(); ++w) {
      persuadable |= loc.prior[w] > 0.0 && loc.utility[w] >= 0.0;
      mean += loc.prior[w] * loc.utility[w];
    }
    if (!persuadable) continue;
    if (mean >= 0.0) {
      throw PreconditionError("location '" + loc.name + "' (index " + std::to_string(k + 1) +
                              ") has nonnegative expected utility " + std::to_string(mean) +
                              "; the heterogeneous guarantee needs E[h_k] < 0");
    }
    r.order.push_back(k);
  }
  std::stable_sort(r.order.begin(), r.order.end(), [&](std::size_t a, std::size_t b) {
    return system.location(a).payoff > system.location(b).payoff;
  });

  std::vector<LocationSignaling> per;
  for (std::size_t k = 0; k < K; ++k) {
    per.push_back(LocationSignaling::silent(system.location(k).num_states()));
  }
  for (std::size_t k : r.order) {
    r.isolated.push_back(solve_isolated(system.location(k), k));
    per[k] = r.isolated.back().mechanism;
  }
  r.mechanism = DecentralizedMechanism(std::move(per));

  const std::size_t U = std::size_t{1} << K;
  std::vector<std::size_t> actions(U, 0);
  for (std::size_t u = 1; u < U; ++u) {
    for (std::size_t k : r.order) {
      if ((u >> k) & 1U) {
        actions[u] = k + 1;
        break;
      }
    }
  }
  r.strategy = CustomerStrategy::pure(actions, K);

  // sum_i (v_(i) - v_(i+1)) * (1 - prod_{j<=i} (1 - th_iso_(j))), v_(n+1) = 0
  double none = 1.0;
  for (std::size_t i = 0; i < r.order.size(); ++i) {
    none *= 1.0 - r.isolated[i].th_iso;
    const double v = system.location(r.order[i]).payoff;
    const double next = i + 1 < r.order.size() ? system.location(r.order[i + 1]).payoff : 0.0;
    r.value += (v - next) * (1.0 - none);
  }
  return r;
}

FallbackResult correlated_fallback(const SystemModel& system, const CentralizedMechanism& central) {
  require_valid(system);
  const double breach = obedience_violation(system, central);
  if (breach > 1e-7) {
    throw PreconditionError("centralized mechanism violates obedience by " +
                            std::to_string(breach));
  }
  const std::size_t K = system.num_locations();
  FallbackResult r;
  r.per_location_throughput.assign(K, 0.0);
  for (std::size_t w = 0; w < system.num_joint_states(); ++w) {
    const double mu = system.joint_prior_at(w);
    for (std::size_t k = 0; k < K; ++k) r.per_location_throughput[k] += mu * central.prob(w, k + 1);
  }
  std::size_t star = 0;
  for (std::size_t k = 1; k < K; ++k) {
    if (r.per_location_throughput[k] > r.per_location_throughput[star] + 1e-12) star = k;
  }
  r.location = star;

  const auto& loc = system.location(star);
  const auto marginal = system.marginal(star);
  std::vector<double> joint_mass(loc.num_states(), 0.0);
  for (std::size_t w = 0; w < system.num_joint_states(); ++w) {
    joint_mass[system.state_of(w, star)] += system.joint_prior_at(w) * central.prob(w, star + 1);
  }
  std::vector<double> send_one(loc.num_states(), 0.0);
  for (std::size_t w = 0; w < loc.num_states(); ++w) {
    if (marginal[w] > 0.0) send_one[w] = std::clamp(joint_mass[w] / marginal[w], 0.0, 1.0);
  }

  std::vector<LocationSignaling> per;
  for (std::size_t k = 0; k < K; ++k) {
    per.push_back(k == star ? LocationSignaling::binary(send_one)
                            : LocationSignaling::silent(system.location(k).num_states()));
  }
  r.mechanism = DecentralizedMechanism(std::move(per));
  return r;
}

}  // namespace persuasion
