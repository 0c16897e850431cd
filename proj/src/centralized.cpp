#include "persuasion/centralized.hpp"

#include <algorithm>

#include "persuasion/errors.hpp"
#include "persuasion/oracle.hpp"

namespace persuasion {

lp::LinearProgram build_centralized_lp(const SystemModel& system, bool weighted) {
  const std::size_t K = system.num_locations();
  const std::size_t W = system.num_joint_states();
  const std::size_t A = K + 1;
  const std::vector<double> mu = system.joint_prior_table();
  auto var = [A](std::size_t w, std::size_t a) { return w * A + a; };
  auto h = [&](std::size_t w, std::size_t k) {
    return system.location(k).utility[system.state_of(w, k)];
  };

  lp::LinearProgram lp(W * A);
  for (std::size_t w = 0; w < W; ++w) {
    for (std::size_t k = 0; k < K; ++k) {
      lp.objective[var(w, k + 1)] = mu[w] * (weighted ? system.location(k).payoff : 1.0);
    }
  }
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t l = 0; l < K; ++l) {
      std::vector<double> row(lp.n_vars, 0.0);
      for (std::size_t w = 0; w < W; ++w) row[var(w, k + 1)] = mu[w] * (h(w, k) - h(w, l));
      lp.add(std::move(row), lp::Relation::GreaterEqual, 0.0);
    }
  }
  for (std::size_t k = 0; k < K; ++k) {
    std::vector<double> row(lp.n_vars, 0.0);
    for (std::size_t w = 0; w < W; ++w) row[var(w, k + 1)] = mu[w] * h(w, k);
    lp.add(std::move(row), lp::Relation::GreaterEqual, 0.0);
  }
  for (std::size_t k = 0; k < K; ++k) {
    std::vector<double> row(lp.n_vars, 0.0);
    for (std::size_t w = 0; w < W; ++w) row[var(w, 0)] = mu[w] * h(w, k);
    lp.add(std::move(row), lp::Relation::LessEqual, 0.0);
  }
  for (std::size_t w = 0; w < W; ++w) {
    std::vector<double> row(lp.n_vars, 0.0);
    for (std::size_t a = 0; a < A; ++a) row[var(w, a)] = 1.0;
    lp.add(std::move(row), lp::Relation::Equal, 1.0);
  }
  return lp;
}

CentralizedResult solve_centralized(const SystemModel& system, bool weighted) {
  if (auto v = validate(system); !v.empty()) throw InputError(describe(v));
  const auto lp = build_centralized_lp(system, weighted);
  const auto sol = lp::solve(lp);
  if (sol.status != lp::Status::Optimal) {
    throw InternalError("centralized obedience LP reported " + lp::to_string(sol.status) +
                        "; the silent mechanism is always feasible and the objective is bounded");
  }

  const std::size_t K = system.num_locations();
  const std::size_t A = K + 1;
  auto mech = CentralizedMechanism::direct(K, system.num_joint_states());
  for (std::size_t w = 0; w < system.num_joint_states(); ++w) {
    double sum = 0.0;
    for (std::size_t a = 0; a < A; ++a) sum += std::max(0.0, sol.x[w * A + a]);
    for (std::size_t a = 0; a < A; ++a) {
      mech.raw(w, a) = sum > 0.0 ? std::max(0.0, sol.x[w * A + a]) / sum : (a == 0 ? 1.0 : 0.0);
    }
  }

  CentralizedResult r;
  r.report = oracle::evaluate(system, mech, CustomerStrategy::obedient(K));
  r.mechanism = std::move(mech);
  r.objective = sol.objective_value;
  r.lp_max_violation = sol.max_violation;
  r.iterations = sol.iterations;
  return r;
}

double obedience_violation(const SystemModel& system, const CentralizedMechanism& mech) {
  const std::size_t K = system.num_locations();
  if (mech.num_signals() != K + 1 || mech.num_states() != system.num_joint_states()) {
    throw InputError("expected a direct mechanism over [K]_0 for this system");
  }
  // sums[s * K + l] = sum_omega mu sigma(s|omega) h_l(omega_l)
  std::vector<double> sums((K + 1) * K, 0.0);
  for (std::size_t w = 0; w < system.num_joint_states(); ++w) {
    const double mu = system.joint_prior_at(w);
    if (mu == 0.0) continue;
    for (std::size_t s = 0; s <= K; ++s) {
      const double p = mu * mech.prob(w, s);
      if (p == 0.0) continue;
      for (std::size_t l = 0; l < K; ++l) {
        sums[s * K + l] += p * system.location(l).utility[system.state_of(w, l)];
      }
    }
  }
  double worst = 0.0;
  for (std::size_t k = 1; k <= K; ++k) {
    const double own = sums[k * K + k - 1];
    worst = std::max(worst, -own);
    for (std::size_t l = 0; l < K; ++l) worst = std::max(worst, sums[k * K + l] - own);
  }
  for (std::size_t l = 0; l < K; ++l) worst = std::max(worst, sums[l]);
  return worst;
}

}  // namespace persuasion
