#include "persuasion/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "persuasion/decentralized.hpp"
#include "persuasion/errors.hpp"

namespace persuasion::oracle {

namespace {

std::vector<double> payoffs(const SystemModel& system) {
  std::vector<double> v(system.num_locations());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = system.location(k).payoff;
  return v;
}

// Per-signal probability and unnormalized utility sums sum_omega mu sigma h_k.
struct SignalSums {
  std::vector<double> prob;     // [s]
  std::vector<double> utility;  // [s * K + k]
};

SignalSums signal_sums(const SystemModel& system, const CentralizedMechanism& mech) {
  if (mech.num_states() != system.num_joint_states()) {
    throw InputError("mechanism has " + std::to_string(mech.num_states()) +
                     " state rows, system has " + std::to_string(system.num_joint_states()));
  }
  const std::size_t K = system.num_locations();
  const std::size_t S = mech.num_signals();
  SignalSums out{std::vector<double>(S, 0.0), std::vector<double>(S * K, 0.0)};
  std::vector<double> h(K);
  for (std::size_t w = 0; w < system.num_joint_states(); ++w) {
    const double mu = system.joint_prior_at(w);
    if (mu == 0.0) continue;
    for (std::size_t k = 0; k < K; ++k) h[k] = system.location(k).utility[system.state_of(w, k)];
    for (std::size_t s = 0; s < S; ++s) {
      const double p = mu * mech.prob(w, s);
      if (p == 0.0) continue;
      out.prob[s] += p;
      for (std::size_t k = 0; k < K; ++k) out.utility[s * K + k] += p * h[k];
    }
  }
  return out;
}

std::vector<double> grid_points(double resolution) {
  std::vector<double> g;
  const auto n = static_cast<std::size_t>(std::floor(1.0 / resolution + 1e-9));
  for (std::size_t i = 0; i <= n; ++i) g.push_back(std::min(1.0, static_cast<double>(i) * resolution));
  if (g.back() < 1.0 - 1e-12) g.push_back(1.0);
  return g;
}

}  // namespace

std::size_t best_action(std::span<const double> posterior, std::span<const double> payoff,
                        double tie_tol) {
  double top = 0.0;
  for (double u : posterior) top = std::max(top, u);
  std::size_t choice = 0;
  double choice_payoff = 0.0;
  bool have = top - 0.0 <= tie_tol;  // leaving is a maximizer
  for (std::size_t k = 0; k < posterior.size(); ++k) {
    if (posterior[k] < top - tie_tol) continue;
    if (!have || payoff[k] > choice_payoff) {
      choice = k + 1;
      choice_payoff = payoff[k];
      have = true;
    }
  }
  return choice;
}

CustomerStrategy best_response(const SystemModel& system, const CentralizedMechanism& mech) {
  const std::size_t K = system.num_locations();
  const auto sums = signal_sums(system, mech);
  const auto v = payoffs(system);
  std::vector<std::size_t> actions(mech.num_signals(), 0);
  std::vector<double> post(K);
  for (std::size_t s = 0; s < mech.num_signals(); ++s) {
    if (sums.prob[s] <= kNegligibleSignal) continue;
    for (std::size_t k = 0; k < K; ++k) post[k] = sums.utility[s * K + k] / sums.prob[s];
    actions[s] = best_action(post, v);
  }
  return CustomerStrategy::pure(actions, K);
}

CustomerStrategy best_response(const SystemModel& system, const DecentralizedMechanism& mech) {
  return best_response(system, mech.to_centralized(system));
}

EvaluationReport evaluate(const SystemModel& system, const CentralizedMechanism& mech,
                          const CustomerStrategy& strategy) {
  const std::size_t K = system.num_locations();
  const std::size_t S = mech.num_signals();
  if (strategy.num_signals() != S || strategy.num_actions() != K + 1) {
    throw InputError("strategy shape (" + std::to_string(strategy.num_signals()) + " signals, " +
                     std::to_string(strategy.num_actions()) + " actions) does not match mechanism (" +
                     std::to_string(S) + " signals, " + std::to_string(K + 1) + " actions)");
  }
  const auto sums = signal_sums(system, mech);
  const auto v = payoffs(system);

  EvaluationReport r;
  r.per_location_throughput.assign(K, 0.0);
  r.worst_obedience_slack = 0.0;
  for (std::size_t s = 0; s < S; ++s) {
    const double p = sums.prob[s];
    for (std::size_t k = 0; k < K; ++k) {
      r.per_location_throughput[k] += p * strategy.prob(s, k + 1);
    }
    if (p <= kNegligibleSignal) continue;

    SignalStats st;
    st.signal = s;
    st.probability = p;
    st.posterior_utility.resize(K);
    double best = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      st.posterior_utility[k] = sums.utility[s * K + k] / p;
      best = std::max(best, sums.utility[s * K + k]);
    }
    st.action = strategy.main_action(s);
    for (std::size_t a = 0; a <= K; ++a) {
      if (strategy.prob(s, a) <= 0.0) continue;
      const double u = a == 0 ? 0.0 : sums.utility[s * K + a - 1];
      r.worst_obedience_slack = std::min(r.worst_obedience_slack, u - best);
    }
    r.signal_stats.push_back(std::move(st));
  }
  for (std::size_t k = 0; k < K; ++k) {
    r.throughput += r.per_location_throughput[k];
    r.value += v[k] * r.per_location_throughput[k];
  }
  r.optimal_strategy_ok = r.worst_obedience_slack >= -kSlackTol;
  return r;
}

EvaluationReport evaluate(const SystemModel& system, const DecentralizedMechanism& mech,
                          const CustomerStrategy& strategy) {
  return evaluate(system, mech.to_centralized(system), strategy);
}

DecentralizedMechanism full_information(const SystemModel& system) {
  std::vector<LocationSignaling> per;
  for (const auto& loc : system.locations()) {
    LocationSignaling ls;
    ls.signals = loc.states;
    const std::size_t m = loc.num_states();
    ls.table.assign(m * m, 0.0);
    for (std::size_t w = 0; w < m; ++w) ls.table[w * m + w] = 1.0;
    per.push_back(std::move(ls));
  }
  return DecentralizedMechanism(std::move(per));
}

DecentralizedMechanism no_information(const SystemModel& system) {
  std::vector<LocationSignaling> per;
  for (const auto& loc : system.locations()) {
    LocationSignaling ls;
    ls.signals = {"*"};
    ls.table.assign(loc.num_states(), 1.0);
    per.push_back(std::move(ls));
  }
  return DecentralizedMechanism(std::move(per));
}

bool fd_strategy_exists(const SystemModel& system, const DecentralizedMechanism& mech) {
  if (!mech.binary()) throw InputError("F_d is defined over binary signal sets only");
  const std::size_t K = system.num_locations();
  const auto sums = signal_sums(system, mech.to_centralized(system));
  for (std::size_t u = 0; u < sums.prob.size(); ++u) {
    const double p = sums.prob[u];
    if (p <= kNegligibleSignal) continue;
    double top = 0.0;
    for (std::size_t k = 0; k < K; ++k) top = std::max(top, sums.utility[u * K + k] / p);
    if (u == 0) {
      if (top > kTieTol) return false;
      continue;
    }
    bool some = false;
    for (std::size_t k = 0; k < K && !some; ++k) {
      some = ((u >> k) & 1U) && sums.utility[u * K + k] / p >= top - kTieTol;
    }
    if (!some) return false;
  }
  return true;
}

GridResult grid_search_decentralized(const SystemModel& system, double resolution,
                                     const GridFilter& filter) {
  if (!(resolution > 0.0 && resolution < 1.0)) {
    throw InputError("grid resolution must lie in (0, 1)");
  }
  const std::size_t K = system.num_locations();
  std::size_t params = 0;
  for (const auto& loc : system.locations()) params += loc.num_states();
  if (params > 8) {
    throw InputError("grid search over " + std::to_string(params) +
                     " parameters exceeds the limit of 8 (sum of |Omega_k|)");
  }
  const auto grid = grid_points(resolution);
  const std::size_t G = grid.size();

  // Every binary signaling of each location, with its summary.
  struct Config {
    std::vector<double> send_one;
    BinarySummary summary;
  };
  std::vector<std::vector<Config>> configs(K);
  for (std::size_t k = 0; k < K; ++k) {
    const auto& loc = system.location(k);
    const std::size_t m = loc.num_states();
    std::vector<std::size_t> idx(m, 0);
    for (;;) {
      Config c;
      c.send_one.resize(m);
      for (std::size_t w = 0; w < m; ++w) c.send_one[w] = grid[idx[w]];
      LocationModel marginal_loc = loc;
      marginal_loc.prior = system.marginal(k);
      c.summary = summarize(marginal_loc, LocationSignaling::binary(c.send_one));
      configs[k].push_back(std::move(c));
      std::size_t w = 0;
      while (w < m && ++idx[w] == G) idx[w++] = 0;
      if (w == m) break;
    }
  }

  const auto v = payoffs(system);
  const std::size_t U = std::size_t{1} << K;
  const std::vector<double> mu = system.joint_prior_table();
  std::vector<std::size_t> support;
  for (std::size_t w = 0; w < mu.size(); ++w) {
    if (mu[w] > 0.0) support.push_back(w);
  }

  std::vector<double> post(K), prob(U), util(U * K);
  std::vector<BinarySummary> summaries(K);
  std::vector<std::size_t> pick(K, 0);

  auto score = [&]() {
    double thr = 0.0;
    if (system.independent()) {
      for (std::size_t u = 0; u < U; ++u) {
        double p = 1.0;
        for (std::size_t k = 0; k < K; ++k) {
          const auto& s = summaries[k];
          const bool one = (u >> k) & 1U;
          p *= one ? s.mass_one : s.mass_zero;
        }
        if (p <= kNegligibleSignal) continue;
        for (std::size_t k = 0; k < K; ++k) {
          const auto& s = summaries[k];
          post[k] = ((u >> k) & 1U) ? s.utility_one / s.mass_one : s.utility_zero / s.mass_zero;
        }
        if (best_action(post, v) != 0) thr += p;
      }
      return thr;
    }
    std::fill(prob.begin(), prob.end(), 0.0);
    std::fill(util.begin(), util.end(), 0.0);
    for (std::size_t w : support) {
      for (std::size_t u = 0; u < U; ++u) {
        double p = mu[w];
        for (std::size_t k = 0; k < K && p != 0.0; ++k) {
          const double one = configs[k][pick[k]].send_one[system.state_of(w, k)];
          p *= ((u >> k) & 1U) ? one : 1.0 - one;
        }
        if (p == 0.0) continue;
        prob[u] += p;
        for (std::size_t k = 0; k < K; ++k) {
          util[u * K + k] += p * system.location(k).utility[system.state_of(w, k)];
        }
      }
    }
    for (std::size_t u = 0; u < U; ++u) {
      if (prob[u] <= kNegligibleSignal) continue;
      for (std::size_t k = 0; k < K; ++k) post[k] = util[u * K + k] / prob[u];
      if (best_action(post, v) != 0) thr += prob[u];
    }
    return thr;
  };

  GridResult result;
  std::vector<std::size_t> best_pick(K, 0);
  double best = -1.0;
  for (;;) {
    for (std::size_t k = 0; k < K; ++k) summaries[k] = configs[k][pick[k]].summary;
    ++result.candidates;
    if (!filter || filter(summaries)) {
      ++result.accepted;
      const double t = score();
      if (t > best) {
        best = t;
        best_pick = pick;
      }
    }
    std::size_t k = 0;
    while (k < K && ++pick[k] == configs[k].size()) pick[k++] = 0;
    if (k == K) break;
  }

  std::vector<LocationSignaling> per;
  for (std::size_t k = 0; k < K; ++k) {
    per.push_back(LocationSignaling::binary(configs[k][best_pick[k]].send_one));
  }
  result.mechanism = DecentralizedMechanism(std::move(per));
  result.throughput = std::max(0.0, best);
  return result;
}

}  // namespace persuasion::oracle
