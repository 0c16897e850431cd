#include "persuasion/random_instances.hpp"

#include <algorithm>

#include "persuasion/decentralized.hpp"

namespace persuasion {

namespace {

std::vector<double> random_simplex(Rng& rng, std::size_t n) {
  std::vector<double> p(n);
  double sum = 0.0;
  for (auto& x : p) {
    x = 1.0 - rng.uniform();  // (0, 1]
    sum += x;
  }
  for (auto& x : p) x /= sum;
  return p;
}

void draw_utilities(Rng& rng, LocationModel& loc, const InstanceOptions& opt) {
  const std::size_t m = loc.num_states();
  for (int attempt = 0; attempt < 1000; ++attempt) {
    loc.utility.resize(m);
    for (auto& h : loc.utility) h = rng.uniform(-2.0, 2.0);
    if (opt.force_nonnegative_state || opt.negative_mean) {
      const bool any = std::any_of(loc.utility.begin(), loc.utility.end(),
                                   [](double h) { return h >= 0.0; });
      if (!any) loc.utility[rng.integer(0, m - 1)] = rng.uniform(0.0, 2.0);
    }
    if (!opt.negative_mean) return;
    double mean = 0.0;
    for (std::size_t w = 0; w < m; ++w) mean += loc.prior[w] * loc.utility[w];
    if (mean < 0.0) return;
  }
  // Give up on rejection sampling: make one state very bad.
  loc.utility[0] = -2.0 / std::max(loc.prior[0], 1e-3);
}

LocationModel random_location(Rng& rng, std::size_t index, const InstanceOptions& opt) {
  LocationModel loc;
  loc.name = "L" + std::to_string(index + 1);
  const std::size_t m = rng.integer(opt.min_states, opt.max_states);
  for (std::size_t w = 0; w < m; ++w) loc.states.push_back("s" + std::to_string(w));
  loc.prior = random_simplex(rng, m);
  if (opt.random_payoffs) loc.payoff = opt.payoff_max * (1.0 - rng.uniform());
  return loc;
}

}  // namespace

SystemModel random_independent(Rng& rng, std::size_t K, const InstanceOptions& options) {
  std::vector<LocationModel> locs;
  for (std::size_t k = 0; k < K; ++k) {
    locs.push_back(random_location(rng, k, options));
    draw_utilities(rng, locs.back(), options);
  }
  return make_system(std::move(locs));
}

SystemModel random_joint(Rng& rng, std::size_t K, const InstanceOptions& options) {
  std::vector<LocationModel> locs;
  for (std::size_t k = 0; k < K; ++k) {
    locs.push_back(random_location(rng, k, options));
    locs.back().utility.assign(locs.back().num_states(), 0.0);
  }
  SystemModel shape(locs);
  auto joint = random_simplex(rng, shape.num_joint_states());
  for (auto& loc : locs) std::fill(loc.prior.begin(), loc.prior.end(), 0.0);
  for (std::size_t w = 0; w < joint.size(); ++w) {
    for (std::size_t k = 0; k < K; ++k) locs[k].prior[shape.state_of(w, k)] += joint[w];
  }
  InstanceOptions util_opt = options;
  util_opt.negative_mean = false;
  for (auto& loc : locs) draw_utilities(rng, loc, util_opt);
  return make_system(std::move(locs), std::move(joint));
}

DecentralizedMechanism random_binary_mechanism(Rng& rng, const SystemModel& system,
                                               double edge) {
  std::vector<LocationSignaling> per;
  for (std::size_t k = 0; k < system.num_locations(); ++k) {
    const auto& loc = system.location(k);
    std::vector<double> send_one(loc.num_states());
    if (rng.coin(edge)) {
      const std::size_t kind = rng.integer(0, 2);
      if (kind == 2) {
        per.push_back(solve_isolated(loc, k).mechanism);
        continue;
      }
      std::fill(send_one.begin(), send_one.end(), kind == 0 ? 1.0 : 0.0);
    } else {
      for (auto& x : send_one) x = rng.uniform();
    }
    per.push_back(LocationSignaling::binary(send_one));
  }
  return DecentralizedMechanism(std::move(per));
}

}  // namespace persuasion
