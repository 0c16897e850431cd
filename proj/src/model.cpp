#include "persuasion/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "persuasion/errors.hpp"

namespace persuasion {

namespace {

std::string fmt_num(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

void check_row_stochastic(std::span<const double> row, const std::string& field,
                          std::vector<Violation>& out) {
  double sum = 0.0;
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (!std::isfinite(row[j])) {
      out.push_back({field, "entry " + std::to_string(j) + " is not finite", 0.0});
      return;
    }
    if (row[j] < -1e-12) {
      out.push_back({field, "entry " + std::to_string(j) + " is negative (" +
                                fmt_num(row[j]) + ")",
                     -row[j]});
    }
    sum += row[j];
  }
  if (std::abs(sum - 1.0) > kProbTol) {
    out.push_back({field, "row sums to " + fmt_num(sum), std::abs(sum - 1.0)});
  }
}

}  // namespace

SystemModel::SystemModel(std::vector<LocationModel> locations)
    : locations_(std::move(locations)) {
  init_strides(false);
}

SystemModel::SystemModel(std::vector<LocationModel> locations,
                         std::vector<double> joint, bool allow_large)
    : locations_(std::move(locations)), mode_(PriorMode::Joint), joint_(std::move(joint)) {
  init_strides(allow_large);
  if (joint_.size() != num_joint_) {
    throw InputError("joint prior has " + std::to_string(joint_.size()) +
                     " entries, expected |Omega| = " + std::to_string(num_joint_));
  }
}

void SystemModel::init_strides(bool allow_large) {
  if (locations_.empty()) throw InputError("system needs at least one location");
  strides_.resize(locations_.size());
  std::size_t n = 1;
  for (std::size_t k = 0; k < locations_.size(); ++k) {
    const std::size_t m = locations_[k].num_states();
    if (m == 0) {
      throw InputError("location " + std::to_string(k + 1) + " has no states");
    }
    if (locations_[k].prior.size() != m || locations_[k].utility.size() != m) {
      throw InputError("location " + std::to_string(k + 1) +
                       ": prior and utility need one entry per state");
    }
    strides_[k] = n;
    if (n > (std::size_t{1} << 40) / m) {
      throw InputError("state space too large");
    }
    n *= m;
  }
  num_joint_ = n;
  if (mode_ == PriorMode::Joint && n > kMaxJointStates && !allow_large) {
    throw InputError("joint prior over " + std::to_string(n) +
                     " state tuples exceeds 2^20; pass allow_large to override");
  }
}

StateTuple SystemModel::decode(std::size_t index) const {
  StateTuple t(locations_.size());
  for (std::size_t k = 0; k < locations_.size(); ++k) t[k] = state_of(index, k);
  return t;
}

std::size_t SystemModel::encode(std::span<const std::size_t> tuple) const {
  if (tuple.size() != locations_.size()) {
    throw InputError("state tuple has " + std::to_string(tuple.size()) +
                     " entries, expected " + std::to_string(locations_.size()));
  }
  std::size_t idx = 0;
  for (std::size_t k = 0; k < tuple.size(); ++k) {
    if (tuple[k] >= locations_[k].num_states()) {
      throw InputError("state index " + std::to_string(tuple[k]) +
                       " out of range at location " + std::to_string(k + 1));
    }
    idx += tuple[k] * strides_[k];
  }
  return idx;
}

double SystemModel::joint_prior_at(std::size_t index) const {
  if (mode_ == PriorMode::Joint) return joint_[index];
  double p = 1.0;
  for (std::size_t k = 0; k < locations_.size(); ++k) {
    p *= locations_[k].prior[state_of(index, k)];
  }
  return p;
}

std::vector<double> SystemModel::joint_prior_table() const {
  if (mode_ == PriorMode::Joint) return joint_;
  std::vector<double> mu(num_joint_);
  for (std::size_t i = 0; i < num_joint_; ++i) mu[i] = joint_prior_at(i);
  return mu;
}

std::vector<double> SystemModel::marginal(std::size_t k) const {
  const auto& loc = locations_.at(k);
  if (mode_ == PriorMode::Independent) return loc.prior;
  std::vector<double> m(loc.num_states(), 0.0);
  for (std::size_t i = 0; i < num_joint_; ++i) m[state_of(i, k)] += joint_[i];
  return m;
}

double joint_prior(const SystemModel& system, std::span<const std::size_t> state) {
  return system.joint_prior_at(system.encode(state));
}

std::vector<Violation> validate(const LocationModel& location) {
  std::vector<Violation> out;
  const std::string base = "location '" + location.name + "'";
  if (location.states.empty()) {
    out.push_back({base + ".states", "no states", 0.0});
    return out;
  }
  std::set<std::string> seen;
  for (const auto& s : location.states) {
    if (!seen.insert(s).second) {
      out.push_back({base + ".states", "duplicate state label '" + s + "'", 0.0});
    }
  }
  if (location.prior.size() != location.states.size()) {
    out.push_back({base + ".prior",
                   "has " + std::to_string(location.prior.size()) +
                       " entries for " + std::to_string(location.states.size()) +
                       " states",
                   0.0});
  }
  if (location.utility.size() != location.states.size()) {
    out.push_back({base + ".utility",
                   "has " + std::to_string(location.utility.size()) +
                       " entries for " + std::to_string(location.states.size()) +
                       " states",
                   0.0});
  }
  for (double u : location.utility) {
    if (!std::isfinite(u)) {
      out.push_back({base + ".utility", "non-finite entry", 0.0});
      break;
    }
  }
  if (!std::isfinite(location.payoff)) {
    out.push_back({base + ".payoff", "non-finite payoff", 0.0});
  }
  double sum = 0.0;
  for (double p : location.prior) {
    if (!std::isfinite(p)) {
      out.push_back({base + ".prior", "non-finite entry", 0.0});
      return out;
    }
    if (p < 0.0) out.push_back({base + ".prior", "negative entry " + fmt_num(p), -p});
    sum += p;
  }
  if (std::abs(sum - 1.0) > kProbTol) {
    out.push_back({base + ".prior", "prior sums to " + fmt_num(sum), std::abs(sum - 1.0)});
  }
  return out;
}

std::vector<Violation> validate(const SystemModel& system) {
  std::vector<Violation> out;
  if (system.num_locations() == 0) {
    out.push_back({"locations", "system needs at least one location", 0.0});
    return out;
  }
  for (const auto& loc : system.locations()) {
    auto v = validate(loc);
    out.insert(out.end(), v.begin(), v.end());
  }
  if (system.prior_mode() == PriorMode::Joint) {
    const auto& joint = system.joint_table();
    double sum = 0.0;
    for (std::size_t i = 0; i < joint.size(); ++i) {
      if (!std::isfinite(joint[i]) || joint[i] < 0.0) {
        out.push_back({"joint_prior", "entry " + std::to_string(i) +
                                          " is negative or not finite",
                       std::isfinite(joint[i]) ? -joint[i] : 0.0});
      }
      sum += joint[i];
    }
    if (std::abs(sum - 1.0) > kProbTol) {
      out.push_back({"joint_prior", "joint prior sums to " + fmt_num(sum),
                     std::abs(sum - 1.0)});
    }
    for (std::size_t k = 0; k < system.num_locations(); ++k) {
      const auto& loc = system.location(k);
      const auto m = system.marginal(k);
      double worst = 0.0;
      for (std::size_t j = 0; j < m.size() && j < loc.prior.size(); ++j) {
        worst = std::max(worst, std::abs(m[j] - loc.prior[j]));
      }
      if (worst > kProbTol) {
        out.push_back({"location '" + loc.name + "'.prior",
                       "marginal of joint prior differs from stored prior by " +
                           fmt_num(worst),
                       worst});
      }
    }
  }
  return out;
}

SystemModel make_system(std::vector<LocationModel> locations,
                        std::optional<std::vector<double>> joint, bool allow_large) {
  SystemModel sys = joint ? SystemModel(std::move(locations), std::move(*joint), allow_large)
                          : SystemModel(std::move(locations));
  auto v = validate(sys);
  if (!v.empty()) throw InputError(describe(v));
  return sys;
}

std::string describe(const std::vector<Violation>& violations) {
  std::string s;
  for (const auto& v : violations) {
    if (!s.empty()) s += "; ";
    s += v.field + ": " + v.message;
  }
  return s;
}

// --- CentralizedMechanism ---------------------------------------------------

CentralizedMechanism::CentralizedMechanism(std::vector<std::string> signals,
                                           std::size_t num_states)
    : signals_(std::move(signals)),
      num_states_(num_states),
      table_(signals_.size() * num_states, 0.0) {}

CentralizedMechanism::CentralizedMechanism(std::vector<std::string> signals,
                                           std::size_t num_states,
                                           std::vector<double> table)
    : signals_(std::move(signals)), num_states_(num_states), table_(std::move(table)) {
  if (table_.size() != signals_.size() * num_states_) {
    throw InputError("mechanism table has " + std::to_string(table_.size()) +
                     " entries, expected " +
                     std::to_string(signals_.size() * num_states_));
  }
}

CentralizedMechanism CentralizedMechanism::direct(std::size_t num_locations,
                                                  std::size_t num_states) {
  std::vector<std::string> labels;
  for (std::size_t a = 0; a <= num_locations; ++a) labels.push_back(std::to_string(a));
  return CentralizedMechanism(std::move(labels), num_states);
}

double CentralizedMechanism::prob(std::size_t state, std::size_t signal) const {
  return std::max(0.0, table_[state * signals_.size() + signal]);
}

std::vector<Violation> validate(const CentralizedMechanism& mech,
                                const SystemModel& system) {
  std::vector<Violation> out;
  if (mech.num_states() != system.num_joint_states()) {
    out.push_back({"mechanism", "has " + std::to_string(mech.num_states()) +
                                    " state rows, system has " +
                                    std::to_string(system.num_joint_states()),
                   0.0});
    return out;
  }
  const std::size_t S = mech.num_signals();
  for (std::size_t w = 0; w < mech.num_states(); ++w) {
    check_row_stochastic(std::span(mech.table()).subspan(w * S, S),
                         "mechanism row " + std::to_string(w), out);
  }
  return out;
}

// --- LocationSignaling / DecentralizedMechanism -----------------------------

double LocationSignaling::prob(std::size_t state, std::size_t signal) const {
  return std::max(0.0, table[state * signals.size() + signal]);
}

LocationSignaling LocationSignaling::binary(std::span<const double> send_one) {
  LocationSignaling ls;
  ls.signals = {"0", "1"};
  ls.table.resize(2 * send_one.size());
  for (std::size_t w = 0; w < send_one.size(); ++w) {
    ls.table[2 * w] = 1.0 - send_one[w];
    ls.table[2 * w + 1] = send_one[w];
  }
  return ls;
}

LocationSignaling LocationSignaling::silent(std::size_t num_states) {
  std::vector<double> zeros(num_states, 0.0);
  return binary(zeros);
}

DecentralizedMechanism::DecentralizedMechanism(std::vector<LocationSignaling> per_location)
    : per_location_(std::move(per_location)) {
  for (std::size_t k = 0; k < per_location_.size(); ++k) {
    const auto& ls = per_location_[k];
    if (ls.signals.empty() || ls.table.size() % ls.signals.size() != 0) {
      throw InputError("location " + std::to_string(k + 1) +
                       ": signaling table shape does not match its signal set");
    }
  }
}

bool DecentralizedMechanism::binary() const {
  return std::all_of(per_location_.begin(), per_location_.end(),
                     [](const LocationSignaling& ls) { return ls.num_signals() == 2; });
}

std::size_t DecentralizedMechanism::num_joint_signals() const {
  std::size_t n = 1;
  for (const auto& ls : per_location_) n *= ls.num_signals();
  return n;
}

std::size_t DecentralizedMechanism::signal_of(std::size_t joint_signal,
                                              std::size_t k) const {
  for (std::size_t j = 0; j < k; ++j) joint_signal /= per_location_[j].num_signals();
  return joint_signal % per_location_[k].num_signals();
}

CentralizedMechanism DecentralizedMechanism::to_centralized(const SystemModel& system) const {
  if (per_location_.size() != system.num_locations()) {
    throw InputError("mechanism covers " + std::to_string(per_location_.size()) +
                     " locations, system has " + std::to_string(system.num_locations()));
  }
  for (std::size_t k = 0; k < per_location_.size(); ++k) {
    if (per_location_[k].num_states() != system.location(k).num_states()) {
      throw InputError("location " + std::to_string(k + 1) +
                       ": signaling table has the wrong number of states");
    }
  }
  const std::size_t K = per_location_.size();
  const std::size_t S = num_joint_signals();
  std::vector<std::string> labels(S);
  for (std::size_t s = 0; s < S; ++s) {
    std::string l = "(";
    for (std::size_t k = 0; k < K; ++k) {
      if (k) l += ",";
      l += per_location_[k].signals[signal_of(s, k)];
    }
    labels[s] = l + ")";
  }
  CentralizedMechanism out(std::move(labels), system.num_joint_states());
  std::vector<std::size_t> sig(K, 0);
  for (std::size_t w = 0; w < system.num_joint_states(); ++w) {
    std::fill(sig.begin(), sig.end(), 0);
    for (std::size_t s = 0; s < S; ++s) {
      double p = 1.0;
      for (std::size_t k = 0; k < K && p != 0.0; ++k) {
        p *= per_location_[k].prob(system.state_of(w, k), sig[k]);
      }
      out.raw(w, s) = p;
      for (std::size_t k = 0; k < K; ++k) {
        if (++sig[k] < per_location_[k].num_signals()) break;
        sig[k] = 0;
      }
    }
  }
  auto v = validate(out, system);
  if (!v.empty()) throw InputError("product mechanism is not row-stochastic: " + describe(v));
  return out;
}

std::vector<Violation> validate(const DecentralizedMechanism& mech,
                                const SystemModel& system) {
  std::vector<Violation> out;
  if (mech.num_locations() != system.num_locations()) {
    out.push_back({"mechanism", "location count mismatch", 0.0});
    return out;
  }
  for (std::size_t k = 0; k < mech.num_locations(); ++k) {
    const auto& ls = mech.location(k);
    const std::string field = "mechanism location " + std::to_string(k + 1);
    if (ls.num_states() != system.location(k).num_states()) {
      out.push_back({field, "state count mismatch", 0.0});
      continue;
    }
    for (std::size_t w = 0; w < ls.num_states(); ++w) {
      check_row_stochastic(std::span(ls.table).subspan(w * ls.num_signals(), ls.num_signals()),
                           field + " row " + std::to_string(w), out);
    }
  }
  return out;
}

// --- CustomerStrategy -------------------------------------------------------

CustomerStrategy::CustomerStrategy(std::size_t num_signals, std::size_t num_locations)
    : num_signals_(num_signals),
      num_actions_(num_locations + 1),
      table_(num_signals * (num_locations + 1), 0.0) {}

CustomerStrategy CustomerStrategy::obedient(std::size_t num_locations) {
  CustomerStrategy f(num_locations + 1, num_locations);
  for (std::size_t a = 0; a <= num_locations; ++a) f.at(a, a) = 1.0;
  return f;
}

CustomerStrategy CustomerStrategy::pure(std::span<const std::size_t> actions,
                                        std::size_t num_locations) {
  CustomerStrategy f(actions.size(), num_locations);
  for (std::size_t s = 0; s < actions.size(); ++s) {
    if (actions[s] > num_locations) throw InputError("action index out of range");
    f.at(s, actions[s]) = 1.0;
  }
  return f;
}

std::size_t CustomerStrategy::main_action(std::size_t signal) const {
  std::size_t best = 0;
  for (std::size_t a = 1; a < num_actions_; ++a) {
    if (prob(signal, a) > prob(signal, best)) best = a;
  }
  return best;
}

std::vector<Violation> validate(const CustomerStrategy& strategy) {
  std::vector<Violation> out;
  for (std::size_t s = 0; s < strategy.num_signals(); ++s) {
    std::vector<double> row(strategy.num_actions());
    for (std::size_t a = 0; a < row.size(); ++a) row[a] = strategy.prob(s, a);
    check_row_stochastic(row, "strategy row " + std::to_string(s), out);
  }
  return out;
}

bool in_class_fd(const CustomerStrategy& strategy, std::size_t num_locations) {
  const std::size_t U = std::size_t{1} << num_locations;
  if (strategy.num_signals() != U || strategy.num_actions() != num_locations + 1) return false;
  for (std::size_t u = 0; u < U; ++u) {
    if (u != 0 && strategy.prob(u, 0) > 0.0) return false;
    for (std::size_t k = 0; k < num_locations; ++k) {
      if (((u >> k) & 1U) == 0 && strategy.prob(u, k + 1) > 0.0) return false;
    }
  }
  return true;
}

}  // namespace persuasion
