#include "persuasion/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "persuasion/bounds.hpp"
#include "persuasion/centralized.hpp"
#include "persuasion/decentralized.hpp"
#include "persuasion/errors.hpp"
#include "persuasion/instance_io.hpp"
#include "persuasion/oracle.hpp"
#include "persuasion/random_instances.hpp"

namespace persuasion::cli {

namespace {

std::string fixed(double x, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

std::string sig9(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

std::string sci(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6e", x);
  return buf;
}

std::string tuple(const std::vector<double>& xs) {
  std::string s = "(";
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + fixed(xs[i]);
  return s + ")";
}

std::string state_label(const SystemModel& sys, std::size_t w) {
  std::string s = "(";
  for (std::size_t k = 0; k < sys.num_locations(); ++k) {
    s += (k ? "," : "") + sys.location(k).states[sys.state_of(w, k)];
  }
  return s + ")";
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

void print_header(const SystemModel& sys, std::ostream& out) {
  out << "instance: K = " << sys.num_locations() << ", |Omega| = " << sys.num_joint_states()
      << ", " << (sys.independent() ? "independent" : "joint") << " prior\n";
}

void print_centralized_table(const SystemModel& sys, const CentralizedMechanism& m,
                             std::ostream& out) {
  std::size_t width = 8;
  for (std::size_t w = 0; w < sys.num_joint_states(); ++w) {
    width = std::max(width, state_label(sys, w).size() + 2);
  }
  out << "mechanism sigma(a|omega):\n  " << pad("omega", width);
  for (std::size_t a = 0; a < m.num_signals(); ++a) out << pad("a=" + m.signals()[a], 10);
  out << "\n";
  for (std::size_t w = 0; w < sys.num_joint_states(); ++w) {
    out << "  " << pad(state_label(sys, w), width);
    for (std::size_t a = 0; a < m.num_signals(); ++a) out << pad(fixed(m.prob(w, a)), 10);
    out << "\n";
  }
}

void print_decentralized_table(const SystemModel& sys, const DecentralizedMechanism& m,
                               std::ostream& out) {
  out << "mechanism sigma_k(s_k|omega_k):\n";
  for (std::size_t k = 0; k < sys.num_locations(); ++k) {
    const auto& loc = sys.location(k);
    const auto& ls = m.location(k);
    out << "  " << loc.name << ":\n";
    std::size_t width = 8;
    for (const auto& st : loc.states) width = std::max(width, st.size() + 2);
    out << "    " << pad("omega_k", width);
    for (const auto& s : ls.signals) out << pad("s=" + s, 10);
    out << "\n";
    for (std::size_t w = 0; w < loc.num_states(); ++w) {
      out << "    " << pad(loc.states[w], width);
      for (std::size_t s = 0; s < ls.num_signals(); ++s) out << pad(fixed(ls.prob(w, s)), 10);
      out << "\n";
    }
  }
}

// Optimal decentralized throughput. Enumerates the joint mechanism when it is
// small enough, otherwise uses the isolated LPs and the product formula.
struct DecentralizedOutcome {
  double throughput = 0.0;
  std::vector<IsolatedSolution> isolated;
  std::optional<ComposeResult> composed;
};

DecentralizedOutcome decentralized_optimum(const SystemModel& sys) {
  DecentralizedOutcome d;
  const std::size_t K = sys.num_locations();
  const bool small = K < 22 && sys.num_joint_states() <= (std::size_t{1} << 22) >> K;
  if (small) {
    d.composed = compose_optimal(sys);
    d.isolated = d.composed->isolated;
    d.throughput = d.composed->report.throughput;
    return d;
  }
  if (!sys.independent()) {
    throw InputError("optimal decentralized composition requires independent locations");
  }
  double none = 1.0;
  for (std::size_t k = 0; k < K; ++k) {
    d.isolated.push_back(solve_isolated(sys.location(k), k));
    none *= 1.0 - d.isolated.back().th_iso;
  }
  d.throughput = 1.0 - none;
  return d;
}

struct FallbackOutcome {
  CentralizedResult central;
  FallbackResult fallback;
  EvaluationReport report;
};

FallbackOutcome fallback_outcome(const SystemModel& sys) {
  FallbackOutcome f;
  f.central = solve_centralized(sys);
  f.fallback = correlated_fallback(sys, f.central.mechanism);
  f.report = oracle::evaluate(sys, f.fallback.mechanism,
                              oracle::best_response(sys, f.fallback.mechanism));
  return f;
}

std::vector<double> throughputs_of(const std::vector<IsolatedSolution>& iso) {
  std::vector<double> t;
  for (const auto& s : iso) t.push_back(s.th_iso);
  return t;
}

// --- verify -----------------------------------------------------------------

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent stream per (seed, property, K, trial).
Rng trial_rng(std::uint64_t seed, std::uint64_t tag, std::size_t K, std::size_t trial) {
  return Rng(splitmix(splitmix(splitmix(seed) ^ tag) ^ (K << 32) ^ trial));
}

struct Property {
  Property(std::string n, double tol) : name(std::move(n)), tolerance(tol) {}

  std::string name;
  double tolerance = 0.0;
  std::size_t checked = 0;
  std::size_t passed = 0;
  std::size_t skipped = 0;
  double worst = std::numeric_limits<double>::infinity();
  std::string first_failure;

  // slack >= -tolerance passes.
  void record(double slack, const std::function<std::string()>& describe) {
    ++checked;
    worst = std::min(worst, slack);
    if (slack >= -tolerance) {
      ++passed;
    } else if (first_failure.empty()) {
      first_failure = describe();
    }
  }
};

std::string instance_dump(const SystemModel& sys) { return serialize_instance(sys); }

std::string mechanism_line(const SystemModel& sys, const DecentralizedMechanism& m) {
  std::string s = "mechanism sigma_k(1|omega_k):";
  for (std::size_t k = 0; k < sys.num_locations(); ++k) {
    s += " " + sys.location(k).name + "=[";
    for (std::size_t w = 0; w < sys.location(k).num_states(); ++w) {
      s += (w ? "," : "") + sig9(m.location(k).prob(w, 1));
    }
    s += "]";
  }
  return s + "\n";
}

std::string trial_tag(std::size_t K, std::size_t trial) {
  return "K=" + std::to_string(K) + ", trial " + std::to_string(trial);
}

std::vector<std::size_t> k_values(const std::optional<Range>& r, Range fallback) {
  const Range use = r.value_or(fallback);
  std::vector<std::size_t> ks;
  for (std::size_t k = use.lo; k <= use.hi; ++k) ks.push_back(k);
  return ks;
}

void suite_independent(const VerifyOptions& opt, const GlobalOptions& g,
                       std::vector<Property>& props, std::vector<std::string>& notes) {
  const auto ks = k_values(opt.K, {2, 4});
  const std::size_t trials = opt.trials ? opt.trials : 50;
  if (ks.front() < 1 || ks.back() > 5) throw InputError("independent-bound needs K in 1..5");
  props = {{"gamma-guarantee", g.tolerance},
           {"centralized-dominates", g.tolerance},
           {"lp-matches-oracle", g.tolerance},
           {"product-formula", 1e-9}};
  notes.push_back("Th_D >= gamma(K) * Th; |Omega_k| in {2, 3}");
  for (std::size_t K : ks) {
    for (std::size_t t = 0; t < trials; ++t) {
      Rng rng = trial_rng(g.seed, 1, K, t);
      const auto sys = random_independent(rng, K);
      const auto central = solve_centralized(sys);
      const auto comp = compose_optimal(sys);
      const double th = central.objective, thd = comp.report.throughput;
      auto dump = [&] { return trial_tag(K, t) + "\n" + instance_dump(sys); };
      props[0].record(thd - bounds::gamma(K) * th, dump);
      props[1].record(th - thd, dump);
      const auto br = oracle::evaluate(sys, central.mechanism,
                                       oracle::best_response(sys, central.mechanism));
      props[2].record(-std::abs(br.throughput - th), dump);
      props[3].record(-std::abs(thd - comp.closed_form), dump);
    }
  }
}

void suite_tightness(const VerifyOptions& opt, const GlobalOptions& g,
                     std::vector<Property>& props, std::vector<std::string>& notes) {
  const auto ks = k_values(opt.K, {2, 4});
  const std::vector<double> xs = opt.X.empty() ? std::vector<double>{2, 3, 10} : opt.X;
  if (ks.front() < 2) throw InputError("tightness needs K >= 2");
  props = {{"centralized-reaches-one", g.tolerance},
           {"closed-form-th-d", 1e-6},
           {"ratio-above-gamma", g.tolerance}};
  constexpr std::size_t kLpMax = 6;
  notes.push_back("centralized LP run for K <= " + std::to_string(kLpMax));
  for (std::size_t K : ks) {
    for (double X : xs) {
      const auto inst = bounds::make_tightness_instance(K, X);
      auto dump = [&] {
        return "K=" + std::to_string(K) + ", X=" + sig9(X) + "\n" + instance_dump(inst.system);
      };
      const double thd = decentralized_optimum(inst.system).throughput;
      double th = inst.predicted_th;
      if (K <= kLpMax) {
        th = solve_centralized(inst.system).objective;
        props[0].record(-std::abs(th - 1.0), dump);
      } else {
        ++props[0].skipped;
      }
      props[1].record(-std::abs(thd - inst.predicted_th_d), dump);
      props[2].record(thd / th - bounds::gamma(K), dump);
    }
  }
}

void suite_correlated(const VerifyOptions& opt, const GlobalOptions& g,
                      std::vector<Property>& props, std::vector<std::string>& notes) {
  const auto ks = k_values(opt.K, {2, 4});
  const std::size_t trials = opt.trials ? opt.trials : 50;
  const std::vector<double> xs = opt.X.empty() ? std::vector<double>{10, 100} : opt.X;
  if (ks.front() < 2 || ks.back() > 4) throw InputError("correlated-bound needs K in 2..4");
  props = {{"fallback-guarantee", g.tolerance},
           {"worst-case-centralized-one", g.tolerance},
           {"worst-case-fallback", g.tolerance},
           {"zstar-residual", 1e-12}};
  notes.push_back("fallback best-response throughput >= Th / K; binary random joint priors");
  InstanceOptions io;
  io.max_states = 2;
  for (std::size_t K : ks) {
    const double k = static_cast<double>(K);
    for (std::size_t t = 0; t < trials; ++t) {
      Rng rng = trial_rng(g.seed, 3, K, t);
      const auto sys = random_joint(rng, K, io);
      const auto f = fallback_outcome(sys);
      props[0].record(f.report.throughput - f.central.objective / k, [&] {
        return trial_tag(K, t) + "\n" + instance_dump(sys);
      });
    }
    for (double X : xs) {
      if (!(X > k)) {
        notes.push_back("skipped X=" + sig9(X) + " for K=" + std::to_string(K) + " (needs X > K)");
        continue;
      }
      const auto sys = bounds::make_correlated_instance(K, X);
      const auto f = fallback_outcome(sys);
      auto dump = [&] {
        return "K=" + std::to_string(K) + ", X=" + sig9(X) + "\n" + instance_dump(sys);
      };
      props[1].record(-std::abs(f.central.objective - 1.0), dump);
      props[2].record(f.report.throughput - 1.0 / k, dump);
    }
    const double z = bounds::solve_zstar(K);
    props[3].record(-std::abs(z - std::pow(1.0 - z, k - 1.0)),
                    [&] { return "K=" + std::to_string(K) + ", z*=" + sig9(z) + "\n"; });
  }
}

void suite_lemmas(const VerifyOptions& opt, const GlobalOptions& g,
                  std::vector<Property>& props, std::vector<std::string>& notes) {
  const auto ks = k_values(opt.K, {2, 6});
  const std::size_t trials = opt.trials ? opt.trials : 1000;
  if (ks.front() < 2) throw InputError("lemmas needs K >= 2");
  props = {{"series-inequality", 1e-12},
           {"product-formula", 1e-9},
           {"obedience-characterization", 0.0},
           {"symmetric-reduction", 1e-9},
           {"full-grid-agreement", 0.0}};
  notes.push_back("product-formula uses K <= 4; obedience-characterization uses K = 2");
  for (std::size_t K : ks) {
    for (std::size_t t = 0; t < trials; ++t) {
      Rng rng = trial_rng(g.seed, 4, K, t);
      std::vector<double> x(K);
      double sum = 0.0;
      for (auto& xi : x) sum += (xi = rng.uniform());
      const double scale = rng.uniform() / sum;
      for (auto& xi : x) xi *= scale;
      props[0].record(bounds::series_inequality_gap(x), [&] {
        std::string s = trial_tag(K, t) + ": x = [";
        for (std::size_t i = 0; i < K; ++i) s += (i ? "," : "") + sig9(x[i]);
        return s + "]\n";
      });
    }
    const double k = static_cast<double>(K);
    props[3].record(-std::abs(bounds::max_f_grid(K, 0.01, bounds::FMode::Symmetric).value -
                              k * bounds::solve_zstar(K)),
                    [&] { return "K=" + std::to_string(K) + "\n"; });
    if (K <= 3) {
      const double res = 0.01;
      const double full = bounds::max_f_grid(K, res, bounds::FMode::FullGrid).value;
      props[4].record(k * res - std::abs(full - k * bounds::solve_zstar(K)),
                      [&] { return "K=" + std::to_string(K) + ", full grid " + sig9(full) + "\n"; });
    }
  }
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng = trial_rng(g.seed, 5, 0, t);
    const std::size_t K = rng.integer(std::min<std::size_t>(ks.front(), 4),
                                      std::min<std::size_t>(ks.back(), 4));
    const auto sys = random_independent(rng, K);
    const auto m = random_binary_mechanism(rng, sys, 0.3);
    std::vector<std::size_t> acts(m.num_joint_signals(), 0);
    for (std::size_t u = 1; u < acts.size(); ++u) {
      std::vector<std::size_t> ones;
      for (std::size_t j = 0; j < K; ++j) {
        if ((u >> j) & 1U) ones.push_back(j + 1);
      }
      acts[u] = ones[rng.integer(0, ones.size() - 1)];
    }
    const double enumerated =
        oracle::evaluate(sys, m, CustomerStrategy::pure(acts, K)).throughput;
    props[1].record(-std::abs(enumerated - product_throughput(sys, m)), [&] {
      return trial_tag(K, t) + "\n" + instance_dump(sys) + mechanism_line(sys, m);
    });
  }
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng = trial_rng(g.seed, 6, 2, t);
    const auto sys = random_independent(rng, 2);
    const auto m = random_binary_mechanism(rng, sys, 0.5);
    const bool verdict = check_obedience(sys, m).admits_fd();
    const bool exists = oracle::fd_strategy_exists(sys, m);
    props[2].record(verdict == exists ? 0.0 : -1.0, [&] {
      return trial_tag(2, t) + "\n" + instance_dump(sys) + mechanism_line(sys, m);
    });
  }
}

std::string range_text(const std::optional<Range>& r, Range fallback) {
  const Range u = r.value_or(fallback);
  return u.lo == u.hi ? std::to_string(u.lo) : std::to_string(u.lo) + ".." + std::to_string(u.hi);
}

// --- sweep ------------------------------------------------------------------

std::string opt_field(std::optional<double> x) { return x ? sig9(*x) : ""; }

void sweep_row(std::ostream& out, std::size_t K, std::optional<double> X,
               std::optional<double> th, std::optional<double> thd) {
  std::optional<double> ratio;
  if (th && thd && *th > 0.0) ratio = *thd / *th;
  const double k = static_cast<double>(K);
  out << K << "," << opt_field(X) << "," << opt_field(th) << "," << opt_field(thd) << ","
      << opt_field(ratio) << "," << sig9(bounds::gamma(K)) << "," << sig9(1.0 / k) << ","
      << (K >= 2 ? sig9(bounds::correlated_upper_bound(K)) : "") << "\n";
}

}  // namespace

Range parse_range(std::string_view text) {
  auto to_size = [&](std::string_view s) {
    std::size_t v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty()) {
      throw InputError("invalid K range '" + std::string(text) + "' (expected N or A..B)");
    }
    return v;
  };
  Range r;
  if (auto dots = text.find(".."); dots != std::string_view::npos) {
    r.lo = to_size(text.substr(0, dots));
    r.hi = to_size(text.substr(dots + 2));
  } else {
    r.lo = r.hi = to_size(text);
  }
  if (r.lo == 0 || r.lo > r.hi) throw InputError("invalid K range '" + std::string(text) + "'");
  return r;
}

std::vector<double> parse_list(std::string_view text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto item = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
    double v = 0.0;
    const auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc() || p != item.data() + item.size() || !std::isfinite(v)) {
      throw InputError("invalid number list '" + std::string(text) + "'");
    }
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
  std::string s = "\"";
  for (char c : text) {
    if (c == '"') s += '"';
    s += c;
  }
  return s + "\"";
}

int cmd_solve(const SolveOptions& opt, const GlobalOptions& global, std::ostream& out) {
  const auto sys = load_instance(opt.instance);
  const std::size_t K = sys.num_locations();
  print_header(sys, out);
  out << "mode: " << opt.mode << (opt.weighted ? " (weighted)" : "")
      << (opt.fallback ? " (fallback)" : "") << "\n";

  if (opt.mode == "centralized") {
    const auto r = solve_centralized(sys, opt.weighted);
    out << "Th = " << fixed(r.report.throughput) << "\n";
    if (opt.weighted) out << "Val = " << fixed(r.report.value) << "\n";
    out << "T_k = " << tuple(r.report.per_location_throughput) << "\n";
    if (!global.summary) print_centralized_table(sys, r.mechanism, out);
    return kOk;
  }
  if (opt.mode == "decentralized") {
    if (opt.fallback) {
      const auto f = fallback_outcome(sys);
      out << "Th = " << fixed(f.central.objective) << " (centralized)\n";
      out << "Th_D = " << fixed(f.report.throughput) << " (fallback)\n";
      out << "guarantee Th/K = " << fixed(f.central.objective / static_cast<double>(K)) << "\n";
      out << "signaling location: " << sys.location(f.fallback.location).name << "\n";
      out << "T_k = " << tuple(f.report.per_location_throughput) << "\n";
      if (!global.summary) print_decentralized_table(sys, f.fallback.mechanism, out);
      return kOk;
    }
    if (!sys.independent()) {
      throw PreconditionError(
          "decentralized mode on a joint prior needs --fallback (the 1/K construction)");
    }
    const auto d = decentralized_optimum(sys);
    out << "Th_D = " << fixed(d.throughput) << "\n";
    out << "Th_iso = " << tuple(throughputs_of(d.isolated)) << "\n";
    if (d.composed) {
      out << "T_k = " << tuple(d.composed->report.per_location_throughput) << "\n";
      out << "obedience: " << to_string(check_obedience(sys, d.composed->mechanism)) << "\n";
    } else {
      out << "note: joint enumeration skipped; Th_D from the product formula\n";
    }
    if (!global.summary) {
      std::vector<LocationSignaling> per;
      for (const auto& iso : d.isolated) per.push_back(iso.mechanism);
      print_decentralized_table(sys, DecentralizedMechanism(std::move(per)), out);
    }
    return kOk;
  }
  if (opt.mode == "heterogeneous") {
    const auto h = heterogeneous_compose(sys);
    out << "Val_D = " << fixed(h.value) << "\n";
    std::string order;
    for (std::size_t i = 0; i < h.order.size(); ++i) {
      order += (i ? ", " : "") + sys.location(h.order[i]).name;
    }
    out << "order: " << (order.empty() ? "(none)" : order) << "\n";
    out << "Th_iso = " << tuple(throughputs_of(h.isolated)) << "\n";
    if (!global.summary) print_decentralized_table(sys, h.mechanism, out);
    return kOk;
  }
  if (opt.mode == "full-info" || opt.mode == "no-info") {
    const auto m =
        opt.mode == "full-info" ? oracle::full_information(sys) : oracle::no_information(sys);
    const auto rep = oracle::evaluate(sys, m, oracle::best_response(sys, m));
    out << "Th = " << fixed(rep.throughput) << "\n";
    out << "Val = " << fixed(rep.value) << "\n";
    out << "T_k = " << tuple(rep.per_location_throughput) << "\n";
    if (!global.summary) print_decentralized_table(sys, m, out);
    return kOk;
  }
  throw InputError("unknown mode '" + opt.mode + "'");
}

int cmd_compare(const std::string& instance, const GlobalOptions&, std::ostream& out) {
  const auto sys = load_instance(instance);
  const std::size_t K = sys.num_locations();
  const double th = solve_centralized(sys).objective;

  struct Row {
    std::string name;
    double value;
    std::optional<double> guarantee;
  };
  std::vector<Row> rows{{"centralized", th, std::nullopt}};
  if (sys.independent()) {
    rows.push_back({"decentralized", decentralized_optimum(sys).throughput, bounds::gamma(K)});
  } else {
    rows.push_back({"fallback", fallback_outcome(sys).report.throughput,
                    1.0 / static_cast<double>(K)});
  }
  for (const char* name : {"full-info", "no-info"}) {
    const auto m = std::string(name) == "full-info" ? oracle::full_information(sys)
                                                    : oracle::no_information(sys);
    rows.push_back({name, oracle::evaluate(sys, m, oracle::best_response(sys, m)).throughput,
                    std::nullopt});
  }

  out << "mechanism,throughput,ratio_to_centralized,guarantee\n";
  for (const auto& r : rows) {
    out << csv_field(r.name) << "," << sig9(r.value) << ","
        << (th > 0.0 ? sig9(r.value / th) : "") << ","
        << (r.guarantee ? sig9(*r.guarantee) : "") << "\n";
  }
  return kOk;
}

int cmd_verify(const VerifyOptions& opt, const GlobalOptions& global, std::ostream& out) {
  std::vector<Property> props;
  std::vector<std::string> notes;
  Range default_k{2, 4};
  if (opt.suite == "independent-bound") {
    suite_independent(opt, global, props, notes);
  } else if (opt.suite == "tightness") {
    suite_tightness(opt, global, props, notes);
  } else if (opt.suite == "correlated-bound") {
    suite_correlated(opt, global, props, notes);
  } else if (opt.suite == "lemmas") {
    default_k = {2, 6};
    suite_lemmas(opt, global, props, notes);
  } else {
    throw InputError("unknown suite '" + opt.suite +
                     "' (independent-bound, tightness, correlated-bound, lemmas)");
  }

  out << "verify " << opt.suite << ": K " << range_text(opt.K, default_k) << ", seed "
      << global.seed << ", tolerance " << sci(global.tolerance);
  if (opt.trials) out << ", trials " << opt.trials;
  out << "\n";
  for (const auto& n : notes) out << "  note: " << n << "\n";

  bool ok = true;
  for (const auto& p : props) {
    const bool pass = p.passed == p.checked;
    ok &= pass;
    out << "  " << pad(p.name, 30) << (pass ? "PASS " : "FAIL ") << p.passed << "/" << p.checked
        << "  worst slack " << (p.checked ? sci(p.worst) : std::string("n/a"));
    if (p.skipped) out << "  (" << p.skipped << " skipped)";
    out << "\n";
  }
  out << (ok ? "PASS" : "FAIL") << "\n";
  for (const auto& p : props) {
    if (p.first_failure.empty()) continue;
    out << "offending instance for " << p.name << ": " << p.first_failure;
  }
  return ok ? kOk : kVerifyFailed;
}

int cmd_sweep(const SweepOptions& opt, const GlobalOptions&, std::ostream& out) {
  out << "K,X,Th,Th_D,ratio,gamma,inv_K,correlated_upper_bound\n";
  if (opt.generator == "tightness") {
    const auto ks = k_values(opt.K, {2, 6});
    const std::vector<double> xs = opt.X.empty() ? std::vector<double>{1000} : opt.X;
    const std::size_t lp_max = opt.lp_max_k ? opt.lp_max_k : 6;
    if (ks.front() < 2) throw InputError("tightness sweep needs K >= 2");
    for (std::size_t K : ks) {
      for (double X : xs) {
        const auto inst = bounds::make_tightness_instance(K, X);
        double none = 1.0;
        for (std::size_t k = 0; k < K; ++k) {
          none *= 1.0 - solve_isolated(inst.system.location(k), k).th_iso;
        }
        const double th = K <= lp_max ? solve_centralized(inst.system).objective : inst.predicted_th;
        sweep_row(out, K, X, th, 1.0 - none);
      }
    }
    return kOk;
  }
  if (opt.generator == "correlated") {
    const auto ks = k_values(opt.K, {2, 8});
    const std::size_t lp_max = opt.lp_max_k ? opt.lp_max_k : 4;
    if (ks.front() < 2) throw InputError("correlated sweep needs K >= 2");
    for (std::size_t K : ks) {
      if (opt.X.empty()) {
        sweep_row(out, K, std::nullopt, std::nullopt, std::nullopt);
        continue;
      }
      for (double X : opt.X) {
        if (!(X > static_cast<double>(K)) || K > lp_max) {
          sweep_row(out, K, X, std::nullopt, std::nullopt);
          continue;
        }
        const auto f = fallback_outcome(bounds::make_correlated_instance(K, X));
        sweep_row(out, K, X, f.central.objective, f.report.throughput);
      }
    }
    return kOk;
  }
  throw InputError("unknown generator '" + opt.generator + "' (tightness, correlated)");
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bayesian persuasion in multi-location service systems"};
  app.name("persuade");
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions global;
  std::string k_text, x_text;
  app.add_option("--tolerance", global.tolerance, "Slack allowed in guarantee checks")
      ->capture_default_str();
  app.add_flag("--summary", global.summary, "Omit mechanism tables");
  app.add_option("--output", global.output, "Write the report to this file");
  app.add_option("--seed", global.seed, "Random seed for verify")->capture_default_str();

  SolveOptions solve;
  auto* s = app.add_subcommand("solve", "Solve one instance");
  s->add_option("instance", solve.instance, "Instance file (JSON)")->required();
  s->add_option("--mode", solve.mode, "Mechanism family")
      ->check(CLI::IsMember({"centralized", "decentralized", "heterogeneous", "full-info",
                             "no-info"}))
      ->capture_default_str();
  s->add_flag("--weighted", solve.weighted, "Centralized: maximize sum v_k T_k");
  s->add_flag("--fallback", solve.fallback, "Decentralized: 1/K construction for any prior");

  std::string compare_path;
  auto* c = app.add_subcommand("compare", "CSV comparison of mechanism families");
  c->add_option("instance", compare_path, "Instance file (JSON)")->required();

  VerifyOptions verify;
  auto* v = app.add_subcommand("verify", "Run a seeded property suite");
  v->add_option("suite", verify.suite, "independent-bound | tightness | correlated-bound | lemmas")
      ->required();
  v->add_option("--K", k_text, "K range, e.g. 2..5");
  v->add_option("--X", x_text, "Comma-separated X values");
  v->add_option("--trials", verify.trials, "Trials per K (suite default if omitted)");

  SweepOptions sweep;
  auto* w = app.add_subcommand("sweep", "CSV of bounds and computed throughputs");
  w->add_option("generator", sweep.generator, "tightness | correlated")->required();
  w->add_option("--K", k_text, "K range, e.g. 2..6");
  w->add_option("--X", x_text, "Comma-separated X values");
  w->add_option("--lp-max-k", sweep.lp_max_k, "Largest K solved by LP");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "persuade: " << e.what() << "\n";
    return kBadInput;
  }

  try {
    if (!k_text.empty()) verify.K = sweep.K = parse_range(k_text);
    if (!x_text.empty()) verify.X = sweep.X = parse_list(x_text);
    if (!(global.tolerance >= 0.0)) throw InputError("--tolerance must be nonnegative");

    // Nothing reaches the sink unless the command completes.
    std::ostringstream report;
    int code = kOk;
    if (s->parsed()) {
      code = cmd_solve(solve, global, report);
    } else if (c->parsed()) {
      code = cmd_compare(compare_path, global, report);
    } else if (v->parsed()) {
      code = cmd_verify(verify, global, report);
    } else {
      code = cmd_sweep(sweep, global, report);
    }
    if (global.output.empty()) {
      out << report.str();
    } else {
      std::ofstream file(global.output, std::ios::binary);
      if (!(file << report.str())) throw InputError("cannot write '" + global.output + "'");
    }
    return code;
  } catch (const InputError& e) {
    err << "persuade: input error: " << e.what() << "\n";
    return kBadInput;
  } catch (const PreconditionError& e) {
    err << "persuade: precondition not met: " << e.what() << "\n";
    return kPrecondition;
  } catch (const std::exception& e) {
    err << "persuade: internal error: " << e.what() << "\n";
    return kInternal;
  }
}

}  // namespace persuasion::cli
