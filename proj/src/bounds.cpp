#include "persuasion/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "persuasion/errors.hpp"

namespace persuasion::bounds {

double gamma(std::size_t K) {
  if (K == 0) throw InputError("gamma needs K >= 1");
  if (K == 1) return 1.0;
  const double k = static_cast<double>(K);
  return -std::expm1(k * std::log1p(-1.0 / k));
}

double series_inequality_gap(std::span<const double> x) {
  if (x.empty()) throw InputError("series inequality needs at least one entry");
  double sum = 0.0, none = 1.0;
  for (double xi : x) {
    if (!(xi >= 0.0 && xi <= 1.0)) throw InputError("entries must lie in [0, 1]");
    sum += xi;
    none *= 1.0 - xi;
  }
  if (sum > 1.0 + 1e-12) throw InputError("entries must sum to at most 1");
  return (1.0 - none) - gamma(x.size()) * sum;
}

double solve_zstar(std::size_t K) {
  if (K < 2) throw InputError("z*_K is defined for K >= 2");
  const double e = static_cast<double>(K - 1);
  auto g = [e](double z) { return z - std::pow(1.0 - z, e); };
  double lo = 0.0, hi = 1.0;  // g(0) = -1 < 0 < 1 = g(1)
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double gm = g(mid);
    if (gm == 0.0) return mid;
    (gm < 0.0 ? lo : hi) = mid;
  }
  return std::abs(g(lo)) <= std::abs(g(hi)) ? lo : hi;
}

double correlated_upper_bound(std::size_t K) {
  const double k = static_cast<double>(K);
  return (1.0 + k * solve_zstar(K)) / (1.0 + k);
}

namespace {

double cap_term(std::span<const double> u, std::size_t k, double total) {
  const double K1 = static_cast<double>(u.size() - 1);
  const double base = std::max(0.0, 1.0 - (total - u[k]) / K1);
  return std::pow(base, K1);
}

void check_u(std::span<const double> u) {
  if (u.size() < 2) throw InputError("F(u) needs K >= 2");
}

}  // namespace

double f_value(std::span<const double> u) {
  check_u(u);
  const double total = std::accumulate(u.begin(), u.end(), 0.0);
  double f = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) f += std::min(u[k], cap_term(u, k, total));
  return f;
}

std::vector<std::size_t> active_set(std::span<const double> u) {
  check_u(u);
  const double total = std::accumulate(u.begin(), u.end(), 0.0);
  std::vector<std::size_t> a;
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (u[k] <= cap_term(u, k, total)) a.push_back(k);
  }
  return a;
}

FMaximum max_f_grid(std::size_t K, double resolution, FMode mode) {
  if (K < 2) throw InputError("F maximization needs K >= 2");
  if (!(resolution > 0.0 && resolution <= 0.5)) {
    throw InputError("resolution must lie in (0, 0.5]");
  }
  if (mode == FMode::Auto) mode = K <= 4 ? FMode::FullGrid : FMode::Symmetric;

  FMaximum best;
  if (mode == FMode::Symmetric) {
    best.u.assign(K, solve_zstar(K));
    best.value = f_value(best.u);
    return best;
  }
  if (K > 4) throw InputError("full-grid F maximization is limited to K <= 4");

  std::vector<double> grid;
  const auto n = static_cast<std::size_t>(std::floor(1.0 / resolution + 1e-9));
  for (std::size_t i = 0; i <= n; ++i) grid.push_back(std::min(1.0, static_cast<double>(i) * resolution));
  if (grid.back() < 1.0 - 1e-12) grid.push_back(1.0);

  std::vector<std::size_t> idx(K, 0);
  std::vector<double> u(K);
  best.value = -1.0;
  for (;;) {
    for (std::size_t k = 0; k < K; ++k) u[k] = grid[idx[k]];
    const double f = f_value(u);
    if (f > best.value) {
      best.value = f;
      best.u = u;
    }
    std::size_t k = 0;
    while (k < K && ++idx[k] == grid.size()) idx[k++] = 0;
    if (k == K) break;
  }
  return best;
}

TightnessInstance make_tightness_instance(std::size_t K, double X) {
  if (K < 2) throw InputError("tightness instance needs K >= 2");
  if (!(X > 1.0) || !std::isfinite(X)) throw InputError("tightness instance needs finite X > 1");
  const double k = static_cast<double>(K);
  // 1 - (X/(X+1))^(1/K) = -expm1(-log1p(1/X) / K)
  const double p = -std::expm1(-std::log1p(1.0 / X) / k);

  std::vector<LocationModel> locs;
  for (std::size_t i = 0; i < K; ++i) {
    locs.push_back({"L" + std::to_string(i + 1), {"0", "1"}, {1.0 - p, p}, {-1.0, X}, 1.0});
  }
  TightnessInstance t;
  t.system = make_system(std::move(locs));
  t.p_star = p;
  t.predicted_th = 1.0;
  t.predicted_th_d = 1.0 - std::pow(1.0 - p * (X + 1.0), k);
  return t;
}

SystemModel make_correlated_instance(std::size_t K, double X) {
  if (K < 2) throw InputError("correlated instance needs K >= 2");
  if (!(X > static_cast<double>(K)) || !std::isfinite(X)) {
    throw InputError("correlated instance needs finite X > K");
  }
  const double k = static_cast<double>(K);
  // State labels in index order: "-1" -> 0, "0" -> 1, "1" -> 2.
  std::vector<LocationModel> locs;
  for (std::size_t i = 0; i < K; ++i) {
    locs.push_back({"L" + std::to_string(i + 1), {"-1", "0", "1"}, {0.0, 0.0, 0.0}, {-X, -1.0, k}, 1.0});
  }
  SystemModel shape(locs);
  std::vector<double> joint(shape.num_joint_states(), 0.0);
  const double high = 1.0 / (k * (k + 1.0));
  const double low = 1.0 / (k + 1.0);
  for (std::size_t special = 0; special < K; ++special) {
    std::vector<std::size_t> a(K, 1), b(K, 0);
    a[special] = 2;  // (1, 0, ..., 0)
    b[special] = 1;  // (0, -1, ..., -1)
    joint[shape.encode(a)] += high;
    joint[shape.encode(b)] += low;
  }
  for (std::size_t w = 0; w < joint.size(); ++w) {
    for (std::size_t i = 0; i < K; ++i) locs[i].prior[shape.state_of(w, i)] += joint[w];
  }
  return make_system(std::move(locs), std::move(joint));
}

}  // namespace persuasion::bounds
