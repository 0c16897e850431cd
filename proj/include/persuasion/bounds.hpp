#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "persuasion/model.hpp"

namespace persuasion::bounds {

// 1 - (1 - 1/K)^K, evaluated as -expm1(K log1p(-1/K)).
double gamma(std::size_t K);

// (1 - prod(1 - x_k)) - gamma(K) * sum x_k for x in [0,1]^K with sum x <= 1.
double series_inequality_gap(std::span<const double> x);

// Unique root in [0,1] of z = (1 - z)^(K-1), by bisection.
double solve_zstar(std::size_t K);

// (1 + K z*_K) / (1 + K).
double correlated_upper_bound(std::size_t K);

// F(u) = sum_k min{u_k, (1 - sum_{l != k} u_l / (K-1))^(K-1)}.
double f_value(std::span<const double> u);
// Locations k where u_k does not exceed its cap term (0-based).
std::vector<std::size_t> active_set(std::span<const double> u);

enum class FMode { Auto, FullGrid, Symmetric };

struct FMaximum {
  std::vector<double> u;
  double value = 0.0;
};

// Maximize F over [0,1]^K. FullGrid scans {0, res, ..., 1}^K (K <= 4);
// Symmetric maximizes K z over z <= (1-z)^(K-1). Auto picks FullGrid for
// K <= 4.
FMaximum max_f_grid(std::size_t K, double resolution, FMode mode = FMode::Auto);

struct TightnessInstance {
  SystemModel system;
  double p_star = 0.0;
  double predicted_th = 1.0;
  double predicted_th_d = 0.0;
};

// K independent binary locations with P(state 1) = 1 - (X/(X+1))^(1/K) and
// utilities (-1, X).
TightnessInstance make_tightness_instance(std::size_t K, double X);

// Joint prior over {-1, 0, 1}^K: one location in state 1 and the rest in 0
// with total mass 1/(K+1); one location in 0 and the rest in -1 with mass
// K/(K+1). Utilities (-X, -1, K).
SystemModel make_correlated_instance(std::size_t K, double X);

}  // namespace persuasion::bounds
