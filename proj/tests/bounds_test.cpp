#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "persuasion/bounds.hpp"
#include "persuasion/centralized.hpp"
#include "persuasion/decentralized.hpp"
#include "persuasion/errors.hpp"

using namespace persuasion;

TEST(Bounds, Gamma) {
  EXPECT_NEAR(bounds::gamma(2), 0.75, 1e-15);
  EXPECT_NEAR(bounds::gamma(3), 19.0 / 27.0, 1e-15);
  EXPECT_NEAR(bounds::gamma(1000000), 1.0 - std::exp(-1.0), 1e-6);
  EXPECT_EQ(bounds::gamma(1), 1.0);
  EXPECT_THROW(bounds::gamma(0), InputError);
  double prev = bounds::gamma(1);
  for (std::size_t K = 2; K <= 10000; ++K) {
    const double g = bounds::gamma(K);
    ASSERT_LT(g, prev) << K;
    ASSERT_GT(g, 1.0 - std::exp(-1.0)) << K;
    prev = g;
  }
}

TEST(Bounds, SeriesInequality) {
  const std::vector<double> uniform(4, 0.25), zeros(3, 0.0), ex{0.5, 0.1};
  EXPECT_NEAR(bounds::series_inequality_gap(uniform), 0.0, 1e-15);
  EXPECT_EQ(bounds::series_inequality_gap(zeros), 0.0);
  EXPECT_NEAR(bounds::series_inequality_gap(ex), 0.10, 1e-15);
  const std::vector<double> too_big{0.6, 0.6}, negative{-0.1, 0.2};
  EXPECT_THROW(bounds::series_inequality_gap(too_big), InputError);
  EXPECT_THROW(bounds::series_inequality_gap(negative), InputError);

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (std::size_t K = 2; K <= 6; ++K) {
    for (int t = 0; t < 10000; ++t) {
      std::vector<double> x(K);
      double sum = 0.0;
      for (auto& xi : x) sum += (xi = unif(rng));
      const double scale = unif(rng) / sum;
      for (auto& xi : x) xi *= scale;
      ASSERT_GE(bounds::series_inequality_gap(x), -1e-12);
    }
  }
}

TEST(Bounds, Zstar) {
  EXPECT_NEAR(bounds::solve_zstar(2), 0.5, 1e-15);
  EXPECT_NEAR(bounds::solve_zstar(3), (3.0 - std::sqrt(5.0)) / 2.0, 1e-12);
  EXPECT_NEAR(bounds::solve_zstar(10), 0.1757, 1e-4);
  for (std::size_t K = 2; K <= 128; ++K) {
    const double z = bounds::solve_zstar(K);
    ASSERT_LE(std::abs(z - std::pow(1.0 - z, static_cast<double>(K - 1))), 1e-12) << K;
  }
  EXPECT_THROW(bounds::solve_zstar(1), InputError);
}

TEST(Bounds, CorrelatedUpperBound) {
  EXPECT_NEAR(bounds::correlated_upper_bound(2), 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(bounds::correlated_upper_bound(10), 0.26, 0.015);
  EXPECT_NEAR(bounds::correlated_upper_bound(10), 0.2507, 1e-4);
  EXPECT_NEAR(bounds::correlated_upper_bound(100), 0.05, 0.015);
  EXPECT_NEAR(bounds::correlated_upper_bound(100), 0.043, 1e-3);
  for (std::size_t K = 2; K <= (1u << 15); K *= 2) {
    ASSERT_LT(bounds::correlated_upper_bound(2 * K), bounds::correlated_upper_bound(K)) << K;
  }
}

TEST(Bounds, FFunction) {
  const std::vector<double> zero(3, 0.0), half{0.5, 0.5};
  EXPECT_EQ(bounds::f_value(zero), 0.0);
  EXPECT_NEAR(bounds::f_value(half), 1.0, 1e-15);
  EXPECT_EQ(bounds::active_set(half), (std::vector<std::size_t>{0, 1}));

  auto g2 = bounds::max_f_grid(2, 0.01, bounds::FMode::FullGrid);
  EXPECT_NEAR(g2.value, 1.0, 1e-9);
  auto s3 = bounds::max_f_grid(3, 0.01, bounds::FMode::Symmetric);
  EXPECT_NEAR(s3.value, 3.0 * (3.0 - std::sqrt(5.0)) / 2.0, 1e-9);
  EXPECT_NEAR(s3.value, 1.1459, 1e-4);

  for (std::size_t K = 2; K <= 32; ++K) {
    EXPECT_NEAR(bounds::max_f_grid(K, 0.1, bounds::FMode::Symmetric).value,
                static_cast<double>(K) * bounds::solve_zstar(K), 1e-9);
  }
  for (std::size_t K = 2; K <= 4; ++K) {
    const double res = K == 4 ? 0.05 : 0.01;
    EXPECT_NEAR(bounds::max_f_grid(K, res, bounds::FMode::FullGrid).value,
                static_cast<double>(K) * bounds::solve_zstar(K), static_cast<double>(K) * res);
  }
  EXPECT_THROW(bounds::max_f_grid(2, 0.6), InputError);
  EXPECT_THROW(bounds::max_f_grid(5, 0.1, bounds::FMode::FullGrid), InputError);
}

TEST(Bounds, TightnessInstance) {
  auto t = bounds::make_tightness_instance(2, 3.0);
  EXPECT_NEAR(t.p_star, 0.1339746, 1e-7);
  EXPECT_NEAR(t.predicted_th_d, 0.7846097, 1e-7);
  EXPECT_THROW(bounds::make_tightness_instance(2, 1.0), InputError);

  auto big = bounds::make_tightness_instance(2, 1e6);
  EXPECT_LE(big.predicted_th_d, 1.0 - std::pow(1.0 - 1.0001 / 2.0, 2.0));
  EXPECT_GT(big.predicted_th_d, bounds::gamma(2));

  // Stable p* keeps precision where the naive form cancels.
  auto huge = bounds::make_tightness_instance(3, 1e12);
  EXPECT_NEAR(huge.p_star * 3.0 * 1e12, 1.0, 1e-6);
}

TEST(Bounds, TightnessMatchesSolvers) {
  for (std::size_t K = 2; K <= 6; ++K) {
    for (double X : {2.0, 3.0, 10.0, 100.0}) {
      auto t = bounds::make_tightness_instance(K, X);
      EXPECT_NEAR(compose_optimal(t.system).report.throughput, t.predicted_th_d, 1e-6);
    }
  }
  for (std::size_t K = 2; K <= 5; ++K) {
    auto t = bounds::make_tightness_instance(K, 3.0);
    EXPECT_NEAR(solve_centralized(t.system).objective, 1.0, 1e-7) << K;
  }
}

TEST(Bounds, CorrelatedInstance) {
  auto sys = bounds::make_correlated_instance(3, 10.0);
  int high = 0, low = 0;
  double total = 0.0;
  for (std::size_t w = 0; w < sys.num_joint_states(); ++w) {
    const double m = sys.joint_prior_at(w);
    total += m;
    if (std::abs(m - 1.0 / 12.0) < 1e-15) ++high;
    if (std::abs(m - 0.25) < 1e-15) ++low;
  }
  EXPECT_EQ(high, 3);
  EXPECT_EQ(low, 3);
  EXPECT_NEAR(total, 1.0, 1e-15);
  EXPECT_THROW(bounds::make_correlated_instance(3, 3.0), InputError);
}
