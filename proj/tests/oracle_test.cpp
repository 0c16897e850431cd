#include <gtest/gtest.h>

#include <array>

#include "persuasion/centralized.hpp"
#include "persuasion/decentralized.hpp"
#include "persuasion/errors.hpp"
#include "persuasion/oracle.hpp"
#include "persuasion/random_instances.hpp"
#include "test_support.hpp"

using namespace persuasion;

namespace {

// Customer utility sum_omega mu sigma(s|omega) h_a(omega_a) under f.
double customer_utility(const SystemModel& sys, const CentralizedMechanism& m,
                        const CustomerStrategy& f) {
  double u = 0.0;
  for (std::size_t w = 0; w < sys.num_joint_states(); ++w) {
    for (std::size_t s = 0; s < m.num_signals(); ++s) {
      for (std::size_t a = 1; a <= sys.num_locations(); ++a) {
        u += sys.joint_prior_at(w) * m.prob(w, s) * f.prob(s, a) *
             sys.location(a - 1).utility[sys.state_of(w, a - 1)];
      }
    }
  }
  return u;
}

}  // namespace

TEST(Oracle, BestActionTies) {
  const std::array<double, 2> post{0.5, 0.5 + 1e-10};
  const std::array<double, 2> equal{1.0, 1.0};
  EXPECT_EQ(oracle::best_action(post, equal), 1u);
  const std::array<double, 2> favor_second{1.0, 2.0};
  EXPECT_EQ(oracle::best_action(post, favor_second), 2u);
  const std::array<double, 2> zero{0.0, -1.0};
  EXPECT_EQ(oracle::best_action(zero, equal), 1u);  // joining ties with leaving
  const std::array<double, 2> neg{-0.1, -1.0};
  EXPECT_EQ(oracle::best_action(neg, equal), 0u);
}

TEST(Oracle, NoInformationLeaves) {
  auto sys = make_system({{"a", {"x", "y"}, {0.8, 0.2}, {-1.0, 1.0}}});
  auto m = oracle::no_information(sys);
  auto f = oracle::best_response(sys, m);
  EXPECT_EQ(f.main_action(0), 0u);
  EXPECT_EQ(oracle::evaluate(sys, m, f).throughput, 0.0);
}

TEST(Oracle, TwoLocationBaselines) {
  auto sys = testing_support::two_location();
  auto full = oracle::full_information(sys);
  auto f = oracle::best_response(sys, full);
  // Signal index: location 0 fastest, labels "0","1".
  EXPECT_EQ(f.main_action(0), 0u);
  EXPECT_EQ(f.main_action(1), 1u);
  EXPECT_EQ(f.main_action(2), 2u);
  EXPECT_EQ(f.main_action(3), 1u);
  EXPECT_NEAR(oracle::evaluate(sys, full, f).throughput, 0.25, 1e-12);

  auto none = oracle::no_information(sys);
  EXPECT_EQ(oracle::evaluate(sys, none, oracle::best_response(sys, none)).throughput, 0.0);
}

TEST(Oracle, SingleLocationBaselines) {
  auto good = make_system({{"a", {"x", "y"}, {0.5, 0.5}, {-1.0, 1.5}}});
  auto none = oracle::no_information(good);
  EXPECT_EQ(oracle::evaluate(good, none, oracle::best_response(good, none)).throughput, 1.0);

  auto sys = testing_support::simple_system(1);
  auto full = oracle::full_information(sys);
  EXPECT_NEAR(oracle::evaluate(sys, full, oracle::best_response(sys, full)).throughput, 0.2,
              1e-15);
}

TEST(Oracle, CompositionTieGoesToFirstLocation) {
  auto sys = testing_support::simple_system(2);
  auto c = compose_optimal(sys);
  auto f = oracle::best_response(sys, c.mechanism);
  EXPECT_EQ(f.main_action(3), 1u);
  const auto joint = c.mechanism.to_centralized(sys);
  auto r = oracle::evaluate(sys, joint, f);
  for (const auto& st : r.signal_stats) {
    if (st.signal == 3) {
      EXPECT_NEAR(st.posterior_utility[0], 0.0, 1e-9);
      EXPECT_NEAR(st.posterior_utility[1], 0.0, 1e-9);
    }
  }
}

TEST(Oracle, EvaluateZeroStrategy) {
  auto sys = testing_support::simple_system(2);
  auto m = oracle::full_information(sys);
  std::vector<std::size_t> leave(m.num_joint_signals(), 0);
  auto r = oracle::evaluate(sys, m, CustomerStrategy::pure(leave, 2));
  EXPECT_EQ(r.throughput, 0.0);
  EXPECT_EQ(r.value, 0.0);
}

TEST(Oracle, ConstantSignalsMatchProductFormula) {
  auto sys = testing_support::simple_system(2);
  const std::vector<double> a{0.3, 0.3}, b{0.5, 0.5};
  DecentralizedMechanism m({LocationSignaling::binary(a), LocationSignaling::binary(b)});
  const std::vector<std::size_t> fd{0, 1, 2, 2};
  EXPECT_NEAR(oracle::evaluate(sys, m, CustomerStrategy::pure(fd, 2)).throughput, 0.65, 1e-15);
}

TEST(Oracle, ShapeMismatch) {
  auto sys = testing_support::simple_system(2);
  auto m = oracle::no_information(sys);
  EXPECT_THROW(oracle::evaluate(sys, m, CustomerStrategy::obedient(2)), InputError);
}

TEST(Oracle, BestResponseBeatsRandomStrategies) {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    auto sys = random_independent(rng, rng.integer(1, 3));
    auto m = random_binary_mechanism(rng, sys, 0.3).to_centralized(sys);
    auto br = oracle::best_response(sys, m);
    const double best = customer_utility(sys, m, br);
    const auto rep = oracle::evaluate(sys, m, br);
    EXPECT_TRUE(rep.optimal_strategy_ok);
    for (int i = 0; i < 100; ++i) {
      std::vector<std::size_t> acts(m.num_signals());
      for (auto& a : acts) a = rng.integer(0, sys.num_locations());
      EXPECT_GE(best, customer_utility(sys, m, CustomerStrategy::pure(acts, sys.num_locations())) -
                          1e-9);
    }
  }
}

TEST(Oracle, FdThroughputIsProductFormula) {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t K = rng.integer(1, 4);
    auto sys = random_independent(rng, K);
    auto m = random_binary_mechanism(rng, sys, 0.3);
    const double closed = product_throughput(sys, m);
    std::vector<std::size_t> acts(m.num_joint_signals(), 0);
    for (std::size_t u = 1; u < acts.size(); ++u) {
      std::vector<std::size_t> ones;
      for (std::size_t k = 0; k < K; ++k) {
        if ((u >> k) & 1U) ones.push_back(k + 1);
      }
      acts[u] = ones[rng.integer(0, ones.size() - 1)];
    }
    auto f = CustomerStrategy::pure(acts, K);
    ASSERT_TRUE(in_class_fd(f, K));
    EXPECT_NEAR(oracle::evaluate(sys, m, f).throughput, closed, 1e-9);
  }
}

TEST(Oracle, GridSearch) {
  auto one = testing_support::simple_system(1);
  EXPECT_NEAR(oracle::grid_search_decentralized(one, 0.01).throughput, 0.4, 0.01);

  auto two = testing_support::simple_system(2);
  auto g = oracle::grid_search_decentralized(two, 0.05);
  EXPECT_NEAR(g.throughput, 0.64, 0.1);
  EXPECT_LE(g.throughput, solve_centralized(two).objective + 1e-7);

  auto hopeless = make_system({{"a", {"x", "y"}, {0.5, 0.5}, {-1.0, -0.5}}});
  EXPECT_EQ(oracle::grid_search_decentralized(hopeless, 0.1).throughput, 0.0);

  EXPECT_THROW(oracle::grid_search_decentralized(two, 0.0), InputError);
  EXPECT_THROW(oracle::grid_search_decentralized(testing_support::simple_system(5), 0.5),
               InputError);
}
