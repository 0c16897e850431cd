#include <gtest/gtest.h>

#include <array>

#include "persuasion/bounds.hpp"
#include "persuasion/errors.hpp"
#include "persuasion/model.hpp"
#include "test_support.hpp"

using namespace persuasion;
using testing_support::binary_location;

TEST(Model, IndependentJointPriorIsProduct) {
  auto sys = make_system({{"a", {"s0", "s1"}, {0.2, 0.8}, {1, -1}},
                          {"b", {"s0", "s1"}, {0.5, 0.5}, {1, -1}}});
  const std::array<std::size_t, 2> w{0, 0};
  EXPECT_DOUBLE_EQ(joint_prior(sys, w), 0.10);
  double total = 0.0;
  for (std::size_t i = 0; i < sys.num_joint_states(); ++i) total += sys.joint_prior_at(i);
  EXPECT_NEAR(total, 1.0, 1e-9 * sys.num_joint_states());
}

TEST(Model, JointTableLookup) {
  // (s1, s0) has flat index 1 with location 0 fastest.
  std::vector<LocationModel> locs{{"a", {"s0", "s1"}, {0.5, 0.5}, {1, -1}},
                                  {"b", {"s0", "s1"}, {0.5, 0.5}, {1, -1}}};
  auto sys = make_system(locs, std::vector<double>{0.25, 0.25, 0.25, 0.25});
  const std::array<std::size_t, 2> w{1, 0};
  EXPECT_EQ(sys.encode(w), 1u);
  EXPECT_DOUBLE_EQ(joint_prior(sys, w), 0.25);
  EXPECT_EQ(sys.prior_mode(), PriorMode::Joint);
}

TEST(Model, CorrelatedInstanceMass) {
  auto sys = bounds::make_correlated_instance(3, 10.0);
  // "1" is state index 2, "0" is index 1.
  const std::array<std::size_t, 3> w{1, 2, 1};
  EXPECT_NEAR(joint_prior(sys, w), 1.0 / 12.0, 1e-15);
}

TEST(Model, OutOfRangeState) {
  auto sys = testing_support::simple_system(2);
  const std::array<std::size_t, 2> bad{0, 2};
  EXPECT_THROW(joint_prior(sys, bad), InputError);
  const std::array<std::size_t, 1> short_tuple{0};
  EXPECT_THROW(joint_prior(sys, short_tuple), InputError);
}

TEST(Model, ValidateWellFormed) {
  EXPECT_TRUE(validate(testing_support::two_location()).empty());
}

TEST(Model, ValidatePriorSum) {
  SystemModel sys({{"a", {"s0", "s1"}, {0.5, 0.6}, {1, -1}}});
  const auto v = validate(sys);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NE(v[0].message.find("prior sums to 1.1"), std::string::npos) << v[0].message;
  EXPECT_NEAR(v[0].magnitude, 0.1, 1e-12);
  EXPECT_THROW(make_system({{"a", {"s0", "s1"}, {0.5, 0.6}, {1, -1}}}), InputError);
}

TEST(Model, ValidateMarginalMismatch) {
  std::vector<LocationModel> locs{{"a", {"s0", "s1"}, {0.55, 0.45}, {1, -1}},
                                  {"b", {"s0", "s1"}, {0.5, 0.5}, {1, -1}}};
  SystemModel sys(locs, {0.25, 0.25, 0.25, 0.25});
  const auto v = validate(sys);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NEAR(v[0].magnitude, 0.05, 1e-12);
}

TEST(Model, ValidateShapeProblems) {
  EXPECT_FALSE(validate(LocationModel{"a", {"x", "x"}, {0.5, 0.5}, {0, 0}}).empty());
  EXPECT_FALSE(validate(LocationModel{"a", {"x", "y"}, {-0.5, 1.5}, {0, 0}}).empty());
  EXPECT_FALSE(validate(LocationModel{"a", {}, {}, {}}).empty());
  EXPECT_THROW(SystemModel({{"a", {"x", "y"}, {0.5, 0.5}, {0}}}), InputError);
  EXPECT_THROW(SystemModel(std::vector<LocationModel>{}), InputError);
}

TEST(Model, LargeJointRefused) {
  std::vector<LocationModel> locs;
  for (int k = 0; k < 21; ++k) locs.push_back(binary_location("L", 0.5, 1, -1));
  std::vector<double> joint;  // never allocated: refused on size first
  EXPECT_THROW(SystemModel(locs, joint), InputError);
}

TEST(Model, DecodeEncodeRoundTrip) {
  auto sys = make_system({{"a", {"x", "y", "z"}, {0.2, 0.3, 0.5}, {1, 0, -1}},
                          {"b", {"x", "y"}, {0.5, 0.5}, {1, -1}}});
  for (std::size_t i = 0; i < sys.num_joint_states(); ++i) {
    EXPECT_EQ(sys.encode(sys.decode(i)), i);
  }
  EXPECT_EQ(sys.decode(4), (StateTuple{1, 1}));
}

TEST(Model, MechanismValidation) {
  auto sys = testing_support::simple_system(1);
  auto mech = CentralizedMechanism::direct(1, 2);
  EXPECT_FALSE(validate(mech, sys).empty());  // all zeros
  mech.raw(0, 0) = 1.0;
  mech.raw(1, 1) = 1.0;
  EXPECT_TRUE(validate(mech, sys).empty());
  mech.raw(1, 0) = -1e-13;
  EXPECT_TRUE(validate(mech, sys).empty());
  EXPECT_EQ(mech.prob(1, 0), 0.0);
  mech.raw(1, 0) = 0.1;
  EXPECT_FALSE(validate(mech, sys).empty());
}

TEST(Model, DecentralizedToCentralized) {
  auto sys = testing_support::simple_system(2);
  const std::vector<double> a{0.3, 0.3}, b{0.5, 0.5};
  DecentralizedMechanism d({LocationSignaling::binary(a), LocationSignaling::binary(b)});
  EXPECT_TRUE(d.binary());
  EXPECT_EQ(d.num_joint_signals(), 4u);
  const auto c = d.to_centralized(sys);
  // signal 3 = (1, 1)
  EXPECT_NEAR(c.prob(0, 3), 0.15, 1e-15);
  EXPECT_NEAR(c.prob(0, 0), 0.35, 1e-15);
  EXPECT_EQ(c.signals()[1], "(1,0)");
  EXPECT_TRUE(validate(d, sys).empty());
}

TEST(Model, StrategyClassFd) {
  const std::vector<std::size_t> ok{0, 1, 2, 1};
  EXPECT_TRUE(in_class_fd(CustomerStrategy::pure(ok, 2), 2));
  const std::vector<std::size_t> leaves{0, 1, 0, 1};
  EXPECT_FALSE(in_class_fd(CustomerStrategy::pure(leaves, 2), 2));
  const std::vector<std::size_t> wrong{0, 2, 2, 1};
  EXPECT_FALSE(in_class_fd(CustomerStrategy::pure(wrong, 2), 2));
  EXPECT_TRUE(validate(CustomerStrategy::obedient(3)).empty());
}
