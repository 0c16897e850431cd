#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>

#include "persuasion/errors.hpp"
#include "persuasion/lp.hpp"

namespace lp = persuasion::lp;

namespace {

// Solve the square system M x = r; nullopt if singular.
std::optional<std::vector<double>> solve_square(std::vector<std::vector<double>> M,
                                                std::vector<double> r) {
  const std::size_t n = r.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t i = c + 1; i < n; ++i) {
      if (std::abs(M[i][c]) > std::abs(M[piv][c])) piv = i;
    }
    if (std::abs(M[piv][c]) < 1e-10) return std::nullopt;
    std::swap(M[piv], M[c]);
    std::swap(r[piv], r[c]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c) continue;
      const double f = M[i][c] / M[c][c];
      for (std::size_t j = c; j < n; ++j) M[i][j] -= f * M[c][j];
      r[i] -= f * r[c];
    }
  }
  for (std::size_t i = 0; i < n; ++i) r[i] /= M[i][i];
  return r;
}

// Best objective over all basic feasible points (x >= 0 plus the rows).
std::optional<double> vertex_enumeration(const lp::LinearProgram& p) {
  const std::size_t n = p.n_vars;
  // Hyperplanes: every constraint row and every x_j = 0.
  std::vector<std::vector<double>> planes;
  std::vector<double> rhs;
  for (const auto& c : p.constraints) {
    planes.push_back(c.coeffs);
    rhs.push_back(c.rhs);
  }
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> e(n, 0.0);
    e[j] = 1.0;
    planes.push_back(e);
    rhs.push_back(0.0);
  }
  std::optional<double> best;
  const std::size_t m = planes.size();
  std::vector<bool> pick(m, false);
  std::fill(pick.begin(), pick.begin() + static_cast<long>(n), true);
  do {
    std::vector<std::vector<double>> M;
    std::vector<double> r;
    for (std::size_t i = 0; i < m; ++i) {
      if (pick[i]) {
        M.push_back(planes[i]);
        r.push_back(rhs[i]);
      }
    }
    auto x = solve_square(M, r);
    if (!x) continue;
    if (lp::max_violation(p, *x) > 1e-9) continue;
    double obj = 0.0;
    for (std::size_t j = 0; j < n; ++j) obj += p.objective[j] * (*x)[j];
    if (!best || obj > *best) best = obj;
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return best;
}

}  // namespace

TEST(Lp, SingleVariableUpperBound) {
  lp::LinearProgram p(1);
  p.objective = {1.0};
  p.add({1.0}, lp::Relation::LessEqual, 1.0);
  const auto s = lp::solve(p);
  ASSERT_EQ(s.status, lp::Status::Optimal);
  EXPECT_NEAR(s.x[0], 1.0, 1e-12);
  EXPECT_NEAR(s.objective_value, 1.0, 1e-12);
}

TEST(Lp, Infeasible) {
  lp::LinearProgram p(1);
  p.objective = {1.0};
  p.add({1.0}, lp::Relation::LessEqual, -1.0);
  EXPECT_EQ(lp::solve(p).status, lp::Status::Infeasible);
}

TEST(Lp, Unbounded) {
  lp::LinearProgram p(2);
  p.objective = {1.0, 1.0};
  p.add({1.0, -1.0}, lp::Relation::LessEqual, 1.0);
  EXPECT_EQ(lp::solve(p).status, lp::Status::Unbounded);
}

TEST(Lp, TwoVariableVertex) {
  lp::LinearProgram p(2);
  p.objective = {1.0, 1.0};
  p.add({1.0, 2.0}, lp::Relation::LessEqual, 4.0);
  p.add({3.0, 1.0}, lp::Relation::LessEqual, 6.0);
  const auto s = lp::solve(p);
  ASSERT_EQ(s.status, lp::Status::Optimal);
  EXPECT_NEAR(s.objective_value, 2.8, 1e-12);
  EXPECT_NEAR(s.x[0], 1.6, 1e-12);
  EXPECT_NEAR(s.x[1], 1.2, 1e-12);
  EXPECT_EQ(*vertex_enumeration(p), s.objective_value);
}

TEST(Lp, EqualityAndBounds) {
  // max x - y, x + y = 1, x <= 0.3
  lp::LinearProgram p(2);
  p.objective = {1.0, -1.0};
  p.upper[0] = 0.3;
  p.add({1.0, 1.0}, lp::Relation::Equal, 1.0);
  const auto s = lp::solve(p);
  ASSERT_EQ(s.status, lp::Status::Optimal);
  EXPECT_NEAR(s.objective_value, -0.4, 1e-12);
  EXPECT_LE(s.max_violation, 1e-8);
}

TEST(Lp, LowerBoundShift) {
  // min x (max -x) with x in [2, 5]
  lp::LinearProgram p(1);
  p.objective = {-1.0};
  p.lower[0] = 2.0;
  p.upper[0] = 5.0;
  const auto s = lp::solve(p);
  ASSERT_EQ(s.status, lp::Status::Optimal);
  EXPECT_NEAR(s.x[0], 2.0, 1e-12);
}

TEST(Lp, ShapeErrors) {
  lp::LinearProgram p(2);
  p.objective = {1.0, 1.0};
  p.constraints.push_back({{1.0}, lp::Relation::LessEqual, 1.0});
  EXPECT_THROW(lp::solve(p), persuasion::InputError);

  lp::LinearProgram q(1);
  q.objective = {1.0};
  q.lower[0] = 2.0;
  q.upper[0] = 1.0;
  EXPECT_THROW(lp::solve(q), persuasion::InputError);
}

TEST(Lp, IterationCapIsAnError) {
  lp::LinearProgram p(2);
  p.objective = {1.0, 1.0};
  p.add({1.0, 2.0}, lp::Relation::LessEqual, 4.0);
  p.add({3.0, 1.0}, lp::Relation::LessEqual, 6.0);
  lp::SolverOptions opt;
  opt.iteration_cap = 1;
  EXPECT_THROW(lp::solve(p, opt), persuasion::SolverError);
}

TEST(Lp, DegenerateCyclingExample) {
  // Beale's example cycles under textbook Dantzig pricing without anti-cycling.
  lp::LinearProgram p(4);
  p.objective = {0.75, -150.0, 0.02, -6.0};
  p.add({0.25, -60.0, -0.04, 9.0}, lp::Relation::LessEqual, 0.0);
  p.add({0.5, -90.0, -0.02, 3.0}, lp::Relation::LessEqual, 0.0);
  p.add({0.0, 0.0, 1.0, 0.0}, lp::Relation::LessEqual, 1.0);
  for (auto pricing : {lp::Pricing::Bland, lp::Pricing::DantzigWithBlandFallback}) {
    lp::SolverOptions opt;
    opt.pricing = pricing;
    const auto s = lp::solve(p, opt);
    ASSERT_EQ(s.status, lp::Status::Optimal);
    EXPECT_NEAR(s.objective_value, 0.05, 1e-9);
  }
}

class LpRandom : public ::testing::TestWithParam<int> {};

TEST_P(LpRandom, MatchesVertexEnumeration) {
  std::mt19937_64 rng(1000 + static_cast<unsigned>(GetParam()));
  std::uniform_real_distribution<double> coef(-2.0, 2.0), pos(0.1, 2.0);
  std::uniform_int_distribution<int> nv(1, 6), nc(1, 7), rel(0, 2);
  int solved = 0;
  for (int trial = 0; trial < 60; ++trial) {
    lp::LinearProgram p(static_cast<std::size_t>(nv(rng)));
    for (auto& c : p.objective) c = coef(rng);
    const int m = nc(rng);
    for (int i = 0; i < m; ++i) {
      std::vector<double> row(p.n_vars);
      for (auto& a : row) a = coef(rng);
      const auto r = static_cast<lp::Relation>(rel(rng));
      p.add(row, r, r == lp::Relation::LessEqual ? pos(rng) : coef(rng) * 0.5);
    }
    // Box row keeps everything bounded.
    p.add(std::vector<double>(p.n_vars, 1.0), lp::Relation::LessEqual, 5.0);

    const auto s = lp::solve(p);
    const auto ref = vertex_enumeration(p);
    if (!ref) {
      EXPECT_EQ(s.status, lp::Status::Infeasible) << "trial " << trial;
      continue;
    }
    ASSERT_EQ(s.status, lp::Status::Optimal) << "trial " << trial;
    EXPECT_NEAR(s.objective_value, *ref, 1e-6) << "trial " << trial;
    EXPECT_LE(s.max_violation, 1e-8);
    EXPECT_NEAR(lp::max_violation(p, s.x), s.max_violation, 1e-12);
    ++solved;
  }
  EXPECT_GT(solved, 0);
}

INSTANTIATE_TEST_SUITE_P(Seeds, LpRandom, ::testing::Range(0, 5));
