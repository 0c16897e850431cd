#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace persuasion::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kFeasibilityTol = 1e-8;
inline constexpr double kOptimalityTol = 1e-9;

enum class Relation { LessEqual, GreaterEqual, Equal };

struct Constraint {
  std::vector<double> coeffs;
  Relation relation = Relation::LessEqual;
  double rhs = 0.0;
};

// maximize objective . x  subject to constraints and lower <= x <= upper.
struct LinearProgram {
  std::size_t n_vars = 0;
  std::vector<double> objective;
  std::vector<Constraint> constraints;
  std::vector<double> lower;
  std::vector<double> upper;

  LinearProgram() = default;
  // Objective zero, bounds [0, +inf).
  explicit LinearProgram(std::size_t n);

  void add(std::vector<double> coeffs, Relation rel, double rhs);
  std::size_t n_constraints() const { return constraints.size(); }
};

enum class Status { Optimal, Infeasible, Unbounded };

std::string to_string(Status s);

struct Solution {
  Status status = Status::Infeasible;
  std::vector<double> x;
  double objective_value = 0.0;
  double max_violation = 0.0;
  std::size_t iterations = 0;
};

enum class Pricing {
  // Smallest-index entering variable; never cycles, slow on larger LPs.
  Bland,
  // Most positive reduced cost, switching to Bland's rule for the rest of
  // the phase after a run of degenerate pivots.
  DantzigWithBlandFallback,
};

struct SolverOptions {
  Pricing pricing = Pricing::DantzigWithBlandFallback;
  // 0 means 50 * (n_vars + n_constraints).
  std::size_t iteration_cap = 0;
};

// Dense two-phase primal simplex. Throws InputError on malformed input and
// SolverError when the iteration cap is hit.
Solution solve(const LinearProgram& lp, const SolverOptions& options = {});

// Largest breach of any constraint or bound at x (0 if x is feasible).
double max_violation(const LinearProgram& lp, std::span<const double> x);

// Throws InputError if rows or bounds are malformed.
void check_shape(const LinearProgram& lp);

}  // namespace persuasion::lp
