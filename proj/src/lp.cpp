#include "persuasion/lp.hpp"

#include <algorithm>
#include <cmath>

#include "persuasion/errors.hpp"

namespace persuasion::lp {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr std::size_t kDegenerateRunLimit = 50;

// How an original variable maps onto nonnegative tableau columns:
// x = offset + sign_pos * y[pos] - y[neg].
struct VarMap {
  double offset = 0.0;
  double sign_pos = 1.0;
  std::size_t pos = 0;
  std::ptrdiff_t neg = -1;
};

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : m_(rows), n_(cols), w_(cols + 1), t_(rows * (cols + 1), 0.0), d_(cols + 1, 0.0),
        basis_(rows, 0) {}

  double& at(std::size_t i, std::size_t j) { return t_[i * w_ + j]; }
  double at(std::size_t i, std::size_t j) const { return t_[i * w_ + j]; }
  double& rhs(std::size_t i) { return t_[i * w_ + n_]; }
  double rhs(std::size_t i) const { return t_[i * w_ + n_]; }
  std::vector<double>& reduced() { return d_; }
  std::vector<std::size_t>& basis() { return basis_; }
  std::size_t rows() const { return m_; }
  std::size_t cols() const { return n_; }

  void pivot(std::size_t p, std::size_t e) {
    double* prow = &t_[p * w_];
    const double inv = 1.0 / prow[e];
    for (std::size_t j = 0; j < w_; ++j) prow[j] *= inv;
    prow[e] = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == p) continue;
      double* row = &t_[i * w_];
      const double f = row[e];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < w_; ++j) row[j] -= f * prow[j];
      row[e] = 0.0;
    }
    const double f = d_[e];
    if (f != 0.0) {
      for (std::size_t j = 0; j < w_; ++j) d_[j] -= f * prow[j];
      d_[e] = 0.0;
    }
    basis_[p] = e;
  }

  // Reduced costs for cost vector c (size n_) w.r.t. the current basis.
  void price(const std::vector<double>& c) {
    for (std::size_t j = 0; j < n_; ++j) d_[j] = c[j];
    d_[n_] = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      const double cb = c[basis_[i]];
      if (cb == 0.0) continue;
      const double* row = &t_[i * w_];
      for (std::size_t j = 0; j <= n_; ++j) d_[j] -= cb * row[j];
    }
  }

 private:
  std::size_t m_, n_, w_;
  std::vector<double> t_;
  std::vector<double> d_;
  std::vector<std::size_t> basis_;
};

enum class PhaseResult { Optimal, Unbounded };

PhaseResult run_phase(Tableau& tab, const std::vector<bool>& can_enter, Pricing pricing,
                      std::size_t cap, std::size_t& iterations) {
  bool bland = pricing == Pricing::Bland;
  std::size_t degenerate_run = 0;
  auto& d = tab.reduced();
  const auto& basis = tab.basis();
  for (;;) {
    std::ptrdiff_t enter = -1;
    double best = kOptimalityTol;
    for (std::size_t j = 0; j < tab.cols(); ++j) {
      if (!can_enter[j] || d[j] <= kOptimalityTol) continue;
      if (bland) {
        enter = static_cast<std::ptrdiff_t>(j);
        break;
      }
      if (d[j] > best) {
        best = d[j];
        enter = static_cast<std::ptrdiff_t>(j);
      }
    }
    if (enter < 0) return PhaseResult::Optimal;
    const auto e = static_cast<std::size_t>(enter);

    std::ptrdiff_t leave = -1;
    double min_ratio = kInf;
    for (std::size_t i = 0; i < tab.rows(); ++i) {
      const double a = tab.at(i, e);
      if (a <= kPivotTol) continue;
      const double ratio = std::max(0.0, tab.rhs(i)) / a;
      if (leave < 0 || ratio < min_ratio - 1e-12) {
        min_ratio = ratio;
        leave = static_cast<std::ptrdiff_t>(i);
      } else if (ratio <= min_ratio + 1e-12) {
        const auto cur = static_cast<std::size_t>(leave);
        const bool take = bland ? basis[i] < basis[cur] : a > tab.at(cur, e);
        if (take) {
          min_ratio = std::min(min_ratio, ratio);
          leave = static_cast<std::ptrdiff_t>(i);
        }
      }
    }
    if (leave < 0) return PhaseResult::Unbounded;

    if (++iterations > cap) {
      throw SolverError("simplex exceeded the iteration cap of " + std::to_string(cap) +
                        " pivots");
    }
    degenerate_run = min_ratio <= 1e-12 ? degenerate_run + 1 : 0;
    if (degenerate_run > kDegenerateRunLimit) bland = true;
    tab.pivot(static_cast<std::size_t>(leave), e);
  }
}

// Solve the square system M y = r in place (partial pivoting). Returns false
// if M is numerically singular.
bool gauss_solve(std::vector<double>& M, std::vector<double>& r, std::size_t n) {
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t i = c + 1; i < n; ++i) {
      if (std::abs(M[i * n + c]) > std::abs(M[p * n + c])) p = i;
    }
    if (std::abs(M[p * n + c]) < 1e-13) return false;
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(M[p * n + j], M[c * n + j]);
      std::swap(r[p], r[c]);
    }
    const double inv = 1.0 / M[c * n + c];
    for (std::size_t i = c + 1; i < n; ++i) {
      const double f = M[i * n + c] * inv;
      if (f == 0.0) continue;
      for (std::size_t j = c; j < n; ++j) M[i * n + j] -= f * M[c * n + j];
      r[i] -= f * r[c];
    }
  }
  for (std::size_t c = n; c-- > 0;) {
    double s = r[c];
    for (std::size_t j = c + 1; j < n; ++j) s -= M[c * n + j] * r[j];
    r[c] = s / M[c * n + c];
  }
  return true;
}

}  // namespace

LinearProgram::LinearProgram(std::size_t n)
    : n_vars(n), objective(n, 0.0), lower(n, 0.0), upper(n, kInf) {}

void LinearProgram::add(std::vector<double> coeffs, Relation rel, double rhs) {
  constraints.push_back({std::move(coeffs), rel, rhs});
}

std::string to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "Optimal";
    case Status::Infeasible: return "Infeasible";
    case Status::Unbounded: return "Unbounded";
  }
  return "?";
}

void check_shape(const LinearProgram& lp) {
  if (lp.objective.size() != lp.n_vars) {
    throw InputError("objective has " + std::to_string(lp.objective.size()) +
                     " coefficients, expected " + std::to_string(lp.n_vars));
  }
  if (lp.lower.size() != lp.n_vars || lp.upper.size() != lp.n_vars) {
    throw InputError("bounds must have one entry per variable");
  }
  for (std::size_t j = 0; j < lp.n_vars; ++j) {
    if (std::isnan(lp.lower[j]) || std::isnan(lp.upper[j]) || lp.lower[j] > lp.upper[j] ||
        lp.lower[j] == kInf || lp.upper[j] == -kInf) {
      throw InputError("variable " + std::to_string(j) + " has invalid bounds");
    }
  }
  for (std::size_t i = 0; i < lp.constraints.size(); ++i) {
    if (lp.constraints[i].coeffs.size() != lp.n_vars) {
      throw InputError("constraint " + std::to_string(i) + " has " +
                       std::to_string(lp.constraints[i].coeffs.size()) +
                       " coefficients, expected " + std::to_string(lp.n_vars));
    }
    if (!std::isfinite(lp.constraints[i].rhs)) {
      throw InputError("constraint " + std::to_string(i) + " has a non-finite right-hand side");
    }
  }
}

double max_violation(const LinearProgram& lp, std::span<const double> x) {
  double worst = 0.0;
  for (const auto& c : lp.constraints) {
    double lhs = 0.0;
    for (std::size_t j = 0; j < lp.n_vars; ++j) lhs += c.coeffs[j] * x[j];
    double v = 0.0;
    switch (c.relation) {
      case Relation::LessEqual: v = lhs - c.rhs; break;
      case Relation::GreaterEqual: v = c.rhs - lhs; break;
      case Relation::Equal: v = std::abs(lhs - c.rhs); break;
    }
    worst = std::max(worst, v);
  }
  for (std::size_t j = 0; j < lp.n_vars; ++j) {
    worst = std::max(worst, lp.lower[j] - x[j]);
    worst = std::max(worst, x[j] - lp.upper[j]);
  }
  return worst;
}

Solution solve(const LinearProgram& lp, const SolverOptions& options) {
  check_shape(lp);
  const std::size_t n = lp.n_vars;
  const std::size_t cap = options.iteration_cap
                              ? options.iteration_cap
                              : 50 * (n + lp.constraints.size());

  // Substitute variables so that every tableau column is >= 0.
  std::vector<VarMap> vars(n);
  std::size_t ncols = 0;
  struct UpperRow {
    std::size_t col;
    double bound;
  };
  std::vector<UpperRow> upper_rows;
  for (std::size_t j = 0; j < n; ++j) {
    const double l = lp.lower[j], u = lp.upper[j];
    VarMap& v = vars[j];
    v.pos = ncols++;
    if (std::isfinite(l)) {
      v.offset = l;
      if (std::isfinite(u)) upper_rows.push_back({v.pos, u - l});
    } else if (std::isfinite(u)) {
      v.offset = u;
      v.sign_pos = -1.0;
    } else {
      v.neg = static_cast<std::ptrdiff_t>(ncols++);
    }
  }
  const std::size_t nstruct = ncols;

  struct Row {
    std::vector<double> a;
    Relation rel;
    double b;
  };
  std::vector<Row> rows;
  rows.reserve(lp.constraints.size() + upper_rows.size());
  for (const auto& c : lp.constraints) {
    Row r{std::vector<double>(nstruct, 0.0), c.relation, c.rhs};
    for (std::size_t j = 0; j < n; ++j) {
      const double a = c.coeffs[j];
      if (a == 0.0) continue;
      r.a[vars[j].pos] += a * vars[j].sign_pos;
      if (vars[j].neg >= 0) r.a[static_cast<std::size_t>(vars[j].neg)] -= a;
      r.b -= a * vars[j].offset;
    }
    rows.push_back(std::move(r));
  }
  for (const auto& ur : upper_rows) {
    Row r{std::vector<double>(nstruct, 0.0), Relation::LessEqual, ur.bound};
    r.a[ur.col] = 1.0;
    rows.push_back(std::move(r));
  }
  // Normalize to b >= 0; zero-rhs >= rows become <= rows so a slack can start basic.
  for (auto& r : rows) {
    const bool flip = r.b < 0.0 || (r.b == 0.0 && r.rel == Relation::GreaterEqual);
    if (!flip) continue;
    for (auto& a : r.a) a = -a;
    r.b = -r.b;
    if (r.rel == Relation::LessEqual) {
      r.rel = Relation::GreaterEqual;
    } else if (r.rel == Relation::GreaterEqual) {
      r.rel = Relation::LessEqual;
    }
  }

  const std::size_t m = rows.size();
  std::size_t nslack = 0, nart = 0;
  for (const auto& r : rows) {
    if (r.rel != Relation::Equal) ++nslack;
    if (r.rel != Relation::LessEqual) ++nart;
  }
  const std::size_t total = nstruct + nslack + nart;
  const std::size_t art_begin = nstruct + nslack;

  Tableau tab(m, total);
  {
    std::size_t s = nstruct, a = art_begin;
    for (std::size_t i = 0; i < m; ++i) {
      const auto& r = rows[i];
      for (std::size_t j = 0; j < nstruct; ++j) tab.at(i, j) = r.a[j];
      tab.rhs(i) = r.b;
      if (r.rel == Relation::LessEqual) {
        tab.at(i, s) = 1.0;
        tab.basis()[i] = s++;
      } else {
        if (r.rel == Relation::GreaterEqual) tab.at(i, s++) = -1.0;
        tab.at(i, a) = 1.0;
        tab.basis()[i] = a++;
      }
    }
  }
  const Tableau initial = tab;

  Solution sol;
  std::vector<bool> can_enter(total, true);

  if (nart > 0) {
    std::vector<double> c1(total, 0.0);
    for (std::size_t j = art_begin; j < total; ++j) c1[j] = -1.0;
    tab.price(c1);
    run_phase(tab, can_enter, options.pricing, cap, sol.iterations);
    const double infeasibility = tab.reduced()[total];  // = sum of artificials
    if (infeasibility > kFeasibilityTol) {
      sol.status = Status::Infeasible;
      return sol;
    }
    // Pivot zero-level artificials out of the basis where possible; rows
    // where that is impossible are redundant and keep their artificial at 0.
    for (std::size_t i = 0; i < m; ++i) {
      if (tab.basis()[i] < art_begin) continue;
      std::ptrdiff_t best = -1;
      double best_abs = kPivotTol;
      for (std::size_t j = 0; j < art_begin; ++j) {
        if (std::abs(tab.at(i, j)) > best_abs) {
          best_abs = std::abs(tab.at(i, j));
          best = static_cast<std::ptrdiff_t>(j);
        }
      }
      if (best >= 0) tab.pivot(i, static_cast<std::size_t>(best));
    }
    for (std::size_t j = art_begin; j < total; ++j) can_enter[j] = false;
  }

  std::vector<double> c2(total, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    c2[vars[j].pos] += lp.objective[j] * vars[j].sign_pos;
    if (vars[j].neg >= 0) c2[static_cast<std::size_t>(vars[j].neg)] -= lp.objective[j];
  }
  tab.price(c2);
  if (run_phase(tab, can_enter, options.pricing, cap, sol.iterations) ==
      PhaseResult::Unbounded) {
    sol.status = Status::Unbounded;
    return sol;
  }

  auto to_x = [&](const std::vector<double>& y) {
    std::vector<double> x(n);
    for (std::size_t j = 0; j < n; ++j) {
      x[j] = vars[j].offset + vars[j].sign_pos * y[vars[j].pos];
      if (vars[j].neg >= 0) x[j] -= y[static_cast<std::size_t>(vars[j].neg)];
    }
    return x;
  };

  std::vector<double> y(total, 0.0);
  for (std::size_t i = 0; i < m; ++i) y[tab.basis()[i]] = std::max(0.0, tab.rhs(i));
  std::vector<double> x = to_x(y);
  double viol = max_violation(lp, x);

  // Re-solve B y_B = b from the original rows to shed accumulated pivot error.
  if (m > 0) {
    std::vector<double> B(m * m), r(m);
    for (std::size_t i = 0; i < m; ++i) {
      r[i] = initial.rhs(i);
      for (std::size_t c = 0; c < m; ++c) B[i * m + c] = initial.at(i, tab.basis()[c]);
    }
    if (gauss_solve(B, r, m)) {
      std::vector<double> y2(total, 0.0);
      for (std::size_t c = 0; c < m; ++c) y2[tab.basis()[c]] = std::max(0.0, r[c]);
      std::vector<double> x2 = to_x(y2);
      const double viol2 = max_violation(lp, x2);
      if (viol2 <= viol) {
        x = std::move(x2);
        viol = viol2;
      }
    }
  }

  sol.status = Status::Optimal;
  sol.x = std::move(x);
  sol.max_violation = viol;
  sol.objective_value = 0.0;
  for (std::size_t j = 0; j < n; ++j) sol.objective_value += lp.objective[j] * sol.x[j];
  return sol;
}

}  // namespace persuasion::lp
