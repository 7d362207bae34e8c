#pragma once

#include <vector>

#include "vacone/rational.hpp"

namespace vacone {

enum class LpStatus { Infeasible, Optimal, Unbounded };

/// maximize objective·x subject to rows a·x <= b (or = b when flagged).
/// Variables are free unless `nonneg` marks them; an empty objective makes
/// the problem a pure feasibility query.
struct LpProblem {
  std::size_t num_vars = 0;
  Mat A;
  Vec b;
  std::vector<bool> eq;
  std::vector<bool> nonneg;
  Vec objective;

  explicit LpProblem(std::size_t n = 0) : num_vars(n), nonneg(n, false) {}
  void add_row(Vec a, Rational rhs, bool equality = false);
  void add_le(Vec a, Rational rhs) { add_row(std::move(a), std::move(rhs), false); }
  void add_eq(Vec a, Rational rhs) { add_row(std::move(a), std::move(rhs), true); }
  /// Appends a free (or nonnegative) variable; existing rows get a zero column.
  std::size_t add_var(bool is_nonneg = false);
};

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Vec point;      // Optimal or Unbounded: a feasible point
  Rational value;  // Optimal: objective value
  Vec ray;        // Unbounded: recession direction with objective·ray > 0
};

/// Dense two-phase tableau simplex over the rationals with Bland's rule.
LpResult solve_lp(const LpProblem& p);

/// Exact re-substitution check of a point against every row and sign flag.
bool satisfies(const LpProblem& p, const Vec& x);

}  // namespace vacone
