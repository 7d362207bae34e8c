#include "vacone/lp.hpp"

namespace vacone {

void LpProblem::add_row(Vec a, Rational rhs, bool equality) {
  if (a.size() != num_vars) throw DimensionError("LP row has wrong length");
  A.push_back(std::move(a));
  b.push_back(std::move(rhs));
  eq.push_back(equality);
}

std::size_t LpProblem::add_var(bool is_nonneg) {
  for (auto& row : A) row.push_back(0);
  if (!objective.empty()) objective.push_back(0);
  nonneg.push_back(is_nonneg);
  return num_vars++;
}

bool satisfies(const LpProblem& p, const Vec& x) {
  if (x.size() != p.num_vars) return false;
  for (std::size_t j = 0; j < p.num_vars; ++j)
    if (p.nonneg[j] && x[j] < 0) return false;
  for (std::size_t i = 0; i < p.A.size(); ++i) {
    Rational lhs = dot(p.A[i], x);
    if (p.eq[i] ? lhs != p.b[i] : lhs > p.b[i]) return false;
  }
  return true;
}

namespace {

// Tableau rows hold the constraint coefficients followed by the right-hand
// side. `cost` holds reduced costs of a maximization in the same layout; the
// last entry is minus the current objective value.
class Tableau {
 public:
  Tableau(std::size_t cols) : cols_(cols) {}

  std::size_t cols_;
  std::vector<Vec> rows;
  std::vector<std::size_t> basis;
  Vec cost;

  void pivot(std::size_t r, std::size_t c) {
    Vec& pr = rows[r];
    Rational inv = 1 / pr[c];
    for (auto& v : pr)
      if (v != 0) v *= inv;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] == 0) continue;
      Rational f = rows[i][c];
      Vec& row = rows[i];
      for (std::size_t j = 0; j <= cols_; ++j)
        if (pr[j] != 0) row[j] -= f * pr[j];
    }
    if (cost[c] != 0) {
      Rational f = cost[c];
      for (std::size_t j = 0; j <= cols_; ++j)
        if (pr[j] != 0) cost[j] -= f * pr[j];
    }
    basis[r] = c;
  }

  void price_out() {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      std::size_t c = basis[i];
      if (cost[c] == 0) continue;
      Rational f = cost[c];
      for (std::size_t j = 0; j <= cols_; ++j)
        if (rows[i][j] != 0) cost[j] -= f * rows[i][j];
    }
  }

  // Returns the unbounded entering column, or cols_ at optimality.
  std::size_t run(const std::vector<bool>& allowed) {
    for (;;) {
      std::size_t enter = cols_;
      for (std::size_t j = 0; j < cols_; ++j)
        if (allowed[j] && cost[j] > 0) {
          enter = j;
          break;
        }
      if (enter == cols_) return cols_;
      std::size_t leave = rows.size();
      Rational best;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i][enter] <= 0) continue;
        Rational ratio = rows[i][cols_] / rows[i][enter];
        if (leave == rows.size() || ratio < best || (ratio == best && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == rows.size()) return enter;
      pivot(leave, enter);
    }
  }
};

}  // namespace

LpResult solve_lp(const LpProblem& p) {
  const std::size_t n = p.num_vars;
  const std::size_t m = p.A.size();
  if (p.b.size() != m || p.eq.size() != m || p.nonneg.size() != n)
    throw DimensionError("inconsistent LP dimensions");
  if (!p.objective.empty() && p.objective.size() != n) throw DimensionError("objective has wrong length");

  // Column layout: per structural variable one (nonneg) or two (u - v)
  // columns, then one slack per inequality, then one artificial per row.
  std::vector<std::size_t> pos_col(n), neg_col(n, SIZE_MAX);
  std::size_t cols = 0;
  for (std::size_t j = 0; j < n; ++j) {
    pos_col[j] = cols++;
    if (!p.nonneg[j]) neg_col[j] = cols++;
  }
  std::vector<std::size_t> slack_col(m, SIZE_MAX);
  for (std::size_t i = 0; i < m; ++i)
    if (!p.eq[i]) slack_col[i] = cols++;
  const std::size_t first_art = cols;
  cols += m;

  Tableau t(cols);
  t.rows.assign(m, Vec(cols + 1, Rational(0)));
  t.basis.assign(m, 0);
  for (std::size_t i = 0; i < m; ++i) {
    Rational sign = p.b[i] < 0 ? -1 : 1;
    Vec& row = t.rows[i];
    for (std::size_t j = 0; j < n; ++j) {
      if (p.A[i][j] == 0) continue;
      row[pos_col[j]] = sign * p.A[i][j];
      if (neg_col[j] != SIZE_MAX) row[neg_col[j]] = -sign * p.A[i][j];
    }
    if (slack_col[i] != SIZE_MAX) row[slack_col[i]] = sign;
    row[first_art + i] = 1;
    row[cols] = sign * p.b[i];
    t.basis[i] = first_art + i;
  }

  // Phase I: maximize -sum(artificials).
  t.cost.assign(cols + 1, Rational(0));
  for (std::size_t i = 0; i < m; ++i) t.cost[first_art + i] = -1;
  t.price_out();
  std::vector<bool> allowed(cols, true);
  t.run(allowed);
  if (t.cost[cols] != 0) return {};

  // Drive zero-level artificials out of the basis; drop redundant rows.
  for (std::size_t i = 0; i < t.rows.size();) {
    if (t.basis[i] < first_art) {
      ++i;
      continue;
    }
    std::size_t c = first_art;
    for (std::size_t j = 0; j < first_art; ++j)
      if (t.rows[i][j] != 0) {
        c = j;
        break;
      }
    if (c == first_art) {
      t.rows.erase(t.rows.begin() + static_cast<std::ptrdiff_t>(i));
      t.basis.erase(t.basis.begin() + static_cast<std::ptrdiff_t>(i));
      continue;
    }
    t.pivot(i, c);
    ++i;
  }
  for (std::size_t j = first_art; j < cols; ++j) allowed[j] = false;

  auto extract = [&](const std::vector<Rational>& colvals) {
    Vec x(n, Rational(0));
    for (std::size_t j = 0; j < n; ++j) {
      x[j] = colvals[pos_col[j]];
      if (neg_col[j] != SIZE_MAX) x[j] -= colvals[neg_col[j]];
    }
    return x;
  };
  auto current_point = [&]() {
    std::vector<Rational> vals(cols, Rational(0));
    for (std::size_t i = 0; i < t.rows.size(); ++i) vals[t.basis[i]] = t.rows[i][cols];
    return extract(vals);
  };

  LpResult res;
  if (p.objective.empty()) {
    res.status = LpStatus::Optimal;
    res.point = current_point();
    res.value = 0;
    return res;
  }

  // Phase II.
  t.cost.assign(cols + 1, Rational(0));
  for (std::size_t j = 0; j < n; ++j) {
    t.cost[pos_col[j]] = p.objective[j];
    if (neg_col[j] != SIZE_MAX) t.cost[neg_col[j]] = -p.objective[j];
  }
  t.price_out();
  std::size_t enter = t.run(allowed);
  res.point = current_point();
  if (enter != cols) {
    std::vector<Rational> dir(cols, Rational(0));
    dir[enter] = 1;
    for (std::size_t i = 0; i < t.rows.size(); ++i) dir[t.basis[i]] = -t.rows[i][enter];
    res.status = LpStatus::Unbounded;
    res.ray = extract(dir);
    return res;
  }
  res.status = LpStatus::Optimal;
  res.value = dot(p.objective, res.point);
  return res;
}

}  // namespace vacone
