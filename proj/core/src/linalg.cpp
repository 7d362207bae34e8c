#include "vacone/linalg.hpp"

#include <cmath>

namespace vacone {

Rref rref(Mat m, std::size_t cols) {
  Rref out;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t piv = r;
    while (piv < m.size() && m[piv][c] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[piv], m[r]);
    Rational inv = 1 / m[r][c];
    for (std::size_t j = c; j < cols; ++j) m[r][j] *= inv;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rational f = m[i][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    out.pivots.push_back(c);
    ++r;
  }
  m.resize(r);
  out.rows = std::move(m);
  return out;
}

std::size_t rank(const Mat& m, std::size_t cols) { return rref(m, cols).pivots.size(); }

Mat null_space(const Mat& m, std::size_t cols) {
  Rref r = rref(m, cols);
  std::vector<bool> is_pivot(cols, false);
  for (auto p : r.pivots) is_pivot[p] = true;
  Mat basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    Vec v(cols, Rational(0));
    v[f] = 1;
    for (std::size_t i = 0; i < r.pivots.size(); ++i) v[r.pivots[i]] = -r.rows[i][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

Mat span_basis(const Mat& vectors, std::size_t dim) { return rref(vectors, dim).rows; }

std::optional<Vec> solve(const Mat& m, const Vec& rhs, std::size_t cols) {
  Mat aug = m;
  for (std::size_t i = 0; i < aug.size(); ++i) aug[i].push_back(rhs[i]);
  Rref r = rref(aug, cols + 1);
  Vec x(cols, Rational(0));
  for (std::size_t i = 0; i < r.pivots.size(); ++i) {
    if (r.pivots[i] == cols) return std::nullopt;
    x[r.pivots[i]] = r.rows[i][cols];
  }
  return x;
}

std::optional<DVec> solve_dense(std::vector<DVec> a, DVec b, double singular_tol) {
  const std::size_t n = b.size();
  double scale = 0;
  for (const auto& row : a)
    for (double v : row) scale = std::max(scale, std::abs(v));
  if (scale == 0) return n == 0 ? std::optional<DVec>(DVec{}) : std::nullopt;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t i = c + 1; i < n; ++i)
      if (std::abs(a[i][c]) > std::abs(a[piv][c])) piv = i;
    if (std::abs(a[piv][c]) <= singular_tol * scale) return std::nullopt;
    std::swap(a[piv], a[c]);
    std::swap(b[piv], b[c]);
    for (std::size_t i = c + 1; i < n; ++i) {
      double f = a[i][c] / a[c][c];
      if (f == 0) continue;
      for (std::size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
      b[i] -= f * b[c];
    }
  }
  DVec x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a[i][j] * x[j];
    x[i] = s / a[i][i];
  }
  return x;
}

}  // namespace vacone
