#include "vacone/projection.hpp"

#include <cmath>
#include <limits>

#include "vacone/linalg.hpp"

namespace vacone {

namespace {

template <typename T>
using TVec = std::vector<T>;

template <typename T>
T tdot(const Vec& a, const TVec<T>& x) {
  T s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if constexpr (std::is_same_v<T, double>) {
      s += a[i].get_d() * x[i];
    } else {
      s += a[i] * x[i];
    }
  }
  return s;
}

template <typename T>
T tval(const Rational& r) {
  if constexpr (std::is_same_v<T, double>) {
    return r.get_d();
  } else {
    return r;
  }
}

template <typename T>
std::optional<TVec<T>> solve_square(const std::vector<TVec<T>>& m, const TVec<T>& rhs) {
  if constexpr (std::is_same_v<T, double>) {
    return solve_dense(m, rhs, 1e-12);
  } else {
    if (rank(m, m.size()) < m.size()) return std::nullopt;
    return solve(m, rhs, m.size());
  }
}

template <typename T>
bool nonneg(const T& v, const T& scale) {
  if constexpr (std::is_same_v<T, double>) {
    return v >= -1e-12 * (1 + scale);
  } else {
    return v >= 0;
  }
}

template <typename T>
bool within(const T& lhs, const Rational& b, bool is_eq) {
  if constexpr (std::is_same_v<T, double>) {
    double tol = 1e-10 * (1 + std::abs(b.get_d()) + std::abs(lhs));
    return is_eq ? std::abs(lhs - b.get_d()) <= tol : lhs <= b.get_d() + tol;
  } else {
    return is_eq ? lhs == b : lhs <= b;
  }
}

template <typename T>
std::optional<TVec<T>> project_poly(const HPolyhedron& h, const TVec<T>& z) {
  const std::size_t d = h.dim;
  if (z.size() != d) throw DimensionError("projection point dimension mismatch");
  std::vector<std::size_t> eqs, les;
  // Equalities enter the active set as an independent basis; the dropped
  // ones are still checked by `feasible`.
  Mat eq_rows;
  for (std::size_t i = 0; i < h.rows(); ++i) {
    if (!h.eq[i]) {
      les.push_back(i);
      continue;
    }
    eq_rows.push_back(h.A[i]);
    if (rank(eq_rows, d) == eq_rows.size()) {
      eqs.push_back(i);
    } else {
      eq_rows.pop_back();
    }
  }
  if (les.size() > 30) throw CapacityError("projection: too many inequality rows");

  auto feasible = [&](const TVec<T>& y) {
    for (std::size_t i = 0; i < h.rows(); ++i)
      if (!within<T>(tdot<T>(h.A[i], y), h.b[i], h.eq[i])) return false;
    return true;
  };

  // Candidate active set W = eqs ∪ S with |S| = size, lexicographic order.
  const std::size_t max_size = std::min(les.size(), d);
  for (std::size_t size = 0; size <= max_size; ++size) {
    std::vector<std::size_t> pick(size);
    for (std::size_t i = 0; i < size; ++i) pick[i] = i;
    for (;;) {
      std::vector<std::size_t> w = eqs;
      for (std::size_t i : pick) w.push_back(les[i]);
      // y = z - A_W^T mu with A_W A_W^T mu = A_W z - b_W.
      const std::size_t k = w.size();
      std::vector<TVec<T>> gram(k, TVec<T>(k));
      TVec<T> rhs(k);
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
          T s = 0;
          for (std::size_t c = 0; c < d; ++c) s += tval<T>(h.A[w[i]][c] * h.A[w[j]][c]);
          gram[i][j] = s;
        }
        rhs[i] = tdot<T>(h.A[w[i]], z) - tval<T>(h.b[w[i]]);
      }
      std::optional<TVec<T>> mu = k == 0 ? std::optional<TVec<T>>(TVec<T>{}) : solve_square<T>(gram, rhs);
      if (mu) {
        TVec<T> y = z;
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t c = 0; c < d; ++c) y[c] -= (*mu)[i] * tval<T>(h.A[w[i]][c]);
        bool ok = true;
        T mscale = 0;
        if constexpr (std::is_same_v<T, double>) {
          for (double v : *mu) mscale = std::max(mscale, std::abs(v));
        }
        for (std::size_t i = eqs.size(); i < k && ok; ++i) ok = nonneg<T>((*mu)[i], mscale);
        if (ok && feasible(y)) return y;
      }
      // Next combination.
      std::size_t i = size;
      while (i > 0 && pick[i - 1] == les.size() - size + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < size; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return std::nullopt;
}

struct SmoothDerivs {
  std::vector<Polynomial> grad;
  std::vector<std::vector<Polynomial>> hess;
};

SmoothDerivs derivs(const Polynomial& g) {
  SmoothDerivs s;
  for (std::size_t i = 0; i < g.arity(); ++i) s.grad.push_back(g.differentiate(i));
  for (std::size_t i = 0; i < g.arity(); ++i) {
    std::vector<Polynomial> row;
    for (std::size_t j = 0; j < g.arity(); ++j) row.push_back(s.grad[i].differentiate(j));
    s.hess.push_back(std::move(row));
  }
  return s;
}

// argmin_y 0.5|y - z|^2 + mu g(y) by damped Newton (strongly convex).
DVec prox_step(const Polynomial& g, const SmoothDerivs& dv, const DVec& z, double mu, DVec y) {
  const std::size_t d = z.size();
  auto obj = [&](const DVec& p) {
    double s = 0;
    for (std::size_t i = 0; i < d; ++i) s += 0.5 * (p[i] - z[i]) * (p[i] - z[i]);
    return s + mu * g.eval(p);
  };
  for (int it = 0; it < 100; ++it) {
    DVec grad(d);
    std::vector<DVec> hess(d, DVec(d));
    for (std::size_t i = 0; i < d; ++i) {
      grad[i] = y[i] - z[i] + mu * dv.grad[i].eval(y);
      for (std::size_t j = 0; j < d; ++j) hess[i][j] = (i == j ? 1.0 : 0.0) + mu * dv.hess[i][j].eval(y);
    }
    if (norm2(grad) <= 1e-15 * (1 + norm2(z))) break;
    DVec neg(d);
    for (std::size_t i = 0; i < d; ++i) neg[i] = -grad[i];
    auto step = solve_dense(hess, neg, 1e-14);
    if (!step) step = neg;
    double f0 = obj(y), t = 1;
    DVec cand(d);
    for (int ls = 0; ls < 60; ++ls, t *= 0.5) {
      for (std::size_t i = 0; i < d; ++i) cand[i] = y[i] + t * (*step)[i];
      if (obj(cand) <= f0 + 1e-4 * t * dot(grad, *step)) break;
    }
    if (cand == y) break;
    y = cand;
  }
  return y;
}

DVec project_single(const Polynomial& g, const DVec& z) {
  if (g.eval(z) <= 0) return z;
  SmoothDerivs dv = derivs(g);
  double lo = 0, hi = 1;
  DVec y = prox_step(g, dv, z, hi, z);
  for (int it = 0; it < 200 && g.eval(y) > 0; ++it) {
    lo = hi;
    hi *= 2;
    y = prox_step(g, dv, z, hi, y);
  }
  DVec best = y;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    DVec ym = prox_step(g, dv, z, mid, best);
    if (g.eval(ym) > 0) {
      lo = mid;
    } else {
      hi = mid;
      best = ym;
    }
  }
  return best;
}

// Nearest feasible KKT point of {g_j <= 0} for nonconvex g: for every active
// subset, Newton on the Lagrange system from several starts.
DVec project_nonconvex(const SmoothConvexBlock& b, const DVec& z) {
  const std::size_t d = z.size(), m = b.g.size();
  if (b.contains(z, 0.0)) return z;
  std::vector<SmoothDerivs> dv;
  for (const auto& g : b.g) dv.push_back(derivs(g));
  auto feasible = [&](const DVec& y) {
    for (const auto& g : b.g)
      if (g.eval(y) > 1e-11 * (1 + norm2(y))) return false;
    return true;
  };
  double scale = std::max(1e-3, 0.5 * norm2(z));
  std::vector<DVec> starts{z};
  for (std::size_t i = 0; i < d; ++i)
    for (double sgn : {1.0, -1.0}) {
      DVec s = z;
      s[i] += sgn * scale;
      starts.push_back(s);
    }
  std::optional<DVec> best;
  double best_dist = std::numeric_limits<double>::infinity();
  const std::size_t max_size = std::min(d, m);
  for (std::size_t mask = 1; mask < (std::size_t{1} << m); ++mask) {
    std::vector<std::size_t> act;
    for (std::size_t j = 0; j < m; ++j)
      if (mask >> j & 1) act.push_back(j);
    if (act.size() > max_size) continue;
    const std::size_t n = d + act.size();
    for (const DVec& start : starts) {
      DVec u(n, 0.0);
      std::copy(start.begin(), start.end(), u.begin());
      auto residual = [&](const DVec& w) {
        DVec f(n, 0.0);
        DVec y(w.begin(), w.begin() + d);
        for (std::size_t i = 0; i < d; ++i) f[i] = y[i] - z[i];
        for (std::size_t a = 0; a < act.size(); ++a) {
          for (std::size_t i = 0; i < d; ++i) f[i] += w[d + a] * dv[act[a]].grad[i].eval(y);
          f[d + a] = b.g[act[a]].eval(y);
        }
        return f;
      };
      DVec f = residual(u);
      for (int it = 0; it < 60 && norm2(f) > 1e-14; ++it) {
        DVec y(u.begin(), u.begin() + d);
        std::vector<DVec> jac(n, DVec(n, 0.0));
        for (std::size_t i = 0; i < d; ++i) {
          jac[i][i] = 1;
          for (std::size_t a = 0; a < act.size(); ++a) {
            for (std::size_t c = 0; c < d; ++c) jac[i][c] += u[d + a] * dv[act[a]].hess[i][c].eval(y);
            jac[i][d + a] = dv[act[a]].grad[i].eval(y);
            jac[d + a][i] = dv[act[a]].grad[i].eval(y);
          }
        }
        DVec neg(n);
        for (std::size_t i = 0; i < n; ++i) neg[i] = -f[i];
        auto step = solve_dense(jac, neg, 1e-14);
        if (!step) break;
        double t = 1, f0 = norm2(f);
        DVec cand(n), fc;
        for (int ls = 0; ls < 40; ++ls, t *= 0.5) {
          for (std::size_t i = 0; i < n; ++i) cand[i] = u[i] + t * (*step)[i];
          fc = residual(cand);
          if (norm2(fc) < f0) break;
        }
        u = cand;
        f = fc;
      }
      DVec y(u.begin(), u.begin() + d);
      if (norm2(f) > 1e-10 * (1 + norm2(z)) || !feasible(y)) continue;
      DVec diff(d);
      for (std::size_t i = 0; i < d; ++i) diff[i] = z[i] - y[i];
      if (norm2(diff) < best_dist) {
        best_dist = norm2(diff);
        best = y;
      }
    }
  }
  if (!best) throw Error("projection: no feasible point found on a nonconvex block");
  return *best;
}

}  // namespace

std::optional<Vec> project_polyhedron(const HPolyhedron& h, const Vec& z) { return project_poly<Rational>(h, z); }
std::optional<DVec> project_polyhedron(const HPolyhedron& h, const DVec& z) { return project_poly<double>(h, z); }

DVec project_smooth(const SmoothConvexBlock& b, const DVec& z) {
  if (!b.convex) return project_nonconvex(b, z);
  if (b.g.size() == 1) return project_single(b.g.front(), z);
  // Dykstra's alternating projections onto the single-constraint sets.
  const std::size_t m = b.g.size(), d = z.size();
  DVec x = z;
  std::vector<DVec> inc(m, DVec(d, 0.0));
  for (int sweep = 0; sweep < 2000; ++sweep) {
    DVec prev = x;
    for (std::size_t j = 0; j < m; ++j) {
      DVec shifted(d);
      for (std::size_t i = 0; i < d; ++i) shifted[i] = x[i] + inc[j][i];
      DVec p = project_single(b.g[j], shifted);
      for (std::size_t i = 0; i < d; ++i) inc[j][i] = shifted[i] - p[i];
      x = p;
    }
    double delta = 0;
    for (std::size_t i = 0; i < d; ++i) delta = std::max(delta, std::abs(x[i] - prev[i]));
    if (delta <= 1e-15 * (1 + norm2(x))) break;
  }
  return x;
}

Projection project(const PolyUnion& s, const DVec& z) {
  if (z.size() != s.dim) throw DimensionError("projection point dimension mismatch");
  Projection best;
  best.dist = std::numeric_limits<double>::infinity();
  bool found = false;
  for (std::size_t i = 0; i < s.blocks.size(); ++i) {
    std::optional<DVec> p;
    if (const auto* h = std::get_if<HPolyhedron>(&s.blocks[i])) {
      p = project_polyhedron(*h, z);
    } else {
      p = project_smooth(std::get<SmoothConvexBlock>(s.blocks[i]), z);
    }
    if (!p) {
      best.empty_blocks.push_back(i);
      continue;
    }
    DVec diff(z.size());
    for (std::size_t c = 0; c < z.size(); ++c) diff[c] = z[c] - (*p)[c];
    double dist = norm2(diff);
    if (!found || dist < best.dist * (1 - 1e-12) - 1e-300) {
      best.nearest = *p;
      best.dist = dist;
      best.branch = i;
      found = true;
    }
  }
  if (!found) throw Error("projection: every block is empty");
  return best;
}

ExactProjection project_exact(const PolyUnion& s, const Vec& z) {
  if (z.size() != s.dim) throw DimensionError("projection point dimension mismatch");
  std::optional<ExactProjection> best;
  for (std::size_t i = 0; i < s.blocks.size(); ++i) {
    const auto* h = std::get_if<HPolyhedron>(&s.blocks[i]);
    if (!h) throw Error("project_exact: smooth blocks are not supported");
    auto p = project_polyhedron(*h, z);
    if (!p) continue;
    Vec diff = sub(z, *p);
    Rational d2 = dot(diff, diff);
    if (!best || d2 < best->dist2) best = ExactProjection{*p, d2, i};
  }
  if (!best) throw Error("projection: every block is empty");
  return *best;
}

Projection project(const PolyUnion& s, const Vec& z) {
  if (!s.purely_polyhedral()) return project(s, to_double(z));
  Projection out;
  std::optional<ExactProjection> best;
  for (std::size_t i = 0; i < s.blocks.size(); ++i) {
    auto p = project_polyhedron(s.poly(i), z);
    if (!p) {
      out.empty_blocks.push_back(i);
      continue;
    }
    Vec diff = sub(z, *p);
    Rational d2 = dot(diff, diff);
    if (!best || d2 < best->dist2) best = ExactProjection{*p, d2, i};
  }
  if (!best) throw Error("projection: every block is empty");
  out.nearest = to_double(best->nearest);
  out.dist = std::sqrt(best->dist2.get_d());
  out.branch = best->branch;
  return out;
}

double distance(const PolyUnion& s, const DVec& z) { return project(s, z).dist; }

}  // namespace vacone
