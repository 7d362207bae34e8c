#include "vacone/penalty.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "vacone/lp.hpp"
#include "vacone/projection.hpp"

namespace vacone {

double PenaltyConfig::inner_tol(double k) const {
  return std::max(tol_floor, std::min(tol_base / k, tol_cap));
}

std::vector<double> PenaltyConfig::schedule_up_to(double kmax) {
  if (!(kmax >= 1)) throw Error("kmax must be at least 1");
  std::vector<double> out;
  for (double k = 1; k <= kmax * (1 + 1e-12); k *= 10) out.push_back(k);
  if (out.back() < kmax * (1 - 1e-12)) out.push_back(kmax);
  return out;
}

namespace {

DVec axpy(const DVec& x, double a, const DVec& d) {
  DVec out(x);
  for (std::size_t i = 0; i < x.size(); ++i) out[i] += a * d[i];
  return out;
}

DVec diff(const DVec& a, const DVec& b) { return axpy(a, -1.0, b); }

DVec jt_times(const std::vector<DVec>& J, const DVec& v, std::size_t n) {
  DVec out(n, 0.0);
  for (std::size_t r = 0; r < J.size(); ++r)
    for (std::size_t c = 0; c < n; ++c) out[c] += J[r][c] * v[r];
  return out;
}

bool in_ball(const DVec& x, const DVec& center, double radius) { return norm2(diff(x, center)) <= radius; }

struct Run {
  DVec x;
  double value = 0;
  double stat = 0;
  std::size_t iters = 0;
  bool converged = false;
  std::string note;
};

Run bfgs(const ProblemInstance& p, double k, const DVec& x_ref, DVec x, double tau, const PenaltyConfig& cfg) {
  const std::size_t n = x.size();
  Run run;
  PenaltyEval e = penalty_objective(p, k, x_ref, x);
  std::vector<DVec> H(n, DVec(n, 0.0));
  auto reset = [&] {
    for (std::size_t i = 0; i < n; ++i) std::fill(H[i].begin(), H[i].end(), 0.0), H[i][i] = 1.0;
  };
  reset();
  bool fresh = true;
  std::size_t it = 0;
  for (; it < cfg.max_iter; ++it) {
    const DVec& g = e.gradient;
    double gn = norm2(g);
    if (gn <= tau) {
      run.converged = true;
      break;
    }
    DVec d(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i] -= H[i][j] * g[j];
    double slope = dot(g, d);
    if (!(slope < 0)) {
      reset();
      fresh = true;
      d = axpy(DVec(n, 0.0), -1.0, g);
      slope = -gn * gn;
    }
    double alpha = 1.0;
    bool accepted = false;
    PenaltyEval en;
    DVec xn;
    while (alpha > 1e-20) {
      xn = axpy(x, alpha, d);
      if (!in_ball(xn, x_ref, cfg.trust_radius)) {
        alpha /= 2;
        continue;
      }
      en = penalty_objective(p, k, x_ref, xn);
      if (en.value <= e.value + 1e-4 * alpha * slope) {
        accepted = true;
        break;
      }
      // At the rounding level of θ, accept steps that still shrink ∇θ.
      if (std::abs(en.value - e.value) <= 1e-14 * (1 + std::abs(e.value)) && norm2(en.gradient) < gn) {
        accepted = true;
        break;
      }
      alpha /= 2;
    }
    if (!accepted) {
      if (fresh) {
        run.note = "line search stalled";
        break;
      }
      reset();
      fresh = true;
      continue;
    }
    DVec s = diff(xn, x), yv = diff(en.gradient, g);
    double sy = dot(s, yv);
    if (sy > 1e-12 * norm2(s) * norm2(yv)) {
      if (fresh) {
        double sc = sy / dot(yv, yv);
        for (std::size_t i = 0; i < n; ++i) std::fill(H[i].begin(), H[i].end(), 0.0), H[i][i] = sc;
        fresh = false;
      }
      DVec Hy(n, 0.0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) Hy[i] += H[i][j] * yv[j];
      double yHy = dot(yv, Hy);
      double rho = 1.0 / sy;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          H[i][j] += (1 + rho * yHy) * rho * s[i] * s[j] - rho * (Hy[i] * s[j] + s[i] * Hy[j]);
    }
    x = xn;
    e = en;
    if (p.f.is_piecewise() && p.f.boundary_distance(x) < 1e-12) {
      double en2 = norm2(e.gradient);
      if (en2 > 0) {
        x = axpy(x, -1e-9 / en2, e.gradient);
        e = penalty_objective(p, k, x_ref, x);
      }
    }
  }
  run.x = x;
  run.value = e.value;
  run.stat = norm2(e.gradient);
  run.iters = it;
  if (!run.converged && run.note.empty()) run.note = "iteration limit";
  return run;
}

// Q(k): projected gradient with Barzilai-Borwein steps and Armijo backtracking.
Run projected_gradient(const ProblemInstance& p, double k, const DVec& x_ref, DVec x, double tau,
                       const PenaltyConfig& cfg) {
  Run run;
  x = project(*p.C, x).nearest;
  PenaltyEval e = penalty_objective(p, k, x_ref, x, false);
  double alpha = 1.0 / (1.0 + k);
  std::size_t it = 0;
  for (; it < cfg.max_iter; ++it) {
    DVec pg = diff(x, project(*p.C, diff(x, e.gradient)).nearest);
    double st = norm2(pg);
    if (st <= tau) {
      run.converged = true;
      break;
    }
    bool accepted = false;
    DVec xn;
    PenaltyEval en;
    double a = alpha;
    while (a > 1e-20) {
      xn = project(*p.C, axpy(x, -a, e.gradient)).nearest;
      if (in_ball(xn, x_ref, cfg.trust_radius)) {
        en = penalty_objective(p, k, x_ref, xn, false);
        if (en.value <= e.value + 1e-4 * dot(e.gradient, diff(xn, x)) ||
            (std::abs(en.value - e.value) <= 1e-14 * (1 + std::abs(e.value)) && norm2(diff(xn, x)) > 0)) {
          accepted = true;
          break;
        }
      }
      a /= 2;
    }
    if (!accepted) {
      run.note = "line search stalled";
      break;
    }
    DVec s = diff(xn, x), yv = diff(en.gradient, e.gradient);
    double sy = dot(s, yv);
    alpha = sy > 0 ? std::clamp(dot(s, s) / sy, 1e-12, 1e6) : std::min(2 * a, 1.0);
    x = xn;
    e = en;
  }
  run.x = x;
  run.value = e.value;
  run.stat = norm2(diff(x, project(*p.C, diff(x, e.gradient)).nearest));
  run.iters = it;
  if (!run.converged && run.note.empty()) run.note = "iteration limit";
  return run;
}

}  // namespace

PenaltyEval penalty_objective(const ProblemInstance& p, double k, const DVec& x_ref, const DVec& x, bool include_C) {
  const std::size_t n = p.n();
  if (x.size() != n || x_ref.size() != n) throw DimensionError("penalty point dimension mismatch");
  PenaltyEval out;
  DVec gx = p.G.eval(x);
  Projection pk = project(p.K, gx);
  if (pk.nearest.empty()) throw Error("projection onto K failed");
  DVec yk = diff(gx, pk.nearest);
  out.proj_K = pk.nearest;
  out.k_branch = pk.branch;
  out.value = p.f.value(x) + 0.5 * k * dot(yk, yk);
  out.gradient = p.f.gradient(x);
  DVec jt = jt_times(p.G.jacobian(x), yk, n);
  for (std::size_t i = 0; i < n; ++i) out.gradient[i] += k * jt[i];
  if (include_C && p.has_C()) {
    Projection pc = project(*p.C, x);
    if (pc.nearest.empty()) throw Error("projection onto C failed");
    DVec yc = diff(x, pc.nearest);
    out.proj_C = pc.nearest;
    out.c_branch = pc.branch;
    out.value += 0.5 * k * dot(yc, yc);
    for (std::size_t i = 0; i < n; ++i) out.gradient[i] += k * yc[i];
  }
  DVec dx = diff(x, x_ref);
  out.value += 0.5 * dot(dx, dx);
  for (std::size_t i = 0; i < n; ++i) out.gradient[i] += dx[i];
  return out;
}

SubproblemResult solve_subproblem(const ProblemInstance& p, double k, const DVec& x_ref, const DVec& x0, double tau,
                                  const PenaltyConfig& cfg) {
  if (!in_ball(x0, x_ref, cfg.trust_radius)) throw DomainError("start point outside the trust radius");
  std::vector<DVec> starts{x0};
  auto add_start = [&](const DVec& s) {
    if (std::find(starts.begin(), starts.end(), s) == starts.end()) starts.push_back(s);
  };
  add_start(x_ref);
  for (std::size_t i = 0, added = 0; i < x_ref.size() && added < cfg.multistart; ++i) {
    for (double sgn : {1.0, -1.0}) {
      if (added >= cfg.multistart) break;
      DVec s = x_ref;
      s[i] += sgn * 1e-2;
      add_start(s);
      ++added;
    }
  }
  const bool dec = cfg.decoupled && p.has_C();
  std::optional<Run> best;
  for (const auto& s : starts) {
    Run r = dec ? projected_gradient(p, k, x_ref, s, tau, cfg) : bfgs(p, k, x_ref, s, tau, cfg);
    bool better = !best || (r.converged && !best->converged) ||
                  (r.converged == best->converged &&
                   (r.converged ? r.value < best->value - 1e-12 * (1 + std::abs(best->value)) : r.stat < best->stat));
    if (better) best = std::move(r);
  }
  SubproblemResult out;
  out.x = best->x;
  out.value = best->value;
  out.stationarity = best->stat;
  out.iterations = best->iters;
  out.converged = best->converged;
  out.note = best->note;
  return out;
}

bool verify_normal(const PolyUnion& s, std::size_t branch, const DVec& pi, const DVec& lambda) {
  Vec lam;
  for (double v : lambda) lam.push_back(from_double(v));
  if (is_zero(lam)) return true;
  if (branch >= s.blocks.size()) return false;
  Mat cols;
  std::vector<bool> free_col;
  if (const auto* h = std::get_if<HPolyhedron>(&s.blocks[branch])) {
    DVec d;
    for (std::size_t r = 0; r < h->rows(); ++r) {
      double ax = 0;
      for (std::size_t i = 0; i < pi.size(); ++i) ax += to_double(h->A[r][i]) * pi[i];
      double b = to_double(h->b[r]);
      if (h->eq[r] || std::abs(ax - b) <= 1e-9 * (1 + std::abs(b))) {
        cols.push_back(h->A[r]);
        free_col.push_back(h->eq[r]);
      }
    }
  } else {
    const auto& b = std::get<SmoothConvexBlock>(s.blocks[branch]);
    for (const auto& g : b.g) {
      if (std::abs(g.eval(pi)) > 1e-7) continue;
      Vec grad;
      for (std::size_t i = 0; i < pi.size(); ++i) grad.push_back(from_double(g.differentiate(i).eval(pi)));
      cols.push_back(grad);
      free_col.push_back(false);
    }
  }
  const std::size_t m = cols.size(), d = lam.size();
  LpProblem lp(m + 2 * d);
  for (std::size_t c = 0; c < m; ++c) lp.nonneg[c] = !free_col[c];
  for (std::size_t i = 0; i < 2 * d; ++i) lp.nonneg[m + i] = true;
  lp.objective.assign(m + 2 * d, Rational(0));
  for (std::size_t i = 0; i < 2 * d; ++i) lp.objective[m + i] = -1;
  for (std::size_t r = 0; r < d; ++r) {
    Vec row(m + 2 * d, Rational(0));
    for (std::size_t c = 0; c < m; ++c) row[c] = cols[c][r];
    row[m + r] = 1;
    row[m + d + r] = -1;
    lp.add_eq(row, lam[r]);
  }
  LpResult res = solve_lp(lp);
  if (res.status != LpStatus::Optimal) return false;
  return -res.value <= Rational(1, 100000000) * (1 + norm1(lam));
}

AMTrace am_trace(const ProblemInstance& p, const Vec& xbar, const PenaltyConfig& cfg) {
  if (!p.feasible(xbar)) throw DomainError("reference point " + to_string(xbar) + " is not feasible");
  for (std::size_t i = 1; i < cfg.ks.size(); ++i)
    if (!(cfg.ks[i] > cfg.ks[i - 1])) throw Error("penalty schedule must be strictly increasing");
  const std::size_t n = p.n();
  const bool dec = cfg.decoupled && p.has_C();
  AMTrace trace;
  trace.decoupled = dec;
  DVec xr = to_double(xbar), x = xr;
  for (double k : cfg.ks) {
    double tau = cfg.inner_tol(k);
    SubproblemResult sr = solve_subproblem(p, k, xr, x, tau, cfg);
    x = sr.x;
    PenaltyEval e = penalty_objective(p, k, xr, x, !dec);
    TraceRecord rec;
    rec.k = k;
    rec.x = x;
    rec.y = diff(p.G.eval(x), e.proj_K);
    rec.lambda = rec.y;
    for (auto& v : rec.lambda) v *= k;
    rec.k_branch = e.k_branch;
    DVec pc;
    if (dec) {
      DVec z = diff(x, e.gradient);
      Projection pz = project(*p.C, z);
      pc = pz.nearest;
      rec.nu = diff(z, pc);
      rec.c_branch = pz.branch;
    } else if (p.has_C()) {
      pc = e.proj_C;
      rec.nu = diff(x, pc);
      for (auto& v : rec.nu) v *= k;
      rec.c_branch = e.c_branch;
    } else {
      rec.nu.assign(n, 0.0);
    }
    rec.eps = diff(xr, x);
    DVec image = p.f.gradient(x);
    DVec jt = jt_times(p.G.jacobian(x), rec.lambda, n);
    for (std::size_t i = 0; i < n; ++i) image[i] += jt[i] + rec.nu[i];
    rec.residual = norm2(diff(rec.eps, image));
    rec.inner_tol = tau;
    rec.normal_verified = verify_normal(p.K, rec.k_branch, e.proj_K, rec.lambda) &&
                          (!p.has_C() || verify_normal(*p.C, rec.c_branch, pc, rec.nu));
    trace.records.push_back(std::move(rec));
    if (!sr.converged) {
      std::ostringstream os;
      os << "truncated at k=" << k << ": " << sr.note << " (stationarity " << sr.stationarity << ")";
      trace.status = os.str();
      break;
    }
  }
  return trace;
}

std::string trace_csv(const AMTrace& t) {
  std::ostringstream os;
  os << std::setprecision(17);
  const std::size_t n = t.records.empty() ? 0 : t.records.front().x.size();
  os << "k";
  for (std::size_t i = 1; i <= n; ++i) os << ",x" << i;
  os << ",y_norm,lambda_norm,eps_norm,branch\n";
  for (const auto& r : t.records) {
    os << r.k;
    for (double v : r.x) os << "," << v;
    os << "," << norm2(r.y) << "," << norm2(r.lambda) << "," << norm2(r.eps) << "," << r.k_branch;
    if (!r.nu.empty() && t.decoupled) os << ":" << r.c_branch;
    os << "\n";
  }
  return os.str();
}

}  // namespace vacone
