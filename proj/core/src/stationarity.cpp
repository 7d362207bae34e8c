#include "vacone/stationarity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "vacone/linalg.hpp"
#include "vacone/lp.hpp"
#include "vacone/projection.hpp"

namespace vacone {

std::string to_string(Status s) {
  switch (s) {
    case Status::Proved: return "Proved";
    case Status::Refuted: return "Refuted";
    default: return "Unknown";
  }
}

std::string to_string(TraceClass c) {
  switch (c) {
    case TraceClass::MLimit: return "MLimit";
    case TraceClass::Abnormal: return "Abnormal";
    default: return "Inconclusive";
  }
}

const Vec* Verdict::find(const std::string& name) const {
  for (const auto& e : evidence)
    if (e.name == name) return &e.value;
  return nullptr;
}

Verdict Verdict::make(Status s, std::string method, std::string detail) {
  Verdict v;
  v.status = s;
  v.method = std::move(method);
  v.detail = std::move(detail);
  return v;
}

namespace {

void require_feasible(const ProblemInstance& p, const Vec& xbar) {
  if (!p.feasible(xbar)) throw DomainError("reference point " + to_string(xbar) + " is not feasible");
}

ConeUnion nc_at(const ProblemInstance& p, const Vec& x) {
  if (!p.has_C()) return ConeUnion::single(GenCone::zero(p.n()));
  return normal_cone(*p.C, x);
}

// Solves Σ w_c col_c = target with sign flags per column; columns flagged
// `simplex` additionally satisfy Σ w = 1.
std::optional<Vec> solve_columns(const Mat& cols, const std::vector<bool>& nonneg, const std::vector<bool>& simplex,
                                 const Vec& target) {
  LpProblem lp(cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) lp.nonneg[c] = nonneg[c];
  for (std::size_t r = 0; r < target.size(); ++r) {
    Vec row(cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) row[c] = cols[c][r];
    lp.add_eq(std::move(row), target[r]);
  }
  if (std::find(simplex.begin(), simplex.end(), true) != simplex.end()) {
    Vec row(cols.size(), Rational(0));
    for (std::size_t c = 0; c < cols.size(); ++c)
      if (simplex[c]) row[c] = 1;
    lp.add_eq(std::move(row), Rational(1));
  }
  LpResult r = solve_lp(lp);
  if (r.status == LpStatus::Infeasible) return std::nullopt;
  return r.point;
}

// Columns for λ ∈ P mapped by Jᵀ, then ν ∈ Q; returns (λ, ν) from weights.
struct ConeColumns {
  Mat cols;
  std::vector<bool> nonneg;
  std::vector<bool> simplex;
  Mat pg, qg;
};

ConeColumns cone_columns(const Mat& J, const GenCone& P, const GenCone& Q, std::size_t n) {
  ConeColumns cc;
  for (const auto& r : P.rays) {
    cc.cols.push_back(mat_t_vec(J, r, n));
    cc.pg.push_back(r);
    cc.nonneg.push_back(true);
  }
  for (const auto& l : P.lineality) {
    cc.cols.push_back(mat_t_vec(J, l, n));
    cc.pg.push_back(l);
    cc.nonneg.push_back(false);
  }
  for (const auto& r : Q.rays) {
    cc.cols.push_back(r);
    cc.qg.push_back(r);
    cc.nonneg.push_back(true);
  }
  for (const auto& l : Q.lineality) {
    cc.cols.push_back(l);
    cc.qg.push_back(l);
    cc.nonneg.push_back(false);
  }
  cc.simplex.assign(cc.cols.size(), false);
  return cc;
}

std::pair<Vec, Vec> unpack(const ConeColumns& cc, const Vec& w, std::size_t offset, std::size_t l, std::size_t n) {
  Vec lambda(l, Rational(0)), nu(n, Rational(0));
  for (std::size_t i = 0; i < cc.pg.size(); ++i) lambda = add(lambda, scale(cc.pg[i], w[offset + i]));
  for (std::size_t j = 0; j < cc.qg.size(); ++j) nu = add(nu, scale(cc.qg[j], w[offset + cc.pg.size() + j]));
  return {lambda, nu};
}

bool in_polytope(const Mat& vertices, const Vec& v) {
  std::vector<bool> nonneg(vertices.size(), true), simplex(vertices.size(), true);
  return solve_columns(vertices, nonneg, simplex, v).has_value();
}

// Tries to complete λ into an M-stationarity certificate at x̄.
std::optional<Verdict> certify_with_lambda(const ProblemInstance& p, const Vec& xbar, const Vec& lambda) {
  Vec ybar = p.G.eval(xbar);
  if (!cone_union_membership(normal_cone(p.K, ybar), lambda).member) return std::nullopt;
  Mat J = p.G.jacobian(xbar);
  Vec jl = mat_t_vec(J, lambda, p.n());
  ConeUnion nc = nc_at(p, xbar);
  for (const Mat& verts : p.f.subdifferential(xbar)) {
    for (const auto& q : nc.branches) {
      // Σθ g + ν = -Jᵀλ
      Mat cols = verts;
      std::vector<bool> nonneg(verts.size(), true), simplex(verts.size(), true);
      for (const auto& r : q.rays) {
        cols.push_back(r);
        nonneg.push_back(true);
        simplex.push_back(false);
      }
      for (const auto& l : q.lineality) {
        cols.push_back(l);
        nonneg.push_back(false);
        simplex.push_back(false);
      }
      auto w = solve_columns(cols, nonneg, simplex, scale(jl, Rational(-1)));
      if (!w) continue;
      Vec g(p.n(), Rational(0)), nu(p.n(), Rational(0));
      for (std::size_t i = 0; i < verts.size(); ++i) g = add(g, scale(verts[i], (*w)[i]));
      for (std::size_t i = verts.size(); i < cols.size(); ++i) nu = add(nu, scale(cols[i], (*w)[i]));
      Verdict v = Verdict::make(Status::Proved, "trace-multiplier");
      v.evidence = {{"subgradient", g}, {"lambda", lambda}, {"nu", nu}};
      return v;
    }
  }
  return std::nullopt;
}

}  // namespace

Verdict m_stationarity_check(const ProblemInstance& p, const Vec& xbar) {
  require_feasible(p, xbar);
  const std::size_t n = p.n(), l = p.l();
  Vec ybar = p.G.eval(xbar);
  ConeUnion nk = normal_cone(p.K, ybar);
  ConeUnion nc = nc_at(p, xbar);
  Mat J = p.G.jacobian(xbar);
  auto subdiff = p.f.subdifferential(xbar);
  for (std::size_t s = 0; s < subdiff.size(); ++s) {
    const Mat& verts = subdiff[s];
    for (std::size_t i = 0; i < nk.branches.size(); ++i) {
      for (std::size_t j = 0; j < nc.branches.size(); ++j) {
        ConeColumns cc = cone_columns(J, nk.branches[i], nc.branches[j], n);
        Mat cols = verts;
        std::vector<bool> nonneg(verts.size(), true), simplex(verts.size(), true);
        cols.insert(cols.end(), cc.cols.begin(), cc.cols.end());
        nonneg.insert(nonneg.end(), cc.nonneg.begin(), cc.nonneg.end());
        simplex.insert(simplex.end(), cc.simplex.begin(), cc.simplex.end());
        auto w = solve_columns(cols, nonneg, simplex, Vec(n, Rational(0)));
        if (!w) continue;
        Vec g(n, Rational(0));
        for (std::size_t v = 0; v < verts.size(); ++v) g = add(g, scale(verts[v], (*w)[v]));
        auto [lambda, nu] = unpack(cc, *w, verts.size(), l, n);
        Verdict out = Verdict::make(Status::Proved, "multiplier-lp",
                                    "subgradient piece " + std::to_string(s) + ", K-branch " + std::to_string(i) +
                                        ", C-branch " + std::to_string(j));
        out.evidence = {{"subgradient", g}, {"lambda", lambda}, {"nu", nu}};
        return out;
      }
    }
  }
  return Verdict::make(Status::Refuted, "multiplier-lp",
                       "no subgradient piece and branch pair admits a multiplier (exhaustive)");
}

Verdict fjm_abnormal_check(const ProblemInstance& p, const Vec& xbar) {
  require_feasible(p, xbar);
  const std::size_t n = p.n(), l = p.l();
  ConeUnion nk = normal_cone(p.K, p.G.eval(xbar));
  ConeUnion nc = nc_at(p, xbar);
  Mat J = p.G.jacobian(xbar);
  // Kernel of (λ, ν) -> Jᵀλ + ν in R^{l+n}.
  Mat sys(n, Vec(l + n, Rational(0)));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t i = 0; i < l; ++i) sys[r][i] = J[i][r];
    sys[r][l + r] = 1;
  }
  GenCone kernel(l + n, {}, null_space(sys, l + n));
  auto lift = [&](const Vec& v, std::size_t off) {
    Vec out(l + n, Rational(0));
    std::copy(v.begin(), v.end(), out.begin() + off);
    return out;
  };
  for (std::size_t i = 0; i < nk.branches.size(); ++i) {
    for (std::size_t j = 0; j < nc.branches.size(); ++j) {
      GenCone pq(l + n);
      for (const auto& r : nk.branches[i].rays) pq.rays.push_back(lift(r, 0));
      for (const auto& r : nk.branches[i].lineality) pq.lineality.push_back(lift(r, 0));
      for (const auto& r : nc.branches[j].rays) pq.rays.push_back(lift(r, l));
      for (const auto& r : nc.branches[j].lineality) pq.lineality.push_back(lift(r, l));
      GenCone s = canonicalize(intersect(pq, kernel));
      if (s.is_zero()) continue;
      Vec g = !s.lineality.empty() ? s.lineality.front() : s.rays.front();
      g = scale(g, Rational(1) / norm1(g));
      Vec lambda(g.begin(), g.begin() + l), nu(g.begin() + l, g.end());
      Verdict v = Verdict::make(Status::Proved, "kernel-cone",
                                "K-branch " + std::to_string(i) + ", C-branch " + std::to_string(j));
      v.evidence = {{"lambda", lambda}, {"nu", nu}};
      return v;
    }
  }
  return Verdict::make(Status::Refuted, "kernel-cone", "only the zero multiplier satisfies the abnormal system");
}

bool nnamcq_check(const ProblemInstance& p, const Vec& xbar) {
  return fjm_abnormal_check(p, xbar).status == Status::Refuted;
}

Verdict fjm_stationarity_check(const ProblemInstance& p, const Vec& xbar) {
  Verdict a = fjm_abnormal_check(p, xbar);
  if (a.status == Status::Proved) {
    a.method = "abnormal-multiplier";
    return a;
  }
  Verdict m = m_stationarity_check(p, xbar);
  if (m.status == Status::Proved) {
    m.method = "m-stationary";
    return m;
  }
  return Verdict::make(Status::Refuted, "exact", "no abnormal multiplier and not M-stationary");
}

bool polyhedrality_check(const ProblemInstance& p) {
  if (p.G.degree() > 1) return false;
  if (!p.K.purely_polyhedral()) return false;
  return !p.C || p.C->purely_polyhedral();
}

ConeUnion merge_convex_branches(const ConeUnion& u) {
  ConeUnion cur = canonicalize(u);
  bool changed = true;
  while (changed && cur.branches.size() > 1) {
    changed = false;
    for (std::size_t i = 0; i < cur.branches.size() && !changed; ++i) {
      for (std::size_t j = i + 1; j < cur.branches.size() && !changed; ++j) {
        GenCone s = canonicalize(sum(cur.branches[i], cur.branches[j]));
        if (!cone_union_inclusion(ConeUnion::single(s), cur).verified) continue;
        ConeUnion next(cur.dim);
        for (std::size_t k = 0; k < cur.branches.size(); ++k)
          if (k != i && k != j) next.branches.push_back(cur.branches[k]);
        next.branches.insert(next.branches.begin() + static_cast<std::ptrdiff_t>(i), s);
        cur = canonicalize(next);
        changed = true;
      }
    }
  }
  return cur;
}

ConeUnion linearization_cone(const ProblemInstance& p, const Vec& xbar) {
  require_feasible(p, xbar);
  if (!p.K.purely_polyhedral()) throw Error("linearization cone: K has smooth blocks");
  Vec ybar = p.G.eval(xbar);
  Mat J = p.G.jacobian(xbar);
  ConeUnion out(p.n());
  for (std::size_t b : p.K.active_blocks(ybar)) {
    HPolyhedron t = tangent_cone_convex(p.K.poly(b), ybar);
    HPolyhedron pulled(p.n());
    for (std::size_t r = 0; r < t.rows(); ++r) pulled.add(mat_t_vec(J, t.A[r], p.n()), Rational(0), t.eq[r]);
    out.branches.push_back(to_generators(pulled));
  }
  return merge_convex_branches(out);
}

namespace {

GenCone polar_of_union(const ConeUnion& u) {
  std::vector<GenCone> polars;
  for (const auto& b : u.branches) polars.push_back(to_generators(polar(b)));
  return canonicalize(intersect(polars, u.dim));
}

struct ExplicitTangent {
  ConeUnion tm;
  ConeUnion lm;
};

std::optional<ExplicitTangent> explicit_cones(const ProblemInstance& p, const Vec& xbar, Verdict& unknown) {
  require_feasible(p, xbar);
  if (!p.M_explicit) {
    unknown = Verdict::make(Status::Unknown, "explicit-M", "no explicit description of M supplied");
    return std::nullopt;
  }
  if (!p.M_explicit->contains(xbar)) throw DomainError("reference point is not in M_explicit");
  if (!p.M_explicit->purely_polyhedral() || !p.K.purely_polyhedral() || p.has_C()) {
    unknown = Verdict::make(Status::Unknown, "explicit-M", "tangent cones need polyhedral M and K without C");
    return std::nullopt;
  }
  return ExplicitTangent{tangent_cone_union(*p.M_explicit, xbar), linearization_cone(p, xbar)};
}

}  // namespace

Verdict gacq_check(const ProblemInstance& p, const Vec& xbar) {
  Verdict unknown;
  auto cones = explicit_cones(p, xbar, unknown);
  if (!cones) return unknown;
  auto tl = cone_union_inclusion(cones->tm, cones->lm);
  auto lt = cone_union_inclusion(cones->lm, cones->tm);
  if (tl.verified && lt.verified) return Verdict::make(Status::Proved, "tangent-vs-linearization", "T_M = L_M");
  Verdict v = Verdict::make(Status::Refuted, "tangent-vs-linearization",
                            !lt.verified ? "L_M contains a direction outside T_M" : "T_M contains a direction outside L_M");
  v.evidence.push_back({"counterexample", !lt.verified ? *lt.counterexample : *tl.counterexample});
  return v;
}

Verdict ggcq_check(const ProblemInstance& p, const Vec& xbar) {
  Verdict unknown;
  auto cones = explicit_cones(p, xbar, unknown);
  if (!cones) return unknown;
  GenCone tp = polar_of_union(cones->tm), lp = polar_of_union(cones->lm);
  if (same_cone(tp, lp)) return Verdict::make(Status::Proved, "polar-comparison", "T_M° = L_M°");
  Verdict v = Verdict::make(Status::Refuted, "polar-comparison", "T_M° and L_M° differ");
  for (const auto& g : tp.all_generators())
    if (!lp.contains(g)) {
      v.evidence.push_back({"in_polar_T_not_L", g});
      return v;
    }
  for (const auto& g : lp.all_generators())
    if (!tp.contains(g)) {
      v.evidence.push_back({"in_polar_L_not_T", g});
      return v;
    }
  return v;
}

std::vector<DVec> default_probe_directions(std::size_t n) {
  std::vector<DVec> out;
  for (std::size_t i = 0; i < n; ++i)
    for (double s : {1.0, -1.0}) {
      DVec d(n, 0.0);
      d[i] = s;
      out.push_back(d);
    }
  if (n > 1)
    for (double s : {1.0, -1.0}) out.push_back(DVec(n, s / std::sqrt(double(n))));
  return out;
}

std::string ProbeReport::summary() const {
  std::ostringstream os;
  os << (diverging ? "diverging" : "bounded") << " (max ratio " << max_ratio << " over " << samples.size()
     << " samples)";
  return os.str();
}

ProbeReport subregularity_probe(const ProblemInstance& p, const Vec& xbar, const std::vector<DVec>& directions,
                                const std::vector<double>& radii) {
  if (!p.M_explicit) throw Error("subregularity probe needs an explicit description of M");
  require_feasible(p, xbar);
  ProbeReport rep;
  DVec xb = to_double(xbar);
  for (const auto& dir : directions) {
    double nd = norm2(dir);
    if (nd == 0) continue;
    std::vector<double> ratios;
    for (double t : radii) {
      ProbeSample s;
      s.t = t;
      s.x = xb;
      for (std::size_t i = 0; i < xb.size(); ++i) s.x[i] += t * dir[i] / nd;
      s.dist_to_M = distance(*p.M_explicit, s.x);
      s.residual = distance(p.K, p.G.eval(s.x));
      if (p.has_C()) s.residual += distance(*p.C, s.x);
      if (s.residual > 0) {
        s.ratio = s.dist_to_M / s.residual;
      } else {
        s.ratio = s.dist_to_M <= 1e-14 ? 0.0 : std::numeric_limits<double>::infinity();
      }
      rep.max_ratio = std::max(rep.max_ratio, s.ratio);
      ratios.push_back(s.ratio);
      rep.samples.push_back(std::move(s));
    }
    bool increasing = ratios.size() > 1 && ratios.front() > 0;
    for (std::size_t i = 1; i < ratios.size() && increasing; ++i) increasing = ratios[i] > ratios[i - 1];
    if (increasing && ratios.back() >= 10 * ratios.front()) rep.diverging = true;
  }
  return rep;
}

ReplayResult replay_sequence(const ProblemInstance& p) {
  if (!p.replay) throw Error("instance has no stored witness sequence");
  const Replay& r = *p.replay;
  ReplayResult out;
  out.ok = true;
  GeometricConstraint gc = GeometricConstraint::of(p);
  auto eval = [](const std::vector<Polynomial>& ps, const Vec& kh, std::size_t dim) {
    if (ps.empty()) return Vec(dim, Rational(0));
    Vec v;
    for (const auto& q : ps) v.push_back(q.eval(kh));
    return v;
  };
  for (const Rational& k : r.ks) {
    Vec kh{k, Rational(1) / k};
    Vec x = eval(r.x, kh, p.n()), y = eval(r.y, kh, p.l()), lam = eval(r.lambda, kh, p.l()),
        nu = eval(r.nu, kh, p.n());
    std::string tag = "k=" + to_string(k) + ": ";
    ++out.checked;
    std::optional<Vec> image;
    try {
      image = coderivative(gc, x, y, Vec(p.n(), Rational(0)), lam, nu);
    } catch (const DomainError& e) {
      out.failures.push_back(tag + e.what());
      continue;
    }
    if (!image) {
      out.failures.push_back(tag + "multiplier outside the normal cone");
      continue;
    }
    if (r.kind == "image") {
      if (*image != r.target) out.failures.push_back(tag + "image " + to_string(*image) + " differs from target");
    } else {
      Vec eps = eval(r.eps, kh, p.n());
      Vec grad = sub(eps, *image);
      bool ok = false;
      for (const Mat& verts : p.f.subdifferential(x)) ok = ok || in_polytope(verts, grad);
      if (!ok) out.failures.push_back(tag + "eps - image is not a subgradient");
    }
  }
  out.ok = out.failures.empty();
  return out;
}

Verdict analytic_stationarity(const AnalyticVariant& v, const std::string& label) {
  std::optional<Rational> gap;
  for (const auto& reg : v.regions) {
    for (const auto& g : reg.subgradients) {
      Vec target = scale(g, Rational(-1));
      for (const auto& val : reg.values) {
        Rational d = l1_distance(val, target);
        if (d == 0) {
          Verdict u = Verdict::make(Status::Unknown, "analytic-gap", "region '" + reg.label + "' has zero gap");
          return u;
        }
        if (!gap || d < *gap) gap = d;
      }
    }
  }
  if (!gap) return Verdict::make(Status::Unknown, "analytic-gap", "no analytic regions");
  Verdict out = Verdict::make(Status::Refuted, "analytic-gap",
                              label + ": every subgradient stays at L1 distance >= " + to_string(*gap) +
                                  " from the negated multiplier images");
  out.evidence.push_back({"gap", Vec{*gap}});
  return out;
}

Verdict analytic_regularity(const AnalyticVariant& v, const std::string& label) {
  ConeUnion ls(v.at_point.dim);
  for (const auto& reg : v.regions)
    for (const auto& val : reg.values) ls.branches.push_back(val);
  ls = canonicalize(ls);
  auto inc = cone_union_inclusion(ls, v.at_point);
  if (inc.verified) return Verdict::make(Status::Proved, "analytic-inclusion", label + ": limsup ⊆ value at the point");
  Verdict out = Verdict::make(Status::Refuted, "analytic-inclusion", label + ": limsup leaves the value at the point");
  out.evidence.push_back({"witness", *inc.counterexample});
  return out;
}

Verdict analytic_limsup_condition(const AnalyticVariant& v, const Mat& subgradients_at_point) {
  ConeUnion ls(v.at_point.dim);
  for (const auto& reg : v.regions)
    for (const auto& val : reg.values) ls.branches.push_back(val);
  for (const auto& g : subgradients_at_point) {
    Vec neg = scale(g, Rational(-1));
    if (cone_union_membership(ls, neg).member) {
      Verdict out = Verdict::make(Status::Proved, "analytic-limsup", "-subgradient lies in the limsup");
      out.evidence.push_back({"subgradient", g});
      return out;
    }
  }
  return Verdict::make(Status::Refuted, "analytic-limsup", "no negated subgradient lies in the limsup");
}

Verdict am_stationarity_check(const ProblemInstance& p, const Vec& xbar) {
  require_feasible(p, xbar);
  if (p.analytic && p.analytic->am) {
    Verdict v = analytic_stationarity(*p.analytic->am, "M(x, y)");
    if (v.status == Status::Refuted) return v;
  }
  if (p.replay && p.replay->kind == "eps") {
    ReplayResult r = replay_sequence(p);
    if (r.ok) {
      Verdict v = Verdict::make(Status::Proved, "replayed-sequence",
                                "stored sequence verified exactly at " + std::to_string(r.checked) + " values of k");
      return v;
    }
  }
  Verdict m = m_stationarity_check(p, xbar);
  if (m.status == Status::Proved) {
    m.method = "m-stationary";
    m.detail = "constant sequence with the M-stationarity multiplier";
    return m;
  }
  return Verdict::make(Status::Unknown, "none", "no certificate or refutation available");
}

Verdict dam_stationarity_check(const ProblemInstance& p, const Vec& xbar) {
  if (p.analytic && p.analytic->dam) {
    Verdict v = analytic_stationarity(*p.analytic->dam, "M~(x, y)");
    if (v.status == Status::Refuted) return v;
  }
  if (!p.has_C()) return am_stationarity_check(p, xbar);
  require_feasible(p, xbar);
  Verdict m = m_stationarity_check(p, xbar);
  if (m.status == Status::Proved) {
    m.method = "m-stationary";
    m.detail = "constant sequence with the M-stationarity multiplier";
    return m;
  }
  return Verdict::make(Status::Unknown, "none", "no certificate or refutation available");
}

TraceClassification classify_trace(const AMTrace& t, const Vec& xbar, const ProblemInstance& p,
                                   const ClassifyConfig& cfg) {
  if (t.records.empty()) throw Error("classify_trace: empty trace");
  TraceClassification out;
  const auto& first = t.records.front();
  const auto& last = t.records.back();
  double n_first = norm2(first.lambda), n_last = norm2(last.lambda), sup = 0;
  for (const auto& r : t.records) sup = std::max(sup, norm2(r.lambda));
  const std::vector<double> tols{1e-9, 1e-6, 1e-4, 1e-3, 1e-2};
  Vec ybar = p.G.eval(xbar);
  Mat J = p.G.jacobian(xbar);
  ConeUnion nk = normal_cone(p.K, ybar);
  ConeUnion nc = nc_at(p, xbar);

  bool growing = n_last > 0 && (n_first == 0 ? n_last > cfg.growth_threshold : n_last / n_first > cfg.growth_threshold);
  if (growing) {
    double scale_inf = 0;
    for (double v : last.lambda) scale_inf = std::max(scale_inf, std::abs(v));
    DVec dir(last.lambda.size());
    for (std::size_t i = 0; i < dir.size(); ++i) dir[i] = last.lambda[i] / scale_inf;
    for (double tol : tols) {
      Vec lam = snap(dir, tol, cfg.max_denominator);
      if (is_zero(lam) || !cone_union_membership(nk, lam).member) continue;
      Vec nu = scale(mat_t_vec(J, lam, p.n()), Rational(-1));
      if (!cone_union_membership(nc, nu).member) continue;
      out.kind = TraceClass::Abnormal;
      out.lambda = lam;
      out.nu = nu;
      std::ostringstream os;
      os << "multiplier norm grew by " << n_last / std::max(n_first, 1e-300)
         << "; normalized limit verified as an abnormal multiplier";
      out.detail = os.str();
      return out;
    }
  }
  if (sup <= cfg.bound_factor * (1 + n_first)) {
    for (double tol : tols) {
      Vec lam = snap(last.lambda, tol, cfg.max_denominator);
      if (auto v = certify_with_lambda(p, xbar, lam)) {
        out.kind = TraceClass::MLimit;
        out.lambda = lam;
        out.nu = *v->find("nu");
        out.detail = "bounded multipliers; snapped limit verified as an M-stationarity multiplier";
        return out;
      }
    }
    Verdict m = m_stationarity_check(p, xbar);
    if (m.status == Status::Proved) {
      const Vec& lam = *m.find("lambda");
      double dev = 0, scale_inf = 1;
      for (std::size_t i = 0; i < lam.size(); ++i) {
        dev = std::max(dev, std::abs(lam[i].get_d() - last.lambda[i]));
        scale_inf = std::max(scale_inf, std::abs(last.lambda[i]));
      }
      if (dev <= 1e-2 * scale_inf) {
        out.kind = TraceClass::MLimit;
        out.lambda = lam;
        out.nu = *m.find("nu");
        out.detail = "bounded multipliers; exact multiplier found next to the trace limit";
        return out;
      }
    }
    out.detail = "bounded multipliers, but no exact multiplier matches the trace limit";
    return out;
  }
  out.detail = growing ? "diverging multipliers without a verifiable abnormal direction"
                       : "multipliers neither bounded nor clearly diverging";
  return out;
}

}  // namespace vacone
