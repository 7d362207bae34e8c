#include "vacone/regularity.hpp"

#include <functional>
#include <random>
#include <set>

#include "vacone/cones.hpp"

namespace vacone {

std::vector<Vec> sample_directions(std::size_t n, std::size_t count, std::uint64_t seed) {
  std::vector<Vec> out;
  for (std::size_t i = 0; i < n && out.size() < count; ++i) {
    for (int s : {1, -1}) {
      Vec d(n, Rational(0));
      d[i] = s;
      if (out.size() < count) out.push_back(d);
    }
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coef(-4, 4);
  std::set<Vec> seen(out.begin(), out.end());
  for (std::size_t guard = 0; out.size() < count && guard < 100 * count; ++guard) {
    Vec d(n);
    for (auto& v : d) v = coef(rng);
    if (is_zero(d)) continue;
    d = primitive(d);
    if (seen.insert(d).second) out.push_back(d);
  }
  return out;
}

namespace {

Vec axpy(const Vec& x, const Rational& t, const Vec& d) { return add(x, scale(d, t)); }

// ---------------------------------------------------------------- sign analysis

struct HRows {
  Mat le;  // h·v <= 0 for members
};

HRows hrows(const GenCone& c) {
  HPolyhedron h = to_hform(c);
  HRows out;
  for (std::size_t r = 0; r < h.rows(); ++r) {
    out.le.push_back(h.A[r]);
    if (h.eq[r]) out.le.push_back(scale(h.A[r], Rational(-1)));
  }
  return out;
}

bool locally_nonpositive(const Polynomial& q) {
  if (q.constant_term() < 0) return true;
  for (const auto& [e, c] : q.terms())
    if (c > 0) return false;
  return true;
}

// Direction regions near x̄ as pointed ray sets: orthants, intersected with
// the tangent cones of C when C is present.
std::vector<Mat> direction_regions(std::size_t n, const std::optional<PolyUnion>& C, const Vec& xbar) {
  std::vector<GenCone> tangents;
  if (C) {
    for (const auto& b : tangent_cone_union(*C, xbar).branches) tangents.push_back(b);
  } else {
    tangents.push_back(GenCone::whole(n));
  }
  std::vector<Mat> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    GenCone orth(n);
    for (std::size_t i = 0; i < n; ++i) {
      Vec e(n, Rational(0));
      e[i] = (mask >> i & 1) ? -1 : 1;
      orth.rays.push_back(e);
    }
    for (const auto& t : tangents) {
      GenCone r = C ? canonicalize(intersect(t, orth)) : orth;
      if (r.is_zero()) continue;
      Mat rays = r.all_generators();
      if (std::find(out.begin(), out.end(), rays) == out.end()) out.push_back(rays);
    }
  }
  return out;
}

struct Setting {
  PolyMap G;
  std::vector<GenCone> base;   // branches P_i in R^l
  std::optional<PolyUnion> C;  // restriction x ∈ C with N_C(x) added
  ConeUnion target;            // value of the map at x̄
  Vec xbar;
  std::string map_name;
};

ConeUnion c_normals(const Setting& s, const Vec& x) {
  if (!s.C) return ConeUnion::single(GenCone::zero(s.xbar.size()));
  return normal_cone(*s.C, x);
}

ConeUnion target_of(const PolyMap& G, const std::vector<GenCone>& base, const std::optional<PolyUnion>& C,
                    const Vec& xbar) {
  const std::size_t n = xbar.size();
  Mat J = G.jacobian(xbar);
  ConeUnion qs = C ? normal_cone(*C, xbar) : ConeUnion::single(GenCone::zero(n));
  ConeUnion out(n);
  for (const auto& p : base) {
    GenCone img = image_transpose(J, p, n);
    for (const auto& q : qs.branches) out.branches.push_back(sum(img, q));
  }
  return canonicalize(out);
}

bool sign_analysis(const Setting& s, std::string& detail) {
  const std::size_t n = s.xbar.size();
  std::vector<std::string> svars;
  const auto& jac = s.G.jacobian_polynomials();
  std::vector<HRows> rows;
  for (const auto& b : s.target.branches) rows.push_back(hrows(b));
  ConeUnion qs = c_normals(s, s.xbar);
  auto regions = direction_regions(n, s.C, s.xbar);
  for (const Mat& rays : regions) {
    std::vector<std::string> vars;
    for (std::size_t j = 0; j < rays.size(); ++j) vars.push_back("s" + std::to_string(j + 1));
    Mat R(n, Vec(rays.size()));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < rays.size(); ++j) R[i][j] = rays[j][i];
    for (std::size_t pi = 0; pi < s.base.size(); ++pi) {
      Mat gens = s.base[pi].all_generators();
      for (const auto& q : qs.branches) {
        bool placed = false;
        for (std::size_t tb = 0; tb < rows.size() && !placed; ++tb) {
          bool ok = true;
          for (const auto& h : rows[tb].le) {
            for (const auto& qg : q.all_generators())
              if (dot(h, qg) > 0) ok = false;
            for (const auto& g : gens) {
              if (!ok) break;
              Polynomial poly(s.G[0].variables());
              for (std::size_t r = 0; r < g.size(); ++r) {
                if (g[r] == 0) continue;
                for (std::size_t c = 0; c < n; ++c)
                  if (h[c] != 0) poly += jac[r][c] * (g[r] * h[c]);
              }
              if (!locally_nonpositive(poly.compose_affine(s.xbar, R, vars))) ok = false;
            }
            if (!ok) break;
          }
          placed = ok;
        }
        if (!placed) {
          detail = "sign analysis inconclusive for base branch " + std::to_string(pi);
          return false;
        }
      }
    }
  }
  detail = "every base-branch image stays inside one branch of the value at x̄ on each of " +
           std::to_string(regions.size()) + " direction regions (exact sign analysis)";
  return true;
}

// ---------------------------------------------------------------- sampler

struct SamplePoint {
  Vec x;
  Vec ytil;
  std::vector<GenCone> cones;  // value of the map at (x, ỹ), per branch
  std::vector<GenCone> lam_cones;
  std::vector<GenCone> nu_cones;
};

using Family = std::function<std::optional<SamplePoint>(const Rational& t)>;

Vec snap_direction(const Vec& v) {
  Rational m = norm_inf(v);
  if (m == 0) return v;
  DVec d = to_double(scale(v, Rational(1) / m));
  return primitive(snap(d, 1e-3, 1000));
}

std::vector<Vec> candidates(const GenCone& c) {
  const std::size_t n = c.dim;
  std::vector<Vec> out;
  auto push = [&](Vec v) {
    if (is_zero(v)) return;
    v = primitive(v);
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  };
  for (const auto& g : c.all_generators()) push(snap_direction(g));
  HPolyhedron h = to_hform(c);
  Mat le, eq;
  for (std::size_t r = 0; r < h.rows(); ++r) (h.eq[r] ? eq : le).push_back(snap_direction(h.A[r]));
  GenCone lim = to_generators(HPolyhedron::cone(n, le, eq));
  for (const auto& g : lim.all_generators()) push(g);
  return out;
}

std::optional<Verdict> try_refute(const std::vector<Family>& families, const std::vector<std::string>& labels,
                                  const Setting& s, const RegularityConfig& cfg) {
  const Rational& tmin = cfg.radii.back();
  for (std::size_t fi = 0; fi < families.size(); ++fi) {
    auto at_min = families[fi](tmin);
    if (!at_min) continue;
    for (const auto& cone : at_min->cones) {
      for (const Vec& v : candidates(canonicalize(cone))) {
        if (cone_union_membership(s.target, v).member) continue;
        // Exact L1 distance from v to the sampled values along the radii.
        std::vector<std::vector<NamedVec>> seq;
        std::vector<Rational> dists;
        bool ok = true;
        for (const Rational& t : cfg.radii) {
          auto sp = families[fi](t);
          if (!sp) {
            ok = false;
            break;
          }
          std::optional<Rational> best;
          Vec best_w;
          std::size_t best_b = 0;
          for (std::size_t b = 0; b < sp->cones.size(); ++b) {
            Vec w;
            Rational d = l1_distance(sp->cones[b], v, &w);
            if (!best || d < *best) {
              best = d;
              best_w = w;
              best_b = b;
            }
          }
          if (!best) {
            ok = false;
            break;
          }
          dists.push_back(*best);
          std::vector<NamedVec> rec{{"t", Vec{t}}, {"x", sp->x}, {"ytil", sp->ytil}, {"member", best_w}};
          rec.push_back({"lam_branch", Vec{Rational(static_cast<long>(best_b))}});
          seq.push_back(std::move(rec));
        }
        if (!ok || dists.empty()) continue;
        bool monotone = true;
        for (std::size_t i = 1; i < dists.size(); ++i) monotone = monotone && dists[i] <= dists[i - 1];
        if (!monotone || dists.back() > norm1(v) / 1000) continue;
        bool exact = std::all_of(dists.begin(), dists.end(), [](const Rational& d) { return d == 0; });
        Verdict out = Verdict::make(Status::Refuted, "facet-limit-sampler",
                                    labels[fi] + ": limit " + to_string(v) + " of nearby values of " + s.map_name +
                                        " lies outside its value at x̄" +
                                        (exact ? " (member of every sampled value)" : " (distance -> 0)"));
        out.evidence.push_back({"witness", v});
        out.sequence = std::move(seq);
        return out;
      }
    }
  }
  return std::nullopt;
}

// Families for polyhedral K through the reduced criterion: x = x̄ + t d,
// multipliers in one base branch, ỹ = G(x) − G(x̄).
std::vector<Family> base_families(const Setting& s, const std::vector<Vec>& dirs, std::vector<std::string>& labels) {
  std::vector<Family> out;
  const std::size_t n = s.xbar.size();
  Vec gbar = s.G.eval(s.xbar);
  for (std::size_t di = 0; di < dirs.size(); ++di) {
    for (std::size_t pi = 0; pi < s.base.size(); ++pi) {
      Vec d = dirs[di];
      GenCone P = s.base[pi];
      const Setting* sp = &s;
      out.push_back([=](const Rational& t) -> std::optional<SamplePoint> {
        Vec x = axpy(sp->xbar, t, d);
        if (sp->C && !sp->C->contains(x)) return std::nullopt;
        SamplePoint pt;
        pt.x = x;
        pt.ytil = sub(sp->G.eval(x), gbar);
        GenCone img = image_transpose(sp->G.jacobian(x), P, n);
        for (const auto& q : c_normals(*sp, x).branches) pt.cones.push_back(sum(img, q));
        return pt;
      });
      labels.push_back("direction " + to_string(d) + ", base branch " + std::to_string(pi));
    }
  }
  return out;
}

// Boundary points of a smooth block near ȳ, solving for a coordinate in
// which some constraint is affine with constant coefficient.
std::optional<Vec> boundary_point(const SmoothConvexBlock& b, const Vec& ybar, const Vec& e, const Rational& t,
                                  std::size_t j, std::size_t i) {
  const Polynomial& g = b.g[j];
  Rational coef = 0;
  Polynomial rest(g.variables());
  for (const auto& [ex, c] : g.terms()) {
    if (ex[i] == 0) {
      rest.add_term(ex, c);
      continue;
    }
    bool pure = ex[i] == 1;
    for (std::size_t k = 0; k < ex.size(); ++k)
      if (k != i && ex[k] != 0) pure = false;
    if (!pure) return std::nullopt;
    coef += c;
  }
  if (coef == 0) return std::nullopt;
  Vec w = axpy(ybar, t, e);
  w[i] = 0;
  w[i] = -rest.eval(w) / coef;
  if (!b.contains(w)) return std::nullopt;
  return w;
}

std::vector<Family> smooth_families(const Setting& s, const PolyUnion& K, const std::vector<Vec>& dirs,
                                    const RegularityConfig& cfg, std::vector<std::string>& labels) {
  std::vector<Family> out;
  const std::size_t n = s.xbar.size(), l = K.dim;
  Vec ybar = s.G.eval(s.xbar);
  auto edirs = sample_directions(l, std::max<std::size_t>(2 * l, cfg.boundary_samples), cfg.seed + 1);
  for (std::size_t bi = 0; bi < K.blocks.size(); ++bi) {
    const auto* sb = std::get_if<SmoothConvexBlock>(&K.blocks[bi]);
    if (!sb || !sb->contains(ybar)) continue;
    for (std::size_t j = 0; j < sb->g.size(); ++j) {
      for (std::size_t i = 0; i < l; ++i) {
        for (const auto& e : edirs) {
          if (e[i] != 0) continue;
          for (const auto& d : dirs) {
            SmoothConvexBlock block = *sb;
            const Setting* sp = &s;
            const PolyUnion* kp = &K;
            out.push_back([=](const Rational& t) -> std::optional<SamplePoint> {
              auto w = boundary_point(block, ybar, e, t, j, i);
              if (!w || kp->active_blocks(*w).size() != 1) return std::nullopt;
              Vec x = axpy(sp->xbar, t, d);
              if (sp->C && !sp->C->contains(x)) return std::nullopt;
              SamplePoint pt;
              pt.x = x;
              pt.ytil = sub(sp->G.eval(x), *w);
              ConeUnion nk = normal_cone(*kp, *w);
              Mat J = sp->G.jacobian(x);
              for (const auto& p : nk.branches) {
                GenCone img = image_transpose(J, p, n);
                for (const auto& q : c_normals(*sp, x).branches) pt.cones.push_back(sum(img, q));
              }
              return pt;
            });
            labels.push_back("block " + std::to_string(bi) + " boundary direction " + to_string(e) +
                             ", x-direction " + to_string(d));
          }
        }
      }
    }
  }
  return out;
}

std::vector<Vec> restricted_directions(std::size_t n, const std::optional<PolyUnion>& C, const Vec& xbar,
                                       const RegularityConfig& cfg) {
  if (!C) return sample_directions(n, cfg.directions, cfg.seed);
  std::vector<Vec> out;
  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<int> coef(1, 4);
  auto regions = direction_regions(n, C, xbar);
  for (const auto& rays : regions)
    for (const auto& r : rays)
      if (std::find(out.begin(), out.end(), primitive(r)) == out.end()) out.push_back(primitive(r));
  for (std::size_t guard = 0; out.size() < cfg.directions && guard < 20 * cfg.directions; ++guard) {
    const Mat& rays = regions[guard % regions.size()];
    Vec d(n, Rational(0));
    for (const auto& r : rays) d = add(d, scale(r, Rational(coef(rng))));
    if (is_zero(d)) continue;
    d = primitive(d);
    if (std::find(out.begin(), out.end(), d) == out.end()) out.push_back(d);
  }
  return out;
}

Verdict ladder(const ProblemInstance& q, const Vec& xbar, const std::optional<PolyUnion>& C,
               const RegularityConfig& cfg, const std::string& map_name, bool allow_reduction_steps) {
  const std::size_t n = q.n();
  Setting s;
  s.G = q.G;
  s.C = C;
  s.xbar = xbar;
  s.map_name = map_name;
  Vec ybar = q.G.eval(xbar);
  std::vector<std::string> labels;
  std::vector<Family> families;
  if (q.K.purely_polyhedral()) {
    s.base = normal_cone(q.K, ybar).branches;
    s.target = target_of(q.G, s.base, C, xbar);
    std::string detail;
    if (allow_reduction_steps && sign_analysis(s, detail)) {
      Verdict v = Verdict::make(Status::Proved, "reduced-criterion+sign-analysis", detail);
      return v;
    }
    families = base_families(s, restricted_directions(n, C, xbar, cfg), labels);
  } else {
    // Value at x̄ of the full map; nearby values from boundary samples.
    s.base = normal_cone(q.K, ybar).branches;
    s.target = target_of(q.G, s.base, C, xbar);
    families = smooth_families(s, q.K, restricted_directions(n, C, xbar, cfg), cfg, labels);
  }
  if (auto r = try_refute(families, labels, s, cfg)) return *r;
  return Verdict::make(Status::Unknown, "facet-limit-sampler",
                       "no proof; " + std::to_string(families.size()) + " sample families over " +
                           std::to_string(cfg.radii.size()) + " radii found no limit outside the value at x̄");
}

void require_feasible(const ProblemInstance& p, const Vec& xbar) {
  if (!p.feasible(xbar)) throw DomainError("reference point " + to_string(xbar) + " is not feasible");
}

}  // namespace

Verdict am_regularity_check(const ProblemInstance& p, const Vec& xbar, const RegularityConfig& cfg) {
  if (p.analytic && p.analytic->am) return analytic_regularity(*p.analytic->am, "M(x, y)");
  require_feasible(p, xbar);
  if (polyhedrality_check(p))
    return Verdict::make(Status::Proved, "polyhedrality", "G affine, K and C polyhedral: Φ is polyhedral");
  if (nnamcq_check(p, xbar)) return Verdict::make(Status::Proved, "nnamcq", "no nonzero abnormal multiplier");
  ProblemInstance q = lift_abstract_set(p);
  return ladder(q, xbar, std::nullopt, cfg, "M", true);
}

Verdict dam_regularity_check(const ProblemInstance& p, const Vec& xbar, const RegularityConfig& cfg) {
  if (p.analytic && p.analytic->dam) return analytic_regularity(*p.analytic->dam, "M~(x, y)");
  if (!p.has_C()) return am_regularity_check(p, xbar, cfg);
  require_feasible(p, xbar);
  if (polyhedrality_check(p))
    return Verdict::make(Status::Proved, "polyhedrality", "G affine, K and C polyhedral: Φ is polyhedral");
  if (nnamcq_check(p, xbar)) return Verdict::make(Status::Proved, "nnamcq", "no nonzero abnormal multiplier");
  if (!p.C->purely_polyhedral())
    return Verdict::make(Status::Unknown, "unsupported", "decoupled sampling needs a polyhedral C");
  ProblemInstance q = p;
  q.C.reset();
  return ladder(q, xbar, p.C, cfg, "M~", true);
}

Verdict ccp_check(const ProblemInstance& p, const Vec& xbar, const RegularityConfig& cfg) {
  if (p.has_C() || p.K.blocks.size() != 1 || !p.K.purely_polyhedral())
    throw Error("ccp_check: K must be R₋ᵖ × {0}^q without C");
  const HPolyhedron& h = p.K.poly(0);
  std::vector<int> seen(p.l(), 0);
  for (std::size_t r = 0; r < h.rows(); ++r) {
    if (h.b[r] != 0) throw Error("ccp_check: K must be R₋ᵖ × {0}^q");
    std::size_t nz = 0, idx = 0;
    for (std::size_t i = 0; i < p.l(); ++i)
      if (h.A[r][i] != 0) {
        ++nz;
        idx = i;
      }
    if (nz != 1 || h.A[r][idx] != 1) throw Error("ccp_check: K must be R₋ᵖ × {0}^q");
    ++seen[idx];
  }
  for (int c : seen)
    if (c != 1) throw Error("ccp_check: every component of G must carry exactly one sign constraint");
  Verdict v = am_regularity_check(p, xbar, cfg);
  v.detail = "cone-continuity via AM-regularity: " + v.detail;
  return v;
}

Verdict reduced_criterion_check(const ProblemInstance& p, const Vec& xbar, const RegularityConfig& cfg) {
  require_feasible(p, xbar);
  ProblemInstance q = lift_abstract_set(p);
  Setting s;
  s.G = q.G;
  s.xbar = xbar;
  s.map_name = "K";
  s.base = normal_cone(q.K, q.G.eval(xbar)).branches;
  s.target = target_of(q.G, s.base, std::nullopt, xbar);
  std::string detail;
  if (sign_analysis(s, detail)) return Verdict::make(Status::Proved, "sign-analysis", detail);
  std::vector<std::string> labels;
  auto families = base_families(s, sample_directions(p.n(), cfg.directions, cfg.seed), labels);
  if (auto r = try_refute(families, labels, s, cfg)) return *r;
  return Verdict::make(Status::Unknown, "facet-limit-sampler", "no proof and no refutation at this resolution");
}

}  // namespace vacone
