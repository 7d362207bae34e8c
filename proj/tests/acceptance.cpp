// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 when any
// criterion fails. VACONE_SEED overrides the base seed of the random suites.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "vacone/calculus.hpp"
#include "vacone/catalog.hpp"
#include "vacone/penalty.hpp"
#include "vacone/regularity.hpp"

using namespace vacone;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

long rnd(std::mt19937_64& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

Vec random_int_vec(std::mt19937_64& rng, std::size_t d, long lo, long hi, bool nonzero = true) {
  for (;;) {
    Vec v(d);
    for (auto& x : v) x = rnd(rng, lo, hi);
    if (!nonzero || !is_zero(v)) return v;
  }
}

std::vector<std::string> xvars(std::size_t n) {
  std::vector<std::string> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back("x" + std::to_string(i + 1));
  return v;
}

/// Random block whose rows pass through `base` (slack 0) or keep it inside
/// (slack > 0); negative slack excludes it.
HPolyhedron random_block(std::mt19937_64& rng, std::size_t d, const Vec& base, std::size_t rows, long min_slack,
                         bool allow_eq) {
  HPolyhedron h(d);
  for (std::size_t i = 0; i < rows; ++i) {
    Vec a = random_int_vec(rng, d, -3, 3);
    long slack = rnd(rng, 0, 2) == 0 ? rnd(rng, min_slack, 2) : 0;
    if (allow_eq && rnd(rng, 0, 9) == 0)
      h.add_eq(a, dot(a, base));
    else
      h.add_le(a, dot(a, base) + slack);
  }
  return h;
}

/// Union of 1..max_blocks blocks, the first containing `base`.
PolyUnion random_union(std::mt19937_64& rng, std::size_t d, const Vec& base, std::size_t max_blocks,
                       std::size_t max_rows) {
  PolyUnion u(d);
  std::size_t nb = rnd(rng, 1, static_cast<long>(max_blocks));
  for (std::size_t b = 0; b < nb; ++b) {
    std::size_t rows = rnd(rng, 1, static_cast<long>(max_rows));
    u.blocks.emplace_back(random_block(rng, d, base, rows, b == 0 ? 0 : -1, true));
  }
  return u;
}

Vec random_member(std::mt19937_64& rng, const GenCone& c) {
  Vec v(c.dim, Rational(0));
  for (const auto& r : c.rays) v = add(v, scale(r, rnd(rng, 0, 3)));
  for (const auto& l : c.lineality) v = add(v, scale(l, rnd(rng, -3, 3)));
  return v;
}

// ---------------------------------------------------------------------------

Outcome catalog_matrix() {
  auto t0 = Clock::now();
  CatalogReport r = run_catalog();
  double secs = seconds_since(t0);
  const std::vector<std::tuple<std::string, std::string, std::string>> required{
      {"ex3.1", "m_stat", "Refuted"}, {"ex3.1", "am_stat", "Certified"}, {"ex3.2", "fjm", "Proved"},
      {"ex3.2", "am_stat", "Refuted"}, {"ex3.4", "am_reg", "Refuted"},  {"ex3.5", "am_reg", "Proved"},
      {"ex4.1", "dam_stat", "Refuted"}, {"ex4.2", "dam_reg", "Proved"}, {"ex4.2", "am_reg", "Refuted"},
      {"ex5.1", "am_reg", "Refuted"},  {"ex5.2", "am_reg", "Proved"},   {"ex5.2", "gacq", "Refuted"},
      {"ex5.2", "lin_cone", "whole"}};
  std::string missing;
  for (const auto& [id, check, expected] : required) {
    bool ok = false;
    for (const auto& e : r.entries)
      if (e.id == id)
        for (const auto& c : e.checks)
          if (c.check == check && c.expected == expected && c.outcome == "pass") ok = true;
    if (!ok) missing += " " + id + ":" + check;
  }
  Outcome o;
  o.pass = r.hard == 0 && missing.empty() && secs < 60;
  std::ostringstream s;
  s << r.entries.size() << " entries, " << r.passed << " checks passed, " << r.hard << " hard, " << r.soft
    << " soft, " << secs << " s";
  if (!missing.empty()) s << "; required checks not passing:" << missing;
  o.detail = s.str();
  return o;
}

Outcome sequence_replays() {
  Outcome o{true, ""};
  for (const char* id : {"ex3.1", "ex3.4"}) {
    ProblemInstance p;
    for (auto& e : load_catalog())
      if (e.id == id) p = e;
    p.replay->ks = {Rational(10), Rational(100), Rational(1000), Rational(10000)};
    ReplayResult r = replay_sequence(p);
    bool ok = r.ok && r.checked == 4;
    o.pass = o.pass && ok;
    o.detail += std::string(o.detail.empty() ? "" : "; ") + id + " " + (ok ? "verified" : "FAILED") + " at " +
                std::to_string(r.checked) + " k values";
  }
  return o;
}

Outcome penalty_trace() {
  ProblemInstance p;
  for (auto& e : load_catalog())
    if (e.id == "ex3.1") p = e;
  PenaltyConfig cfg;
  cfg.ks = PenaltyConfig::schedule_up_to(1e6);
  cfg.tol_cap = 1e-6;
  auto t0 = Clock::now();
  AMTrace t = am_trace(p, p.point, cfg);
  TraceClassification c = classify_trace(t, p.point, p);
  double secs = seconds_since(t0);
  Outcome o;
  if (t.records.empty()) return {false, "empty trace (" + t.status + ")"};
  double worst = 0;
  for (const auto& r : t.records) worst = std::max(worst, r.residual);
  const auto& last = t.records.back();
  double growth = last.lambda[0] / t.records.front().lambda[0];
  bool abnormal = c.kind == TraceClass::Abnormal && c.lambda == Vec{Rational(1)};
  o.pass = t.status == "complete" && last.k == 1e6 && std::abs(last.x[0]) <= 1e-2 && worst <= 1e-6 &&
           growth >= 10 && abnormal && secs < 5;
  std::ostringstream s;
  s << "final k=" << last.k << " x=" << last.x[0] << ", max residual " << worst << ", lambda ratio " << growth
    << ", " << to_string(c.kind) << " lambda=" << to_string(c.lambda) << ", " << secs << " s";
  o.detail = s.str();
  return o;
}

Outcome oracle_equivalence(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto t0 = Clock::now();
  std::size_t disagreements = 0, queries = 0, instances = 0, stray_rays = 0;
  std::string first;
  for (int inst = 0; inst < 70; ++inst) {
    std::size_t d = inst < 50 ? 2 : 3;
    Vec ybar(d, Rational(0));
    PolyUnion s = random_union(rng, d, ybar, 3, 6);
    ConeUnion exact = limiting_normal_cone(s, ybar);
    BruteForceConfig bf;
    bf.seed = seed + inst;
    BruteForceCloud cloud = brute_force_limiting_cone(s, ybar, bf);
    ++instances;
    // Cloud generators are exact regular normals; each must lie in the
    // exact limiting cone.
    for (const auto& c : cloud.cones)
      for (const auto& g : c.all_generators())
        if (!cone_union_membership(exact, g).member) ++stray_rays;
    for (int q = 0; q < 200; ++q) {
      Vec v;
      int kind = q % 3;
      if (kind == 0 || exact.branches.empty() || cloud.cones.empty()) {
        v = random_int_vec(rng, d, -4, 4);
      } else if (kind == 1) {
        v = random_member(rng, exact.branches[rnd(rng, 0, static_cast<long>(exact.branches.size()) - 1)]);
      } else {
        v = random_member(rng, cloud.cones[rnd(rng, 0, static_cast<long>(cloud.cones.size()) - 1)]);
      }
      bool a = cone_union_membership(exact, v).member;
      bool b = cloud.approaches(v, 1e-3);
      ++queries;
      if (a != b) {
        ++disagreements;
        if (first.empty()) first = "instance " + std::to_string(inst) + " v=" + to_string(v);
      }
    }
  }
  double secs = seconds_since(t0);
  Outcome o;
  o.pass = disagreements == 0 && stray_rays == 0 && secs < 120;
  std::ostringstream s;
  s << instances << " unions, " << queries << " queries, " << disagreements << " disagreements, " << stray_rays
    << " cloud generators outside the exact cone, " << secs << " s";
  if (!first.empty()) s << "; first: " << first;
  o.detail = s.str();
  return o;
}

Outcome cone_calculus(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::size_t fails = 0;
  std::string first;
  auto fail = [&](const std::string& what) {
    ++fails;
    if (first.empty()) first = what;
  };
  for (int inst = 0; inst < 100; ++inst) {
    std::size_t d = 2 + inst % 2;
    HPolyhedron h(d);
    std::size_t rows = rnd(rng, 2, 6);
    for (std::size_t i = 0; i < rows; ++i) h.add_le(random_int_vec(rng, d, -3, 3), rnd(rng, 0, 3));
    // Reference point: an LP optimum over h intersected with a box, so that
    // vertices and faces of every dimension occur.
    HPolyhedron boxed = h;
    for (std::size_t i = 0; i < d; ++i) {
      Vec e(d, Rational(0));
      e[i] = 1;
      boxed.add_le(e, 5);
      e[i] = -1;
      boxed.add_le(e, 5);
    }
    LpResult lp = lp_feasible(boxed, random_int_vec(rng, d, -2, 2, false));
    Vec ybar = lp.status == LpStatus::Optimal ? lp.point : Vec(d, Rational(0));
    if (rnd(rng, 0, 4) == 0) ybar = Vec(d, Rational(0));

    GenCone N = normal_cone_convex(h, ybar);
    HPolyhedron T = tangent_cone_convex(h, ybar);
    GenCone Tg = to_generators(T);
    std::string tag = "polyhedron " + std::to_string(inst);
    if (!same_cone(polar_h(polar(N)), N)) fail(tag + ": polar involution on N");
    if (!same_cone(polar_h(polar(Tg)), Tg)) fail(tag + ": polar involution on T");
    if (!same_cone(to_generators(polar(polar_h(T))), Tg)) fail(tag + ": polar involution on H-form");
    if (!same_cone(N, polar_h(T))) fail(tag + ": N != T polar");
    ConeUnion L = limiting_normal_cone(PolyUnion::of(h), ybar);
    if (L.branches.size() != 1 || !same_cone(L.branches[0], N)) fail(tag + ": limiting cone of convex set");
    // Normal cones at nearby points of the set stay inside N(ybar).
    for (int s = 0; s < 10; ++s) {
      Vec dir = Tg.all_generators().empty() ? Vec(d, Rational(0)) : random_member(rng, Tg);
      Vec y = add(ybar, scale(dir, Rational(1, 1000)));
      if (!h.contains(y)) continue;
      GenCone Ny = normal_cone_convex(h, y);
      if (!cone_subset(Ny, N)) fail(tag + ": nearby normal cone escapes");
      if (!same_cone(regular_normal_cone(PolyUnion::of(h), y), Ny)) fail(tag + ": regular cone mismatch");
    }
  }

  std::size_t grad_fails = 0;
  double worst = 0;
  std::vector<std::string> vars{"a", "b", "c"};
  for (int inst = 0; inst < 100; ++inst) {
    Polynomial p(vars);
    std::size_t terms = rnd(rng, 1, 6);
    for (std::size_t t = 0; t < terms; ++t)
      p.add_term({unsigned(rnd(rng, 0, 3)), unsigned(rnd(rng, 0, 3)), unsigned(rnd(rng, 0, 2))},
                 ratio(rnd(rng, -9, 9), rnd(rng, 1, 4)));
    DVec x{rnd(rng, -1000, 1000) / 1000.0, rnd(rng, -1000, 1000) / 1000.0, rnd(rng, -1000, 1000) / 1000.0};
    for (std::size_t i = 0; i < 3; ++i) {
      double g = p.differentiate(i).eval(x);
      double h = 1e-5;
      DVec xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      double fd = (p.eval(xp) - p.eval(xm)) / (2 * h);
      double rel = std::abs(g - fd) / std::max(1.0, std::abs(g));
      worst = std::max(worst, rel);
      if (rel > 1e-6) ++grad_fails;
    }
  }
  Outcome o;
  o.pass = fails == 0 && grad_fails == 0;
  std::ostringstream s;
  s << "100 polyhedra: " << fails << " property failures; 100 polynomials: " << grad_fails
    << " gradient mismatches (worst relative error " << worst << ")";
  if (!first.empty()) s << "; first: " << first;
  o.detail = s.str();
  return o;
}

ProblemInstance random_affine_instance(std::mt19937_64& rng, bool with_C) {
  ProblemInstance p;
  std::size_t n = rnd(rng, 2, 3), l = rnd(rng, 2, 3);
  p.id = "random-affine";
  p.variables = xvars(n);
  std::vector<Polynomial> comps;
  Vec c(l);
  for (std::size_t i = 0; i < l; ++i) {
    Polynomial g = Polynomial::constant(p.variables, rnd(rng, -1, 1));
    c[i] = g.constant_term();
    for (std::size_t j = 0; j < n; ++j) g += Polynomial::variable(p.variables, j) * Rational(rnd(rng, -2, 2));
    comps.push_back(g);
  }
  p.G = PolyMap(n, comps);
  p.K = random_union(rng, l, c, 3, 3);
  Vec zero(n, Rational(0));
  if (with_C) p.C = PolyUnion::of(random_block(rng, n, zero, rnd(rng, 1, 3), 0, false));
  Polynomial f(p.variables);
  for (std::size_t j = 0; j < n; ++j) {
    Exponent e(n, 0);
    e[j] = 1;
    f.add_term(e, rnd(rng, -2, 2));
    e[j] = 2;
    f.add_term(e, rnd(rng, 0, 2));
  }
  p.f = Objective::polynomial(f);
  p.point = zero;
  p.validate();
  return p;
}

Outcome consistency_sweep(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<ProblemInstance> all = load_catalog();
  std::size_t from_catalog = all.size();
  for (int i = 0; i < 50; ++i) all.push_back(random_affine_instance(rng, i % 2 == 1));
  std::size_t violations = 0, checked = 0;
  std::string first;
  for (std::size_t i = 0; i < all.size(); ++i) {
    const ProblemInstance& p = all[i];
    std::string tag = (i < from_catalog ? p.id : "random " + std::to_string(i - from_catalog));
    auto violate = [&](const std::string& what) {
      ++violations;
      if (first.empty()) first = tag + ": " + what;
    };
    try {
      Status m = m_stationarity_check(p, p.point).status;
      Status am = am_stationarity_check(p, p.point).status;
      Status fj = fjm_stationarity_check(p, p.point).status;
      Status reg = am_regularity_check(p, p.point).status;
      bool nn = nnamcq_check(p, p.point);
      bool poly = polyhedrality_check(p);
      if (m == Status::Proved && am == Status::Refuted) violate("M but not AM");
      if (am == Status::Proved && fj == Status::Refuted) violate("AM but not FJM");
      if (m == Status::Proved && fj == Status::Refuted) violate("M but not FJM");
      if (nn && reg == Status::Refuted) violate("NNAMCQ but AM-regularity refuted");
      if (poly && reg != Status::Proved) violate("polyhedral but AM-regularity not proved");
      if (am == Status::Proved && reg == Status::Proved && m == Status::Refuted) violate("AM and regular but not M");
      ++checked;
    } catch (const std::exception& e) {
      violate(std::string("error: ") + e.what());
    }
  }
  Outcome o;
  o.pass = violations == 0;
  std::ostringstream s;
  s << checked << " instances (" << from_catalog << " catalog, 50 random affine), " << violations << " violations";
  if (!first.empty()) s << "; first: " << first;
  o.detail = s.str();
  return o;
}

/// Smallest singular value of a 2x2 matrix.
double sigma_min(const Mat& j) {
  double a = j[0][0].get_d(), b = j[0][1].get_d(), c = j[1][0].get_d(), d = j[1][1].get_d();
  double p = a * a + c * c, q = a * b + c * d, r = b * b + d * d;
  double mean = 0.5 * (p + r), dev = std::sqrt(0.25 * (p - r) * (p - r) + q * q);
  return std::sqrt(std::max(0.0, mean - dev));
}

Outcome subregularity(std::uint64_t seed) {
  ProblemInstance e35;
  for (auto& e : load_catalog())
    if (e.id == "ex3.5") e35 = e;
  ProbeReport r = subregularity_probe(e35, e35.point, default_probe_directions(1));
  double at_01 = 0;
  for (const auto& s : r.samples)
    if (s.t == 1e-2) at_01 = std::max(at_01, s.ratio);

  std::mt19937_64 rng(seed);
  double worst = 0;
  int systems = 0;
  while (systems < 20) {
    Mat J(2, Vec(2));
    for (auto& row : J)
      for (auto& v : row) v = rnd(rng, -2, 2);
    if (sigma_min(J) < 0.5) continue;
    Vec c = random_int_vec(rng, 2, -1, 1, false);
    ProblemInstance p;
    p.id = "random-affine-system";
    p.variables = xvars(2);
    std::vector<Polynomial> comps;
    for (std::size_t i = 0; i < 2; ++i) {
      Polynomial g = Polynomial::constant(p.variables, c[i]);
      for (std::size_t j = 0; j < 2; ++j) g += Polynomial::variable(p.variables, j) * J[i][j];
      comps.push_back(g);
    }
    p.G = PolyMap(2, comps);
    p.K = random_union(rng, 2, c, 2, 4);
    p.f = Objective::polynomial(Polynomial(p.variables));
    p.point = Vec(2, Rational(0));
    // M = {x | J x + c ∈ K}, block by block.
    PolyUnion M(2);
    for (std::size_t b = 0; b < p.K.blocks.size(); ++b) {
      const HPolyhedron& k = p.K.poly(b);
      HPolyhedron h(2);
      for (std::size_t i = 0; i < k.rows(); ++i) h.add(mat_t_vec(J, k.A[i], 2), k.b[i] - dot(k.A[i], c), k.eq[i]);
      M.blocks.emplace_back(h);
    }
    p.M_explicit = M;
    p.validate();
    ProbeReport q = subregularity_probe(p, p.point, default_probe_directions(2));
    worst = std::max(worst, q.max_ratio);
    ++systems;
  }
  Outcome o;
  o.pass = at_01 >= 100 && worst <= 10;
  std::ostringstream s;
  s << "diverging example: ratio " << at_01 << " at t=1e-2; 20 random affine systems: max ratio " << worst;
  o.detail = s.str();
  return o;
}

Outcome calculus_rules(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::size_t bad = 0;
  std::string first;
  for (int inst = 0; inst < 20; ++inst) {
    std::size_t d = 2 + inst % 2;
    Vec xbar(d, Rational(0));
    PolyUnion K = random_union(rng, d, xbar, 3, 4);
    PolyUnion C = random_union(rng, d, xbar, 2, 4);
    RuleResult ir = intersection_rule_check(K, C, xbar);
    Verdict as = asymptotic_stability_check(K, C, xbar);
    if (ir.status != RuleStatus::Holds || as.status != Status::Proved) {
      ++bad;
      if (first.empty())
        first = "instance " + std::to_string(inst) + ": intersection " + to_string(ir.status) + ", stability " +
                to_string(as.status);
    }
  }
  Outcome o;
  o.pass = bad == 0;
  o.detail = "20 random (K, C) pairs, " + std::to_string(bad) + " not Holds/Proved" + (first.empty() ? "" : "; " + first);
  return o;
}

}  // namespace

int main() {
  std::uint64_t seed = 1;
  if (const char* s = std::getenv("VACONE_SEED")) seed = std::strtoull(s, nullptr, 10);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"catalog verdict matrix", catalog_matrix},
      {"exact sequence replays", sequence_replays},
      {"penalty trace, unbounded multipliers", penalty_trace},
      {"limiting cone vs brute force", [&] { return oracle_equivalence(seed); }},
      {"cone calculus and gradients", [&] { return cone_calculus(seed + 1); }},
      {"stationarity consistency sweep", [&] { return consistency_sweep(seed + 2); }},
      {"subregularity probe", [&] { return subregularity(seed + 3); }},
      {"intersection rule and stability", [&] { return calculus_rules(seed + 4); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    auto t0 = Clock::now();
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("criterion %zu [%s]: %s  %s (%.2f s)\n", i + 1, criteria[i].first.c_str(), o.pass ? "PASS" : "FAIL",
                o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
