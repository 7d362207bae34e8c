#include "vacone/calculus.hpp"

#include <cmath>
#include <random>

#include "vacone/maps.hpp"
#include "vacone/projection.hpp"

namespace vacone {

std::string to_string(RuleStatus s) {
  switch (s) {
    case RuleStatus::Holds: return "Holds";
    case RuleStatus::Violated: return "Violated";
    default: return "Unknown";
  }
}

bool BruteForceCloud::contains(const Vec& v) const {
  if (is_zero(v)) return true;
  for (const auto& c : cones)
    if (c.contains(v)) return true;
  return false;
}

bool BruteForceCloud::approaches(const Vec& v, double tol) const {
  if (contains(v)) return true;
  Rational bound = norm1(v) * from_double(tol);
  for (const auto& c : cones)
    if (l1_distance(c, v) <= bound) return true;
  return false;
}

BruteForceCloud brute_force_limiting_cone(const PolyUnion& s, const Vec& ybar, const BruteForceConfig& cfg) {
  if (!s.purely_polyhedral()) throw Error("brute-force oracle needs polyhedral blocks");
  if (!s.contains(ybar)) throw DomainError("point " + to_string(ybar) + " is not in the set");
  for (std::size_t i = 1; i < cfg.radii.size(); ++i)
    if (!(cfg.radii[i] < cfg.radii[i - 1])) throw Error("radii must be strictly decreasing");
  const std::size_t d = s.dim;
  BruteForceCloud out;
  out.dim = d;
  auto record = [&](const Vec& y) {
    GenCone c = canonicalize(regular_normal_cone(s, y));
    if (c.is_zero()) return;
    for (const auto& e : out.cones)
      if (same_cone(e, c)) return;
    for (const auto& g : c.all_generators()) {
      DVec r = to_double(g);
      double nr = norm2(r);
      for (auto& v : r) v /= nr;
      out.rays.push_back(r);
    }
    out.cones.push_back(std::move(c));
  };
  record(ybar);
  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<int> coord(-1000, 1000);
  for (const Rational& r : cfg.radii) {
    for (std::size_t k = 0; k < cfg.samples_per_radius; ++k) {
      Vec u(d);
      for (auto& v : u) v = ratio(coord(rng), 1000);
      Vec z = add(ybar, scale(u, r));
      const Rational reach = r * r * static_cast<long>(d);
      for (std::size_t b = 0; b < s.blocks.size(); ++b) {
        auto y = project_polyhedron(s.poly(b), z);
        if (!y) continue;
        Vec e = sub(*y, ybar);
        if (dot(e, e) <= reach) record(*y);
      }
    }
  }
  return out;
}

PolyUnion intersect_unions(const PolyUnion& a, const PolyUnion& b) {
  if (a.dim != b.dim) throw DimensionError("intersection of unions of different dimension");
  if (!a.purely_polyhedral() || !b.purely_polyhedral()) throw Error("intersection needs polyhedral blocks");
  PolyUnion out(a.dim);
  for (std::size_t i = 0; i < a.blocks.size(); ++i) {
    for (std::size_t j = 0; j < b.blocks.size(); ++j) {
      HPolyhedron h = a.poly(i);
      const HPolyhedron& g = b.poly(j);
      for (std::size_t r = 0; r < g.rows(); ++r) h.add(g.A[r], g.b[r], g.eq[r]);
      if (!h.is_empty()) out.blocks.push_back(std::move(h));
    }
  }
  return out;
}

RuleResult intersection_rule_check(const PolyUnion& K, const PolyUnion& C, const Vec& xbar) {
  RuleResult out;
  if (!K.purely_polyhedral() || !C.purely_polyhedral()) {
    out.detail = "smooth blocks are not supported";
    return out;
  }
  if (!K.contains(xbar) || !C.contains(xbar)) throw DomainError("point " + to_string(xbar) + " is not in K ∩ C");
  ConeUnion left = limiting_normal_cone(intersect_unions(K, C), xbar);
  ConeUnion right = minkowski_sum(limiting_normal_cone(K, xbar), limiting_normal_cone(C, xbar));
  auto inc = cone_union_inclusion(left, right);
  if (inc.verified) {
    out.status = RuleStatus::Holds;
    out.detail = "N_{K∩C} has " + std::to_string(left.branches.size()) + " branches, all inside N_K + N_C (" +
                 std::to_string(right.branches.size()) + " branches)";
  } else {
    out.status = RuleStatus::Violated;
    out.witness = inc.counterexample;
    out.detail = "normal to K ∩ C outside N_K + N_C";
  }
  return out;
}

Verdict asymptotic_stability_check(const PolyUnion& K, const PolyUnion& C, const Vec& xbar) {
  if (!K.purely_polyhedral() || !C.purely_polyhedral())
    return Verdict::make(Status::Unknown, "unsupported", "smooth blocks present");
  if (!K.contains(xbar) || !C.contains(xbar)) throw DomainError("point " + to_string(xbar) + " is not in K ∩ C");
  auto pk = realizable_patterns(K, xbar);
  auto pc = realizable_patterns(C, xbar);
  ConeUnion ls(xbar.size());
  for (const auto& a : pk)
    for (const auto& b : pc) ls.branches.push_back(sum(a.cone, b.cone));
  ls = canonicalize(ls);
  ConeUnion right = minkowski_sum(limiting_normal_cone(K, xbar), limiting_normal_cone(C, xbar));
  auto inc = cone_union_inclusion(ls, right);
  if (inc.verified)
    return Verdict::make(Status::Proved, "pattern-enumeration",
                         std::to_string(pk.size()) + " x " + std::to_string(pc.size()) +
                             " nearby activity patterns, every sum inside N_K(x̄) + N_C(x̄)");
  Verdict v = Verdict::make(Status::Refuted, "pattern-enumeration", "nearby normal sum outside N_K(x̄) + N_C(x̄)");
  v.evidence.push_back({"witness", *inc.counterexample});
  return v;
}

RuleResult preimage_rule_check(const ProblemInstance& p, const Vec& xbar) {
  RuleResult out;
  if (!p.M_explicit || !p.M_explicit->purely_polyhedral()) {
    out.detail = "needs a polyhedral explicit description of the feasible set";
    return out;
  }
  if (!p.M_explicit->contains(xbar)) throw DomainError("point " + to_string(xbar) + " is not in M_explicit");
  ConeUnion nm = limiting_normal_cone(*p.M_explicit, xbar);
  ConeUnion mv = m_map_cones(GeometricConstraint::of(p), xbar, Vec(p.l(), Rational(0)));
  auto inc = cone_union_inclusion(nm, mv);
  if (inc.verified) {
    out.status = RuleStatus::Holds;
    out.detail = "N_M(x̄) ⊆ M(x̄, 0)";
  } else {
    out.status = RuleStatus::Violated;
    out.witness = inc.counterexample;
    out.detail = "normal to M outside M(x̄, 0)";
  }
  return out;
}

}  // namespace vacone
