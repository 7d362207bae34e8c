#include <doctest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "vacone/cones.hpp"
#include "vacone/projection.hpp"

using namespace vt;

namespace {

HPolyhedron orthant_neg2() { return H(2, {{1, 0, 0}, {0, 1, 0}}); }

// (R- x R) u (R+ x R-)
PolyUnion ex52_K() { return U(2, {H(2, {{1, 0, 0}}), H(2, {{-1, 0, 0}, {0, 1, 0}})}); }

// (R+ x {0}) u ({0} x R+)
PolyUnion mpcc() { return U(2, {H(2, {{-1, 0, 0}}, {{0, 1, 0}}), H(2, {{0, -1, 0}}, {{1, 0, 0}})}); }

bool same_union(const ConeUnion& a, const ConeUnion& b) {
  return cone_union_inclusion(a, b).verified && cone_union_inclusion(b, a).verified;
}

}  // namespace

TEST_CASE("tangent_cone_convex examples") {
  HPolyhedron d = orthant_neg2();
  HPolyhedron t0 = tangent_cone_convex(d, Vi({0, 0}));
  CHECK(same_cone(to_generators(t0), to_generators(d)));
  HPolyhedron t1 = tangent_cone_convex(d, Vi({-1, 0}));
  CHECK(same_cone(to_generators(t1), GenCone(2, {Vi({0, -1})}, {Vi({1, 0})})));
  HPolyhedron t2 = tangent_cone_convex(d, Vi({-1, -1}));
  CHECK(same_cone(to_generators(t2), GenCone::whole(2)));
}

TEST_CASE("normal_cone_convex examples") {
  CHECK(same_cone(normal_cone_convex(orthant_neg2(), Vi({0, 0})), GenCone(2, {Vi({1, 0}), Vi({0, 1})})));
  HPolyhedron origin(1);
  origin.add_eq(Vi({1}), 0);
  GenCone n0 = normal_cone_convex(origin, Vi({0}));
  CHECK(n0.contains(Vi({-5})));
  CHECK(n0.contains(Vi({5})));
  GenCone nr = normal_cone_convex(H(1, {{1, 0}}), Vi({0}));
  CHECK(nr.contains(Vi({1})));
  CHECK_FALSE(nr.contains(Vi({-1})));
}

TEST_CASE("polar examples") {
  HPolyhedron p1 = polar(GenCone(2, {Vi({1, 0}), Vi({0, 1})}));
  CHECK(same_cone(to_generators(p1), to_generators(orthant_neg2())));
  HPolyhedron p2 = polar(GenCone(2, {}, {Vi({1, 0})}));
  CHECK(p2.contains(Vi({0, 7})));
  CHECK_FALSE(p2.contains(Vi({1, 0})));
  HPolyhedron p3 = polar(GenCone(2, {Vi({1, 1})}));
  CHECK(p3.contains(Vi({1, -1})));
  CHECK(p3.contains(Vi({-1, -1})));
  CHECK_FALSE(p3.contains(Vi({1, 0})));
}

TEST_CASE("canonicalize and same_cone") {
  GenCone a(2, {Vi({2, 0}), Vi({0, 3}), Vi({1, 1})});
  GenCone b(2, {Vi({0, 1}), Vi({5, 0})});
  CHECK(same_cone(a, b));
  CHECK(canonicalize(a).rays.size() == 2);
  GenCone line(2, {Vi({1, 0}), Vi({-1, 0})});
  CHECK(canonicalize(line).lineality.size() == 1);
  CHECK(canonicalize(line).rays.empty());
}

TEST_CASE("project examples") {
  PolyUnion rminus = PolyUnion::of(H(1, {{1, 0}}));
  Projection p0 = project(rminus, V({"1/4"}));
  CHECK(p0.nearest[0] == doctest::Approx(0));
  CHECK(p0.dist == doctest::Approx(0.25));
  CHECK(p0.branch == 0);

  Projection p1 = project(ex52_K(), Vi({1, 1}));
  CHECK(p1.nearest[0] == doctest::Approx(0));
  CHECK(p1.nearest[1] == doctest::Approx(1));
  CHECK(p1.dist == doctest::Approx(1));
  CHECK(p1.branch == 0);
  ExactProjection e1 = project_exact(ex52_K(), Vi({1, 1}));
  CHECK(e1.nearest == Vi({0, 1}));
  CHECK(e1.dist2 == 1);
  CHECK(e1.branch == 0);

  SmoothConvexBlock parabola;
  parabola.dim = 2;
  parabola.g = {parse_polynomial("y1^2 - y2", {"y1", "y2"})};
  parabola.slater = Vi({0, 1});
  PolyUnion par(2, {parabola});
  Projection p2 = project(par, Vi({0, -1}));
  CHECK(p2.nearest[0] == doctest::Approx(0).epsilon(1e-9));
  CHECK(p2.nearest[1] == doctest::Approx(0).epsilon(1e-9));
  CHECK(p2.dist == doctest::Approx(1).epsilon(1e-9));
}

TEST_CASE("projection with redundant equalities") {
  // y1 = y2 stated twice plus y2 <= -1, y2 >= -1: the single point (-1, -1).
  HPolyhedron h = H(2, {{0, 1, -1}, {0, -1, 1}}, {{-1, 1, 0}, {1, -1, 0}});
  auto e = project_polyhedron(h, Vi({3, 0}));
  REQUIRE(e);
  CHECK(*e == Vi({-1, -1}));
  auto f = project_polyhedron(h, DVec{3.0, 0.0});
  REQUIRE(f);
  CHECK((*f)[0] == doctest::Approx(-1));
  CHECK((*f)[1] == doctest::Approx(-1));
  // A line given by three equivalent equalities.
  HPolyhedron line = H(2, {}, {{1, 1, 0}, {2, 2, 0}, {-1, -1, 0}});
  auto g = project_polyhedron(line, Vi({1, 0}));
  REQUIRE(g);
  CHECK(*g == V({"1/2", "-1/2"}));
}

TEST_CASE("projection onto a union matches a grid oracle") {
  // Grid search over a fine lattice of each block bounds the true distance
  // from above; the exact projection must not be worse.
  PolyUnion s = ex52_K();
  std::mt19937_64 rng(2);
  for (int t = 0; t < 20; ++t) {
    Vec z = {ratio(rint(rng, -20, 20), 10), ratio(rint(rng, -20, 20), 10)};
    ExactProjection e = project_exact(s, z);
    CHECK(s.contains(e.nearest));
    double best = 1e9;
    for (int i = -300; i <= 300; ++i)
      for (int j = -300; j <= 300; ++j) {
        double y0 = i / 100.0, y1 = j / 100.0;
        if (!(y0 <= 0 || y1 <= 0)) continue;
        double dx = y0 - z[0].get_d(), dy = y1 - z[1].get_d();
        best = std::min(best, dx * dx + dy * dy);
      }
    CHECK(e.dist2.get_d() <= best + 1e-12);
    CHECK(e.dist2.get_d() >= best - 2e-2);
  }
}

TEST_CASE("limiting_normal_cone examples") {
  ConeUnion n1 = limiting_normal_cone(ex52_K(), Vi({0, 0}));
  ConeUnion e1(2, {GenCone(2, {Vi({1, 0})}), GenCone(2, {Vi({0, 1})})});
  CHECK(same_union(n1, e1));

  ConeUnion n2 = limiting_normal_cone(mpcc(), Vi({0, 0}));
  ConeUnion e2(2, {GenCone(2, {Vi({-1, 0}), Vi({0, -1})}), GenCone(2, {}, {Vi({0, 1})}),
                   GenCone(2, {}, {Vi({1, 0})})});
  CHECK(same_union(n2, e2));
  CHECK_FALSE(cone_union_membership(n2, Vi({1, 1})).member);
  CHECK(cone_union_membership(n2, Vi({-1, -2})).member);

  HPolyhedron tri = H(2, {{-1, 0, 0}, {0, -1, 0}, {1, 1, 1}});
  for (auto y : {Vi({0, 0}), V({"1/2", "1/2"}), V({"1/4", "0"}), V({"1/4", "1/4"})}) {
    ConeUnion n = limiting_normal_cone(PolyUnion::of(tri), y);
    CHECK(same_union(n, ConeUnion::single(normal_cone_convex(tri, y))));
  }
}

TEST_CASE("cone_union_membership examples") {
  ConeUnion u(2, {GenCone(2, {Vi({1, 0})}), GenCone(2, {Vi({0, 1})})});
  Membership m = cone_union_membership(u, Vi({2, 0}));
  CHECK(m.member);
  CHECK(m.branch == 0);
  CHECK_FALSE(cone_union_membership(u, Vi({1, 1})).member);
  Membership z = cone_union_membership(u, Vi({0, 0}));
  CHECK(z.member);
  CHECK(z.branch == 0);
}

TEST_CASE("minkowski_sum examples") {
  ConeUnion a(2, {GenCone(2, {Vi({1, 0})})});
  ConeUnion b(2, {GenCone(2, {Vi({0, 1})})});
  ConeUnion s = minkowski_sum(a, b);
  CHECK(same_union(s, ConeUnion::single(GenCone(2, {Vi({1, 0}), Vi({0, 1})}))));
  ConeUnion u(2, {GenCone(2, {Vi({1, 0})}), GenCone(2, {Vi({0, 1})})});
  CHECK(same_union(minkowski_sum(u, ConeUnion::single(GenCone::zero(2))), u));
  ConeUnion l = minkowski_sum(ConeUnion::single(GenCone(2, {}, {Vi({0, 1})})),
                              ConeUnion::single(GenCone(2, {}, {Vi({1, 0})})));
  CHECK(same_union(l, ConeUnion::single(GenCone::whole(2))));
}

TEST_CASE("cone_union_inclusion examples") {
  ConeUnion rplus = ConeUnion::single(GenCone(1, {Vi({1})}));
  ConeUnion r = ConeUnion::single(GenCone::whole(1));
  InclusionResult a = cone_union_inclusion(rplus, r);
  CHECK(a.verified);
  InclusionResult b = cone_union_inclusion(r, rplus);
  CHECK_FALSE(b.verified);
  REQUIRE(b.counterexample);
  CHECK((*b.counterexample)[0] < 0);

  ConeUnion axes(2, {GenCone(2, {Vi({1, 0})}), GenCone(2, {Vi({0, 1})})});
  InclusionResult c = cone_union_inclusion(axes, ConeUnion::single(GenCone(2, {Vi({1, 0}), Vi({0, 1})})));
  CHECK(c.verified);
  CHECK(c.exact);
}

TEST_CASE("inclusion into a union of two half-cones covering a convex cone") {
  // R^2_+ ⊆ cone{e1,(1,1)} ∪ cone{(1,1),e2} although no single branch holds it.
  ConeUnion s = ConeUnion::single(GenCone(2, {Vi({1, 0}), Vi({0, 1})}));
  ConeUnion v(2, {GenCone(2, {Vi({1, 0}), Vi({1, 1})}), GenCone(2, {Vi({1, 1}), Vi({0, 1})})});
  CHECK(cone_union_inclusion(s, v).verified);
  ConeUnion gap(2, {GenCone(2, {Vi({1, 0}), Vi({2, 1})}), GenCone(2, {Vi({1, 1}), Vi({0, 1})})});
  InclusionResult r = cone_union_inclusion(s, gap);
  CHECK_FALSE(r.verified);
  REQUIRE(r.counterexample);
  CHECK(cone_union_membership(s, *r.counterexample).member);
  CHECK_FALSE(cone_union_membership(gap, *r.counterexample).member);
}

TEST_CASE("realizable patterns of the complementarity set") {
  auto pats = realizable_patterns(mpcc(), Vi({0, 0}));
  // The vertex itself, and the two open half-axes.
  CHECK(pats.size() == 3);
  for (const auto& p : pats) {
    Vec y = p.direction;
    for (auto& c : y) c /= 1000;
    CHECK(mpcc().contains(y));
  }
}

TEST_CASE("capacity limits are enforced") {
  HPolyhedron big(2);
  for (int i = 0; i < 21; ++i) big.add_le(Vi({1, i}), 0);
  CHECK_THROWS_AS(realizable_patterns(PolyUnion::of(big), Vi({0, 0})), CapacityError);
}
