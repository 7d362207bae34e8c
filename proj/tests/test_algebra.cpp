#include <doctest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "vacone/double_description.hpp"
#include "vacone/expr.hpp"
#include "vacone/linalg.hpp"
#include "vacone/lp.hpp"

using namespace vt;

TEST_CASE("rational parsing and printing") {
  CHECK(parse_rational("3/6") == Rational(1, 2));
  CHECK(parse_rational("-7") == -7);
  CHECK(parse_rational("0.125") == Rational(1, 8));
  CHECK(to_string(ratio(-4, 6)) == "-2/3");
  CHECK(to_string(Rational(5)) == "5");
  CHECK_THROWS_AS(parse_rational("1/0"), Error);
  CHECK_THROWS_AS(parse_rational("abc"), Error);
}

TEST_CASE("from_double is exact and snap finds simple fractions") {
  CHECK(from_double(0.375) == Rational(3, 8));
  CHECK(snap(1.0 / 3.0 + 1e-12, 1e-9) == Rational(1, 3));
  CHECK(snap(-0.9999999999, 1e-8) == -1);
  CHECK(snap(0.5, 1e-12) == Rational(1, 2));
}

TEST_CASE("primitive and normalize_leading") {
  CHECK(primitive(V({"2/3", "-4/3"})) == Vi({1, -2}));
  CHECK(normalize_leading(Vi({0, -4, 2})) == V({"0", "-1", "1/2"}));
}

TEST_CASE("rref, null space and solve") {
  Mat m = Mi({{1, 2, 3}, {2, 4, 6}, {1, 0, 1}});
  CHECK(rank(m, 3) == 2);
  Mat ns = null_space(m, 3);
  REQUIRE(ns.size() == 1);
  CHECK(is_zero(mat_vec(m, ns[0])));
  auto x = solve(m, Vi({6, 12, 2}), 3);
  REQUIRE(x);
  CHECK(mat_vec(m, *x) == Vi({6, 12, 2}));
  CHECK_FALSE(solve(m, Vi({6, 13, 2}), 3));
}

TEST_CASE("dense solve agrees with exact solve") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    Mat a(3, Vec(3));
    std::vector<DVec> ad(3, DVec(3));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        a[i][j] = rint(rng, -5, 5);
        ad[i][j] = a[i][j].get_d();
      }
    Vec b = Vi({rint(rng, -5, 5), rint(rng, -5, 5), rint(rng, -5, 5)});
    if (rank(a, 3) < 3) continue;
    auto xe = solve(a, b, 3);
    auto xd = solve_dense(ad, to_double(b));
    REQUIRE(xe);
    REQUIRE(xd);
    for (int i = 0; i < 3; ++i) CHECK((*xd)[i] == doctest::Approx((*xe)[i].get_d()).epsilon(1e-10));
  }
}

TEST_CASE("lp examples") {
  SUBCASE("bounded maximum") {
    HPolyhedron h = H(1, {{1, 0}, {-1, 0}});
    LpResult r = lp_feasible(h, Vi({1}));
    CHECK(r.status == LpStatus::Optimal);
    CHECK(r.value == 0);
    CHECK(r.point == Vi({0}));
  }
  SUBCASE("infeasible") {
    HPolyhedron h = H(1, {{-1, -1}, {1, 0}});
    CHECK(lp_feasible(h).status == LpStatus::Infeasible);
  }
  SUBCASE("unbounded with ray") {
    HPolyhedron h = H(1, {{-1, 0}});
    LpResult r = lp_feasible(h, Vi({1}));
    CHECK(r.status == LpStatus::Unbounded);
    REQUIRE(r.ray.size() == 1);
    CHECK(r.ray[0] > 0);
  }
}

TEST_CASE("lp optimum matches brute-force vertex enumeration") {
  // Random bounded 2-D LPs; the optimum of a polytope sits at a vertex, so
  // the oracle intersects every row pair and keeps the best feasible point.
  std::mt19937_64 rng(11);
  for (int t = 0; t < 40; ++t) {
    LpProblem lp(2);
    for (int i = 0; i < 5; ++i) lp.add_le(Vi({rint(rng, -4, 4), rint(rng, -4, 4)}), rint(rng, 0, 6));
    for (auto a : {Vi({1, 0}), Vi({-1, 0}), Vi({0, 1}), Vi({0, -1})}) lp.add_le(a, 10);
    lp.objective = Vi({rint(rng, -3, 3), rint(rng, -3, 3)});
    LpResult r = solve_lp(lp);
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(satisfies(lp, r.point));
    bool found = false;
    Rational best;
    for (std::size_t i = 0; i < lp.A.size(); ++i)
      for (std::size_t j = i + 1; j < lp.A.size(); ++j) {
        auto x = solve({lp.A[i], lp.A[j]}, {lp.b[i], lp.b[j]}, 2);
        if (!x || rank({lp.A[i], lp.A[j]}, 2) < 2 || !satisfies(lp, *x)) continue;
        Rational v = dot(lp.objective, *x);
        if (!found || v > best) best = v;
        found = true;
      }
    REQUIRE(found);
    CHECK(r.value == best);
  }
}

TEST_CASE("double description of an orthant and a wedge") {
  // R^2_- = {x | x1 <= 0, x2 <= 0}: rays -e1, -e2.
  ConeGenerators g = double_description(Mi({{1, 0}, {0, 1}}), {}, 2);
  CHECK(g.lineality.empty());
  CHECK(g.rays.size() == 2);
  GenCone c(2, g.rays, g.lineality);
  CHECK(c.contains(Vi({-1, -3})));
  CHECK_FALSE(c.contains(Vi({1, 0})));

  // Half-plane x1 <= 0 has lineality e2.
  ConeGenerators h = double_description(Mi({{1, 0}}), {}, 2);
  CHECK(h.lineality.size() == 1);
  CHECK(h.rays.size() == 1);

  // {x3 = 0, x1 >= |x2|} in R^3.
  ConeGenerators w = double_description(Mi({{-1, 1, 0}, {-1, -1, 0}}), Mi({{0, 0, 1}}), 3);
  CHECK(w.lineality.empty());
  CHECK(w.rays.size() == 2);
}

TEST_CASE("double description round trip on random cones") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 30; ++t) {
    std::size_t d = 3;
    Mat le;
    for (int i = 0; i < 4; ++i) le.push_back(Vi({rint(rng, -3, 3), rint(rng, -3, 3), rint(rng, -3, 3)}));
    ConeGenerators g = double_description(le, {}, d);
    GenCone c(d, g.rays, g.lineality);
    // Every generator satisfies the H-form; random H-feasible lattice points
    // are generated.
    for (const auto& r : c.all_generators())
      for (const auto& a : le) CHECK(dot(a, r) <= 0);
    for (int s = 0; s < 30; ++s) {
      Vec v = Vi({rint(rng, -4, 4), rint(rng, -4, 4), rint(rng, -4, 4)});
      bool in = true;
      for (const auto& a : le) in = in && dot(a, v) <= 0;
      CHECK(c.contains(v) == in);
    }
  }
}

TEST_CASE("parse_polynomial examples") {
  std::vector<std::string> xy{"x1", "x2"};
  Polynomial p = parse_polynomial("-x1^2 + x2", xy);
  REQUIRE(p.terms().size() == 2);
  CHECK(p.terms().at({2, 0}) == -1);
  CHECK(p.terms().at({0, 1}) == 1);
  CHECK(parse_polynomial("0", {"x1"}).is_zero());
  Polynomial q = parse_polynomial("3/2*x1*x2^3", xy);
  REQUIRE(q.terms().size() == 1);
  CHECK(q.terms().at({1, 3}) == Rational(3, 2));
  CHECK(parse_polynomial("(x1 + x2)^2 - x1^2 - x2^2", xy) == parse_polynomial("2*x1*x2", xy));
  CHECK(parse_polynomial("x1/4", xy) == parse_polynomial("0.25*x1", xy));
}

TEST_CASE("parse errors carry offsets") {
  std::vector<std::string> x{"x"};
  CHECK_THROWS_AS(parse_polynomial("x +", x), ParseError);
  CHECK_THROWS_AS(parse_polynomial("y", x), ParseError);
  CHECK_THROWS_AS(parse_polynomial("1/x", x), ParseError);
  CHECK_THROWS_AS(parse_polynomial("(x", x), ParseError);
  try {
    parse_polynomial("x + z", x);
  } catch (const ParseError& e) {
    CHECK(e.offset() == 4);
  }
}

TEST_CASE("eval examples") {
  std::vector<std::string> xy{"x1", "x2"};
  CHECK(parse_polynomial("-x1^2 + x2", xy).eval(V({"-1/2", "0"})) == Rational(-1, 4));
  CHECK(parse_polynomial("x^3", {"x"}).eval(Vi({2})) == 8);
  CHECK(parse_polynomial("x1 + x2", xy).eval(V({"1/3", "2/3"})) == 1);
}

TEST_CASE("differentiate examples") {
  std::vector<std::string> xy{"x1", "x2"};
  CHECK(parse_polynomial("x^3", {"x"}).differentiate(0) == parse_polynomial("3*x^2", {"x"}));
  Polynomial p = parse_polynomial("-x1^2 + x2", xy);
  CHECK(p.differentiate(0) == parse_polynomial("-2*x1", xy));
  CHECK(p.differentiate(1) == Polynomial::constant(xy, 1));
}

TEST_CASE("jacobian examples") {
  PolyMap g(1, {parse_polynomial("x", {"x"}), parse_polynomial("x^3", {"x"})});
  CHECK(jacobian(g, Vi({0})) == Mi({{1}, {0}}));
  CHECK(jacobian(g, Vi({1})) == Mi({{1}, {3}}));
  std::vector<std::string> xy{"x1", "x2"};
  PolyMap h(2, {parse_polynomial("-x1^2 + x2", xy), parse_polynomial("-x2", xy)});
  for (long k : {1L, 7L, 1000L}) {
    Mat j = jacobian(h, Vec{Rational(-1, k), 0});
    CHECK(j == Mat{{ratio(2, k), 1}, {0, -1}});
    // Central differences on the float path.
    DVec x{-1.0 / k, 0.0};
    auto jd = h.jacobian(x);
    for (std::size_t c = 0; c < 2; ++c) {
      double step = 1e-6;
      DVec xp = x, xm = x;
      xp[c] += step;
      xm[c] -= step;
      DVec gp = h.eval(xp), gm = h.eval(xm);
      for (std::size_t r = 0; r < 2; ++r) {
        CHECK(jd[r][c] == doctest::Approx((gp[r] - gm[r]) / (2 * step)).epsilon(1e-6));
        CHECK(jd[r][c] == doctest::Approx(j[r][c].get_d()));
      }
    }
  }
}

TEST_CASE("canonical text round trip") {
  std::mt19937_64 rng(17);
  std::vector<std::string> vars{"a", "b", "c"};
  for (int t = 0; t < 50; ++t) {
    Polynomial p(vars);
    for (int i = 0; i < 5; ++i)
      p.add_term({unsigned(rint(rng, 0, 3)), unsigned(rint(rng, 0, 3)), unsigned(rint(rng, 0, 2))},
                 ratio(rint(rng, -9, 9), rint(rng, 1, 5)));
    CHECK(parse_polynomial(p.to_string(), vars) == p);
  }
}

TEST_CASE("compose_affine substitutes exactly") {
  std::vector<std::string> xy{"x1", "x2"};
  Polynomial p = parse_polynomial("x1^2*x2 - 3*x2", xy);
  Vec o = Vi({1, -1});
  Mat R = Mi({{2}, {1}});
  Polynomial q = p.compose_affine(o, R, {"s"});
  for (long s : {-3L, 0L, 2L, 5L}) {
    Vec x = {o[0] + R[0][0] * s, o[1] + R[1][0] * s};
    CHECK(q.eval(Vi({s})) == p.eval(x));
  }
}
