#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "vacone/penalty.hpp"

using namespace vt;

namespace {

// Root of 1 + 2k x^3 + x = 0 (the stationarity equation of the penalized
// problem for f = x, G = x^2, K = R_- on x < 0) by bisection.
double cubic_root(double k) {
  double lo = -1, hi = 0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (1 + 2 * k * mid * mid * mid + mid > 0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("schedule and inner tolerances") {
  PenaltyConfig cfg;
  CHECK(PenaltyConfig::schedule_up_to(1) == std::vector<double>{1});
  CHECK(PenaltyConfig::schedule_up_to(5e3) == std::vector<double>{1, 10, 100, 1000, 5000});
  CHECK(cfg.inner_tol(1) == doctest::Approx(1e-2));
  CHECK(cfg.inner_tol(1e3) == doctest::Approx(1e-5));
  CHECK(cfg.inner_tol(1e12) == doctest::Approx(1e-9));
  cfg.tol_cap = 1e-6;
  CHECK(cfg.inner_tol(10) == doctest::Approx(1e-6));
}

TEST_CASE("penalty_objective closed forms") {
  ProblemInstance p = catalog_entry("ex3.1");
  PenaltyEval e = penalty_objective(p, 1, {0.0}, {1.0});
  CHECK(e.value == doctest::Approx(2));
  CHECK(e.gradient[0] == doctest::Approx(4));

  PenaltyEval f = penalty_objective(p, 1e3, {0.0}, {0.0});
  CHECK(f.value == doctest::Approx(0));
  CHECK(f.gradient[0] == doctest::Approx(1));

  PenaltyEval z = penalty_objective(p, 0, {0.0}, {0.5});
  CHECK(z.value == doctest::Approx(0.5 + 0.125));
  CHECK(z.gradient[0] == doctest::Approx(1.5));
}

TEST_CASE("penalty gradient matches central differences") {
  for (const char* id : {"ex3.1", "ex3.4", "mpcc", "ccp-affine", "ex5.2"}) {
    ProblemInstance p = catalog_entry(id);
    CAPTURE(id);
    std::size_t n = p.n();
    DVec ref(n, 0.0), x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = 0.3 - 0.17 * double(i);
    PenaltyEval e = penalty_objective(p, 10, ref, x);
    for (std::size_t i = 0; i < n; ++i) {
      double h = 1e-6;
      DVec xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      double fd = (penalty_objective(p, 10, ref, xp).value - penalty_objective(p, 10, ref, xm).value) / (2 * h);
      CHECK(e.gradient[i] == doctest::Approx(fd).epsilon(1e-5));
    }
  }
}

TEST_CASE("solve_subproblem matches the cubic oracle") {
  ProblemInstance p = catalog_entry("ex3.1");
  for (double k : {1.0, 1e2, 1e4, 1e6}) {
    CAPTURE(k);
    SubproblemResult r = solve_subproblem(p, k, {0.0}, {0.0}, 1e-9);
    CHECK(r.converged);
    CHECK(r.stationarity <= 1e-9);
    CHECK(r.x[0] == doctest::Approx(cubic_root(k)).epsilon(1e-7));
  }
  CHECK(cubic_root(1e6) == doctest::Approx(-7.9e-3).epsilon(1e-2));
}

TEST_CASE("solve_subproblem stays put at a feasible stationary point") {
  ProblemInstance p = catalog_entry("ex3.4");
  SubproblemResult r = solve_subproblem(p, 1e3, {0.0, 0.0}, {0.0, 0.0}, 1e-9);
  CHECK(r.converged);
  CHECK(std::abs(r.x[0]) <= 1e-9);
  CHECK(std::abs(r.x[1]) <= 1e-9);
}

TEST_CASE("solve_subproblem agrees with a grid search") {
  ProblemInstance p = catalog_entry("ex3.4");
  DVec ref{0.0, 0.0};
  for (double k : {1.0, 100.0}) {
    double best = 1e300;
    DVec arg;
    for (int i = -100; i <= 100; ++i)
      for (int j = -100; j <= 100; ++j) {
        DVec x{i * 1e-3, j * 1e-3};
        double v = penalty_objective(p, k, ref, x).value;
        if (v < best) best = v, arg = x;
      }
    SubproblemResult r = solve_subproblem(p, k, ref, {0.05, -0.03}, 1e-9);
    CHECK(r.value <= best + 1e-12);
    CHECK(std::abs(r.x[0] - arg[0]) <= 2e-3);
    CHECK(std::abs(r.x[1] - arg[1]) <= 2e-3);
  }
}

TEST_CASE("am_trace on the square constraint shows unbounded multipliers") {
  ProblemInstance p = catalog_entry("ex3.1");
  PenaltyConfig cfg;
  cfg.tol_cap = 1e-6;
  AMTrace t = am_trace(p, Vi({0}), cfg);
  REQUIRE(t.status == "complete");
  REQUIRE(t.records.size() == 7);
  for (const auto& r : t.records) {
    CAPTURE(r.k);
    CHECK(r.residual <= r.inner_tol);
    CHECK(r.x[0] == doctest::Approx(cubic_root(r.k)).epsilon(1e-6));
    // λ_k = k x_k^2
    CHECK(r.lambda[0] == doctest::Approx(r.k * r.x[0] * r.x[0]).epsilon(1e-9));
    CHECK(r.normal_verified);
  }
  CHECK(std::abs(t.records.back().x[0]) <= 1e-2);
  CHECK(t.records.back().lambda[0] / t.records.front().lambda[0] >= 10);

  TraceClassification c = classify_trace(t, Vi({0}), p);
  CHECK(c.kind == TraceClass::Abnormal);
  CHECK(c.lambda == Vi({1}));
}

TEST_CASE("am_trace multipliers approach the KKT multiplier") {
  ProblemInstance p = catalog_entry("ccp-affine");
  Verdict m = m_stationarity_check(p, p.point);
  REQUIRE(m.status == Status::Proved);
  const Vec& kkt = *m.find("lambda");
  AMTrace t = am_trace(p, p.point);
  REQUIRE(t.status == "complete");
  const auto& last = t.records.back();
  for (std::size_t i = 0; i < kkt.size(); ++i) CHECK(last.lambda[i] == doctest::Approx(kkt[i].get_d()).epsilon(1e-3));
  TraceClassification c = classify_trace(t, p.point, p);
  CHECK(c.kind == TraceClass::MLimit);
}

TEST_CASE("penalty residual is monotone and vanishes at minimizers") {
  for (const char* id : {"ex3.1", "ex3.4", "mpcc", "mpvc", "mpsc", "ccp-affine", "ccp-linear"}) {
    ProblemInstance p = catalog_entry(id);
    CAPTURE(id);
    AMTrace t = am_trace(p, p.point);
    REQUIRE(t.status == "complete");
    double prev = 1e300;
    for (const auto& r : t.records) {
      double y2 = 0;
      for (double v : r.y) y2 += v * v;
      CHECK(y2 <= prev * 1.1 + 1e-300);
      prev = y2;
      CHECK(r.residual <= r.inner_tol);
    }
    double yn = 0;
    for (double v : t.records.back().y) yn += v * v;
    CHECK(std::sqrt(yn) <= 1e-3);
  }
}

TEST_CASE("NNAMCQ instances classify as bounded") {
  for (const char* id : {"mpcc", "ccp-linear"}) {
    ProblemInstance p = catalog_entry(id);
    CAPTURE(id);
    REQUIRE(nnamcq_check(p, p.point));
    CHECK(classify_trace(am_trace(p, p.point), p.point, p).kind == TraceClass::MLimit);
  }
}

TEST_CASE("classify_trace on a constant zero trace") {
  ProblemInstance p = catalog_entry("mpcc");
  AMTrace t;
  for (double k : {1.0, 10.0, 100.0}) {
    TraceRecord r;
    r.k = k;
    r.x = {0, 0};
    r.y = {0, 0};
    r.lambda = {0, 0};
    r.nu = {0, 0};
    r.eps = {0, 0};
    t.records.push_back(r);
  }
  // f = x1 + x2 needs λ = (-1,-1), so the zero multiplier is not a certificate.
  CHECK(classify_trace(t, Vi({0, 0}), p).kind == TraceClass::Inconclusive);
  ProblemInstance q = catalog_entry("ex3.4");
  TraceClassification c = classify_trace(t, Vi({0, 0}), q);
  CHECK(c.kind == TraceClass::MLimit);
  CHECK(is_zero(c.lambda));
}

TEST_CASE("trace_csv format") {
  ProblemInstance p = catalog_entry("ex3.1");
  PenaltyConfig cfg;
  cfg.ks = {1};
  AMTrace t = am_trace(p, Vi({0}), cfg);
  std::string csv = trace_csv(t);
  CHECK(csv.rfind("k,x1,y_norm,lambda_norm,eps_norm,branch\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
}

TEST_CASE("verify_normal") {
  PolyUnion rminus = PolyUnion::of(H(1, {{1, 0}}));
  CHECK(verify_normal(rminus, 0, {0.0}, {1.0}));
  CHECK_FALSE(verify_normal(rminus, 0, {0.0}, {-1.0}));
  CHECK_FALSE(verify_normal(rminus, 0, {-1.0}, {1.0}));
  CHECK(verify_normal(rminus, 0, {-1.0}, {0.0}));
}

TEST_CASE("decoupled trace keeps iterates in C") {
  ProblemInstance p = catalog_entry("ex4.2");
  PenaltyConfig cfg;
  cfg.decoupled = true;
  AMTrace t = am_trace(p, p.point, cfg);
  CHECK(t.decoupled);
  for (const auto& r : t.records) CHECK(r.x[0] >= 0);
}
