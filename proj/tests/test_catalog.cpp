#include <doctest.h>

#include "support.hpp"

using namespace vt;

TEST_CASE("catalog loads and round-trips") {
  auto entries = load_catalog();
  CHECK(entries.size() >= 10);
  for (const auto& p : entries) {
    CAPTURE(p.id);
    std::string once = dump_problem(p);
    ProblemInstance q = parse_problem(once);
    CHECK(dump_problem(q) == once);
    CHECK(q.id == p.id);
    CHECK(q.expected == p.expected);
    CHECK(p.feasible(p.point));
  }
}

TEST_CASE("expected keys are known") {
  const auto& keys = expected_keys();
  for (const auto& p : load_catalog())
    for (const auto& [k, v] : p.expected) CHECK(std::find(keys.begin(), keys.end(), k) != keys.end());
}

TEST_CASE("schema errors name the entry") {
  const char* base = R"({"schema_version": 1, "id": "broken", "variables": ["x"],
      "objective": {"kind": "polynomial", "expr": "x"}, "G": ["x"],
      "K": {"union": [{"rows": [[1, 0, "le"]]}]}, "point": ["0"])";
  CHECK_NOTHROW(parse_problem(std::string(base) + "}"));
  auto expect_schema = [&](const std::string& tail) {
    try {
      parse_problem(std::string(base) + tail);
      FAIL("accepted " << tail);
    } catch (const SchemaError& e) {
      CHECK(std::string(e.what()).find("broken") != std::string::npos);
    }
  };
  expect_schema(R"(, "expected": {"am_reg": 3}})");
  expect_schema(R"(, "C": {"union": [{"rows": [[1, 0, 0, "le"]]}]}})");
  expect_schema(R"(, "schema_version": 2})");
  CHECK_THROWS_AS(parse_problem("{"), SchemaError);
  CHECK_THROWS_AS(parse_problem(R"({"variables": ["x"], "objective": {"kind": "polynomial", "expr": "x +"},
      "G": ["x"], "K": {"union": [{"rows": [[1, 0, "le"]]}]}, "point": ["0"]})"),
                  Error);
}

TEST_CASE("rationals serialize as strings") {
  CHECK(rational_to_json(Rational(-3, 4)) == "-3/4");
  CHECK(rational_from_json(Json("5/10")) == Rational(1, 2));
  CHECK(rational_from_json(Json(7)) == 7);
  CHECK(vec_from_json(vec_to_json(V({"1/3", "-2"}))) == V({"1/3", "-2"}));
  GenCone c(2, {Vi({1, 0})}, {Vi({0, 1})});
  GenCone d = cone_from_json(cone_to_json(c), 2);
  CHECK(same_cone(c, d));
}

TEST_CASE("verdict json round trip") {
  ProblemInstance p = catalog_entry("ex3.4");
  Verdict v = am_regularity_check(p, p.point);
  Verdict w = verdict_from_json(verdict_to_json(v));
  CHECK(w.status == v.status);
  CHECK(w.method == v.method);
  CHECK(verdict_to_json(w).dump() == verdict_to_json(v).dump());
  CHECK(verify_evidence(p, p.point, "am_reg", w).ok);
}

TEST_CASE("run_catalog has no hard failures") {
  CatalogReport r = run_catalog();
  CHECK(r.hard == 0);
  CHECK(r.soft == 0);
  CHECK(r.entries.size() >= 10);
  for (const auto& e : r.entries)
    for (const auto& c : e.checks) {
      CAPTURE(e.id);
      CAPTURE(c.check);
      CHECK(c.outcome == "pass");
    }
}

TEST_CASE("run_catalog filters by id") {
  CatalogReport r = run_catalog("5.2");
  REQUIRE(r.entries.size() == 1);
  CHECK(r.entries[0].id == "ex5.2");
}

TEST_CASE("a wrong expectation is a hard failure") {
  ProblemInstance p = catalog_entry("ex3.4");
  p.expected = {{"am_reg", "Proved"}};
  CatalogReport r = run_instances({p});
  CHECK(r.hard == 1);
}

TEST_CASE("catalog report json is deterministic") {
  CHECK(run_catalog("ex3").to_json().dump() == run_catalog("ex3").to_json().dump());
}

TEST_CASE("verify_evidence rejects tampered certificates") {
  ProblemInstance p = catalog_entry("ex5.2");
  Verdict v = m_stationarity_check(p, p.point);
  REQUIRE(v.status == Status::Proved);
  CHECK(verify_evidence(p, p.point, "m_stat", v).ok);
  for (auto& e : v.evidence)
    if (e.name == "lambda") e.value[0] += 1;
  CHECK_FALSE(verify_evidence(p, p.point, "m_stat", v).ok);

  ProblemInstance q = catalog_entry("ex3.4");
  Verdict r = am_regularity_check(q, q.point);
  for (auto& e : r.evidence)
    if (e.name == "witness") e.value = Vi({0, 1});
  CHECK_FALSE(verify_evidence(q, q.point, "am_reg", r).ok);
}
