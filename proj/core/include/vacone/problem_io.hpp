#pragma once

#include <string>

#include <json.hpp>

#include "vacone/problem.hpp"
#include "vacone/stationarity.hpp"

namespace vacone {

using Json = nlohmann::ordered_json;

/// Raised for structurally invalid problem files (wrong types, missing
/// fields, bad dimensions). Carries the entry id when known.
class SchemaError : public Error {
 public:
  using Error::Error;
};

inline constexpr int kSchemaVersion = 1;

/// Problem file, schema version 1. Rationals are "p/q" strings (integers are
/// accepted as JSON numbers too). K blocks live in y-space with variables
/// y1..yl; C and M_explicit blocks in x-space with the problem's variables.
///
///   {"schema_version": 1, "id", "description", "provenance",
///    "variables": [...],
///    "objective": {"kind": "polynomial", "expr": "..."}
///               | {"kind": "piecewise", "convexify": bool,
///                  "pieces": [{"region": {"rows": [...]}, "expr": "..."}]},
///    "G": [...], "K": union, "C": union?, "point": [...], "M_explicit": union?,
///    "expected": {check: verdict}?, "flags": [...]?,
///    "analytic": {...}?, "replay": {...}?}
///
/// union := {"union": [block...]}, block := {"rows": [[a..., rhs, "le"|"eq"]]}
///        | {"smooth": [expr...], "slater": [...], "convex": bool?}
/// cone  := {"rays": [[...]], "lineality": [[...]]}
ProblemInstance problem_from_json(const Json& j);
Json problem_to_json(const ProblemInstance& p);

ProblemInstance parse_problem(const std::string& text);
ProblemInstance load_problem(const std::string& path);
std::string dump_problem(const ProblemInstance& p);

Json rational_to_json(const Rational& r);
Rational rational_from_json(const Json& j);
Json vec_to_json(const Vec& v);
Vec vec_from_json(const Json& j);
Json cone_to_json(const GenCone& c);
GenCone cone_from_json(const Json& j, std::size_t dim);
Json cone_union_to_json(const ConeUnion& u);
Json union_to_json(const PolyUnion& u);
PolyUnion union_from_json(const Json& j, std::size_t dim, const std::vector<std::string>& vars);

Json verdict_to_json(const Verdict& v);
Verdict verdict_from_json(const Json& j);
Status status_from_string(const std::string& s);

/// Default y-space variable names y1..yl.
std::vector<std::string> y_variables(std::size_t l);

}  // namespace vacone
