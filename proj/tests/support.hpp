#pragma once

#include <initializer_list>
#include <random>
#include <string>

#include "vacone/catalog.hpp"
#include "vacone/problem_io.hpp"

namespace vt {

using namespace vacone;

inline Vec V(std::initializer_list<const char*> xs) {
  Vec v;
  for (auto* s : xs) v.push_back(parse_rational(s));
  return v;
}

inline Vec Vi(std::initializer_list<long> xs) {
  Vec v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

inline Mat Mi(std::initializer_list<std::initializer_list<long>> rows) {
  Mat m;
  for (auto& r : rows) m.push_back(Vi(r));
  return m;
}

inline HPolyhedron H(std::size_t dim, std::initializer_list<std::initializer_list<long>> le,
                     std::initializer_list<std::initializer_list<long>> eq = {}) {
  HPolyhedron h(dim);
  for (auto& r : le) {
    Vec a = Vi(r);
    Rational b = a.back();
    a.pop_back();
    h.add_le(a, b);
  }
  for (auto& r : eq) {
    Vec a = Vi(r);
    Rational b = a.back();
    a.pop_back();
    h.add_eq(a, b);
  }
  return h;
}

inline PolyUnion U(std::size_t dim, std::initializer_list<HPolyhedron> blocks) {
  PolyUnion u(dim);
  for (auto& b : blocks) u.blocks.emplace_back(b);
  return u;
}

/// Problem from a JSON literal; schema_version and defaults filled in.
inline ProblemInstance P(const std::string& json) {
  Json j = Json::parse(json);
  if (!j.contains("schema_version")) j["schema_version"] = 1;
  if (!j.contains("id")) j["id"] = "test";
  return problem_from_json(j);
}

inline ProblemInstance catalog_entry(const std::string& id) {
  for (auto& p : load_catalog())
    if (p.id == id) return p;
  throw Error("no catalog entry " + id);
}

/// Random integer in [lo, hi].
inline long rint(std::mt19937_64& rng, long lo, long hi) {
  return std::uniform_int_distribution<long>(lo, hi)(rng);
}

}  // namespace vt
