#include "vacone/problem_io.hpp"

#include <fstream>
#include <sstream>

namespace vacone {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw SchemaError(where + ": " + what);
}

const Json& need(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) fail(where, std::string("missing field '") + key + "'");
  return j.at(key);
}

std::string str(const Json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string");
  return j.get<std::string>();
}

Polynomial poly(const Json& j, const std::vector<std::string>& vars, const std::string& where) {
  try {
    return parse_polynomial(str(j, where), vars);
  } catch (const ParseError& e) {
    fail(where, e.what());
  }
}

std::vector<Polynomial> polys(const Json& j, const std::vector<std::string>& vars, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of expressions");
  std::vector<Polynomial> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(poly(j[i], vars, where + "[" + std::to_string(i) + "]"));
  return out;
}

Mat mat_from_json(const Json& j, std::size_t dim, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of vectors");
  Mat out;
  for (const auto& r : j) {
    Vec v = vec_from_json(r);
    if (v.size() != dim) fail(where, "vector of length " + std::to_string(v.size()) + ", expected " + std::to_string(dim));
    out.push_back(v);
  }
  return out;
}

Json mat_to_json(const Mat& m) {
  Json out = Json::array();
  for (const auto& v : m) out.push_back(vec_to_json(v));
  return out;
}

HPolyhedron rows_from_json(const Json& j, std::size_t dim, const std::string& where) {
  if (!j.is_array()) fail(where, "'rows' must be an array");
  HPolyhedron h(dim);
  for (std::size_t r = 0; r < j.size(); ++r) {
    const Json& row = j[r];
    std::string w = where + "[" + std::to_string(r) + "]";
    if (!row.is_array() || row.size() != dim + 2) fail(w, "row must hold " + std::to_string(dim) + " coefficients, rhs, sense");
    Vec a;
    for (std::size_t i = 0; i < dim; ++i) a.push_back(rational_from_json(row[i]));
    Rational rhs = rational_from_json(row[dim]);
    std::string sense = str(row[dim + 1], w);
    if (sense != "le" && sense != "eq") fail(w, "sense must be \"le\" or \"eq\"");
    h.add(a, rhs, sense == "eq");
  }
  return h;
}

Json rows_to_json(const HPolyhedron& h) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < h.rows(); ++r) {
    Json row = vec_to_json(h.A[r]);
    row.push_back(rational_to_json(h.b[r]));
    row.push_back(h.eq[r] ? "eq" : "le");
    rows.push_back(row);
  }
  return rows;
}

AnalyticVariant variant_from_json(const Json& j, std::size_t n, const std::string& where) {
  AnalyticVariant v;
  for (const auto& r : need(j, "regions", where)) {
    AnalyticRegion reg;
    reg.label = r.value("label", "");
    reg.subgradients = mat_from_json(need(r, "subgradients", where), n, where + " subgradients");
    for (const auto& c : need(r, "values", where)) reg.values.push_back(cone_from_json(c, n));
    v.regions.push_back(std::move(reg));
  }
  v.at_point = ConeUnion(n);
  for (const auto& c : need(j, "at_point", where)) v.at_point.branches.push_back(cone_from_json(c, n));
  return v;
}

Json variant_to_json(const AnalyticVariant& v) {
  Json regions = Json::array();
  for (const auto& r : v.regions) {
    Json vals = Json::array();
    for (const auto& c : r.values) vals.push_back(cone_to_json(c));
    regions.push_back({{"label", r.label}, {"subgradients", mat_to_json(r.subgradients)}, {"values", vals}});
  }
  return {{"regions", regions}, {"at_point", cone_union_to_json(v.at_point)["branches"]}};
}

const std::vector<std::string> kReplayVars{"k", "h"};

Json poly_list(const std::vector<Polynomial>& ps) {
  Json out = Json::array();
  for (const auto& p : ps) out.push_back(p.to_string());
  return out;
}

}  // namespace

std::vector<std::string> y_variables(std::size_t l) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= l; ++i) out.push_back("y" + std::to_string(i));
  return out;
}

Json rational_to_json(const Rational& r) { return to_string(r); }

Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (!j.is_string()) throw SchemaError("rational must be a \"p/q\" string or an integer");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const Error& e) {
    throw SchemaError(std::string("bad rational: ") + e.what());
  }
}

Json vec_to_json(const Vec& v) {
  Json out = Json::array();
  for (const auto& r : v) out.push_back(rational_to_json(r));
  return out;
}

Vec vec_from_json(const Json& j) {
  if (!j.is_array()) throw SchemaError("expected an array of rationals");
  Vec out;
  for (const auto& e : j) out.push_back(rational_from_json(e));
  return out;
}

Json cone_to_json(const GenCone& c) {
  return {{"rays", mat_to_json(c.rays)}, {"lineality", mat_to_json(c.lineality)}};
}

GenCone cone_from_json(const Json& j, std::size_t dim) {
  GenCone c(dim);
  if (j.contains("rays")) c.rays = mat_from_json(j["rays"], dim, "cone rays");
  if (j.contains("lineality")) c.lineality = mat_from_json(j["lineality"], dim, "cone lineality");
  return c;
}

Json cone_union_to_json(const ConeUnion& u) {
  Json b = Json::array();
  for (const auto& c : u.branches) b.push_back(cone_to_json(c));
  return {{"dim", u.dim}, {"branches", b}};
}

Json union_to_json(const PolyUnion& u) {
  Json blocks = Json::array();
  for (const auto& b : u.blocks) {
    if (const auto* h = std::get_if<HPolyhedron>(&b)) {
      blocks.push_back({{"rows", rows_to_json(*h)}});
    } else {
      const auto& s = std::get<SmoothConvexBlock>(b);
      Json blk = {{"smooth", poly_list(s.g)}, {"slater", vec_to_json(s.slater)}};
      if (!s.convex) blk["convex"] = false;
      blocks.push_back(blk);
    }
  }
  return {{"union", blocks}};
}

PolyUnion union_from_json(const Json& j, std::size_t dim, const std::vector<std::string>& vars) {
  const Json& blocks = need(j, "union", "union");
  if (!blocks.is_array() || blocks.empty()) fail("union", "'union' must be a nonempty array of blocks");
  PolyUnion u(dim);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const Json& b = blocks[i];
    std::string w = "block " + std::to_string(i);
    if (b.contains("rows")) {
      u.blocks.push_back(rows_from_json(b["rows"], dim, w + " rows"));
    } else if (b.contains("smooth")) {
      SmoothConvexBlock s;
      s.dim = dim;
      s.g = polys(b["smooth"], vars, w + " smooth");
      if (b.contains("slater")) s.slater = vec_from_json(b["slater"]);
      if (!s.slater.empty() && s.slater.size() != dim) fail(w, "slater point dimension mismatch");
      s.convex = b.value("convex", true);
      u.blocks.push_back(std::move(s));
    } else {
      fail(w, "block needs 'rows' or 'smooth'");
    }
  }
  return u;
}

ProblemInstance problem_from_json(const Json& j) {
  if (!j.is_object()) throw SchemaError("problem file must be a JSON object");
  ProblemInstance p;
  p.id = j.value("id", "");
  const std::string where = p.id.empty() ? "problem" : p.id;
  try {
    int version = j.value("schema_version", kSchemaVersion);
    if (version != kSchemaVersion) fail(where, "unsupported schema_version " + std::to_string(version));
    p.description = j.value("description", "");
    p.provenance = j.value("provenance", "");
    const Json& vars = need(j, "variables", where);
    if (!vars.is_array() || vars.empty()) fail(where, "'variables' must be a nonempty array");
    for (const auto& v : vars) p.variables.push_back(str(v, where + " variables"));
    const std::size_t n = p.variables.size();

    const Json& obj = need(j, "objective", where);
    std::string kind = str(need(obj, "kind", where + " objective"), where + " objective kind");
    if (kind == "polynomial") {
      p.f = Objective::polynomial(poly(need(obj, "expr", where + " objective"), p.variables, where + " objective"));
    } else if (kind == "piecewise") {
      std::vector<SubdiffPiece> pieces;
      for (const auto& pc : need(obj, "pieces", where + " objective")) {
        SubdiffPiece s;
        s.region = rows_from_json(need(need(pc, "region", where + " piece"), "rows", where + " piece"), n,
                                  where + " piece region");
        s.f = poly(need(pc, "expr", where + " piece"), p.variables, where + " piece");
        pieces.push_back(std::move(s));
      }
      if (pieces.empty()) fail(where, "piecewise objective needs pieces");
      p.f = Objective::piecewise(std::move(pieces), obj.value("convexify", false));
    } else {
      fail(where, "objective kind must be \"polynomial\" or \"piecewise\"");
    }

    auto comps = polys(need(j, "G", where), p.variables, where + " G");
    if (comps.empty()) fail(where, "G needs at least one component");
    p.G = PolyMap(n, comps);
    p.K = union_from_json(need(j, "K", where), p.l(), y_variables(p.l()));
    if (j.contains("C") && !j["C"].is_null()) p.C = union_from_json(j["C"], n, p.variables);
    p.point = vec_from_json(need(j, "point", where));
    if (j.contains("M_explicit") && !j["M_explicit"].is_null())
      p.M_explicit = union_from_json(j["M_explicit"], n, p.variables);
    if (j.contains("expected")) {
      if (!j["expected"].is_object()) fail(where, "'expected' must be an object");
      for (const auto& [k, v] : j["expected"].items()) p.expected[k] = str(v, where + " expected." + k);
    }
    if (j.contains("flags"))
      for (const auto& f : j["flags"]) p.flags.push_back(str(f, where + " flags"));
    if (j.contains("analytic")) {
      const Json& a = j["analytic"];
      AnalyticData ad;
      ad.note = a.value("note", "");
      if (a.contains("am")) ad.am = variant_from_json(a["am"], n, where + " analytic.am");
      if (a.contains("dam")) ad.dam = variant_from_json(a["dam"], n, where + " analytic.dam");
      p.analytic = std::move(ad);
    }
    if (j.contains("replay")) {
      const Json& r = j["replay"];
      Replay rp;
      rp.kind = r.value("kind", "eps");
      if (rp.kind != "eps" && rp.kind != "image") fail(where, "replay kind must be \"eps\" or \"image\"");
      auto opt = [&](const char* key) {
        return r.contains(key) ? polys(r[key], kReplayVars, where + " replay." + key) : std::vector<Polynomial>{};
      };
      rp.x = opt("x");
      rp.y = opt("y");
      rp.lambda = opt("lambda");
      rp.nu = opt("nu");
      rp.eps = opt("eps");
      if (r.contains("target")) rp.target = vec_from_json(r["target"]);
      rp.ks = vec_from_json(need(r, "ks", where + " replay"));
      for (const auto& k : rp.ks)
        if (k == 0) fail(where, "replay k must be nonzero");
      p.replay = std::move(rp);
    }
    p.validate();
  } catch (const SchemaError& e) {
    const std::string msg = e.what();
    if (msg.rfind(where, 0) != 0) throw SchemaError(where + ": " + msg);
    throw;
  } catch (const DimensionError& e) {
    throw SchemaError(where + ": " + e.what());
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(where + ": " + e.what());
  }
  return p;
}

Json problem_to_json(const ProblemInstance& p) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["id"] = p.id;
  j["description"] = p.description;
  j["provenance"] = p.provenance;
  j["variables"] = p.variables;
  if (p.f.is_piecewise()) {
    Json pieces = Json::array();
    for (const auto& pc : p.f.pieces())
      pieces.push_back({{"region", {{"rows", rows_to_json(pc.region)}}}, {"expr", pc.f.to_string()}});
    j["objective"] = {{"kind", "piecewise"}, {"convexify", p.f.convexify()}, {"pieces", pieces}};
  } else {
    j["objective"] = {{"kind", "polynomial"}, {"expr", p.f.smooth().to_string()}};
  }
  j["G"] = poly_list(p.G.components());
  j["K"] = union_to_json(p.K);
  if (p.C) j["C"] = union_to_json(*p.C);
  j["point"] = vec_to_json(p.point);
  if (p.M_explicit) j["M_explicit"] = union_to_json(*p.M_explicit);
  if (!p.expected.empty()) {
    Json e = Json::object();
    for (const auto& [k, v] : p.expected) e[k] = v;
    j["expected"] = e;
  }
  if (!p.flags.empty()) j["flags"] = p.flags;
  if (p.analytic) {
    Json a;
    a["note"] = p.analytic->note;
    if (p.analytic->am) a["am"] = variant_to_json(*p.analytic->am);
    if (p.analytic->dam) a["dam"] = variant_to_json(*p.analytic->dam);
    j["analytic"] = a;
  }
  if (p.replay) {
    const Replay& r = *p.replay;
    Json rj;
    rj["kind"] = r.kind;
    if (!r.x.empty()) rj["x"] = poly_list(r.x);
    if (!r.y.empty()) rj["y"] = poly_list(r.y);
    if (!r.lambda.empty()) rj["lambda"] = poly_list(r.lambda);
    if (!r.nu.empty()) rj["nu"] = poly_list(r.nu);
    if (!r.eps.empty()) rj["eps"] = poly_list(r.eps);
    if (!r.target.empty()) rj["target"] = vec_to_json(r.target);
    rj["ks"] = vec_to_json(r.ks);
    j["replay"] = rj;
  }
  return j;
}

ProblemInstance parse_problem(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
  return problem_from_json(j);
}

ProblemInstance load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_problem(ss.str());
}

std::string dump_problem(const ProblemInstance& p) { return problem_to_json(p).dump(2); }

Json verdict_to_json(const Verdict& v) {
  Json j;
  j["status"] = to_string(v.status);
  j["method"] = v.method;
  j["detail"] = v.detail;
  Json ev = Json::object();
  for (const auto& e : v.evidence) ev[e.name] = vec_to_json(e.value);
  j["evidence"] = ev;
  if (!v.sequence.empty()) {
    Json seq = Json::array();
    for (const auto& rec : v.sequence) {
      Json r = Json::object();
      for (const auto& e : rec) r[e.name] = vec_to_json(e.value);
      seq.push_back(r);
    }
    j["sequence"] = seq;
  }
  return j;
}

Status status_from_string(const std::string& s) {
  if (s == "Proved") return Status::Proved;
  if (s == "Refuted") return Status::Refuted;
  if (s == "Unknown") return Status::Unknown;
  throw SchemaError("unknown verdict status '" + s + "'");
}

Verdict verdict_from_json(const Json& j) {
  Verdict v;
  try {
    v.status = status_from_string(j.at("status").get<std::string>());
    v.method = j.value("method", "");
    v.detail = j.value("detail", "");
    if (j.contains("evidence"))
      for (const auto& [k, e] : j["evidence"].items()) v.evidence.push_back({k, vec_from_json(e)});
    if (j.contains("sequence")) {
      for (const auto& rec : j["sequence"]) {
        std::vector<NamedVec> r;
        for (const auto& [k, e] : rec.items()) r.push_back({k, vec_from_json(e)});
        v.sequence.push_back(std::move(r));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("bad verdict: ") + e.what());
  }
  return v;
}

}  // namespace vacone
