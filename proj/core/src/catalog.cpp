#include "vacone/catalog.hpp"

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <sstream>

#include "vacone/calculus.hpp"
#include "vacone/cones.hpp"
#include "vacone/lp.hpp"
#include "vacone/maps.hpp"

namespace vacone {

const std::vector<std::string>& expected_keys() {
  static const std::vector<std::string> keys{"m_stat", "am_stat", "dam_stat", "fjm", "nnamcq", "am_reg",
                                             "dam_reg", "ccp", "reduced_criterion", "gacq", "ggcq",
                                             "consequence", "preimage_rule", "replay", "subreg_probe", "lin_cone"};
  return keys;
}

std::vector<ProblemInstance> load_catalog() {
  std::vector<ProblemInstance> out;
  for (const auto& f : embedded_catalog_files()) {
    ProblemInstance p;
    try {
      p = parse_problem(f.body);
    } catch (const SchemaError& e) {
      throw SchemaError(std::string(f.name) + ": " + e.what());
    }
    for (const auto& [k, v] : p.expected)
      if (std::find(expected_keys().begin(), expected_keys().end(), k) == expected_keys().end())
        throw SchemaError(p.id + ": unknown expected-verdict key '" + k + "'");
    out.push_back(std::move(p));
  }
  return out;
}

namespace {

Verdict from_bool(bool b, const std::string& method, const std::string& detail = {}) {
  return Verdict::make(b ? Status::Proved : Status::Refuted, method, detail);
}

Verdict from_rule(const RuleResult& r, const std::string& method) {
  Status s = r.status == RuleStatus::Holds ? Status::Proved
             : r.status == RuleStatus::Violated ? Status::Refuted
                                                : Status::Unknown;
  Verdict v = Verdict::make(s, method, r.detail);
  if (r.witness) v.evidence.push_back({"witness", *r.witness});
  return v;
}

Verdict run_verdict(const ProblemInstance& p, const std::string& key, const RegularityConfig& cfg,
                    std::string& got) {
  const Vec& x = p.point;
  Verdict v;
  if (key == "m_stat") v = m_stationarity_check(p, x);
  else if (key == "am_stat") v = am_stationarity_check(p, x);
  else if (key == "dam_stat") v = dam_stationarity_check(p, x);
  else if (key == "fjm") v = fjm_stationarity_check(p, x);
  else if (key == "nnamcq") v = from_bool(nnamcq_check(p, x), "kernel-cone");
  else if (key == "am_reg") v = am_regularity_check(p, x, cfg);
  else if (key == "dam_reg") v = dam_regularity_check(p, x, cfg);
  else if (key == "ccp") v = ccp_check(p, x, cfg);
  else if (key == "reduced_criterion") v = reduced_criterion_check(p, x, cfg);
  else if (key == "gacq") v = gacq_check(p, x);
  else if (key == "ggcq") v = ggcq_check(p, x);
  else if (key == "preimage_rule") v = from_rule(preimage_rule_check(p, x), "preimage-rule");
  else if (key == "consequence") {
    if (!p.analytic || !p.analytic->am) {
      v = Verdict::make(Status::Unknown, "analytic-limsup", "needs analytic region data");
    } else {
      Mat subs;
      for (const Mat& poly : p.f.subdifferential(x)) subs.insert(subs.end(), poly.begin(), poly.end());
      v = analytic_limsup_condition(*p.analytic->am, subs);
    }
  } else if (key == "replay") {
    ReplayResult r = replay_sequence(p);
    std::string detail = std::to_string(r.checked) + " values of k checked";
    for (const auto& f : r.failures) detail += "; " + f;
    v = from_bool(r.ok, "exact-replay", detail);
    got = r.ok ? "Verified" : "Failed";
    return v;
  } else if (key == "subreg_probe") {
    ProbeReport rep = subregularity_probe(p, x, default_probe_directions(p.n()));
    v = Verdict::make(Status::Unknown, "probe", rep.summary());
    got = rep.diverging ? "diverges" : (rep.max_ratio <= 10 ? "bounded" : "inconclusive");
    return v;
  } else if (key == "lin_cone") {
    ConeUnion l = linearization_cone(p, x);
    v = Verdict::make(Status::Unknown, "linearization", "");
    std::ostringstream os;
    for (const auto& b : l.branches) os << to_string(b) << " ";
    v.detail = os.str();
    bool whole = l.branches.size() == 1 && same_cone(l.branches[0], GenCone::whole(p.n()));
    bool zero = l.branches.size() == 1 && l.branches[0].is_zero();
    got = whole ? "whole" : zero ? "zero" : "other";
    return v;
  } else {
    throw SchemaError(p.id + ": unknown check '" + key + "'");
  }
  got = to_string(v.status);
  if (key == "am_stat" && v.status == Status::Proved && v.method == "replayed-sequence") got = "Certified";
  return v;
}

bool matches(const std::string& key, const std::string& expected, const std::string& got) {
  if (expected == got) return true;
  // A replay certificate is a proof.
  return key == "am_stat" && expected == "Proved" && got == "Certified";
}

bool in_hull(const Mat& verts, const Vec& g) {
  // Convex combination with nonnegative weights summing to one.
  LpProblem lp(verts.size());
  for (std::size_t i = 0; i < verts.size(); ++i) lp.nonneg[i] = true;
  for (std::size_t r = 0; r < g.size(); ++r) {
    Vec row(verts.size());
    for (std::size_t i = 0; i < verts.size(); ++i) row[i] = verts[i][r];
    lp.add_eq(row, g[r]);
  }
  lp.add_eq(Vec(verts.size(), Rational(1)), Rational(1));
  return solve_lp(lp).status != LpStatus::Infeasible;
}

ConeUnion c_normals(const ProblemInstance& p, const Vec& x) {
  if (!p.has_C()) return ConeUnion::single(GenCone::zero(p.n()));
  return normal_cone(*p.C, x);
}

std::string check_multiplier(const ProblemInstance& p, const Vec& xbar, const Vec* g, const Vec& lambda,
                             const Vec& nu) {
  if (lambda.size() != p.l() || nu.size() != p.n()) return "multiplier dimension mismatch";
  if (!cone_union_membership(normal_cone(p.K, p.G.eval(xbar)), lambda).member) return "lambda is not in N_K(G(x))";
  if (!cone_union_membership(c_normals(p, xbar), nu).member) return "nu is not in N_C(x)";
  Vec sum = add(mat_t_vec(p.G.jacobian(xbar), lambda, p.n()), nu);
  if (g) {
    bool ok = false;
    for (const Mat& verts : p.f.subdifferential(xbar)) ok = ok || in_hull(verts, *g);
    if (!ok) return "subgradient is not in the subdifferential";
    sum = add(sum, *g);
  } else if (is_zero(lambda) && is_zero(nu)) {
    return "abnormal multiplier is zero";
  }
  if (!is_zero(sum)) return "identity fails: residual " + to_string(sum);
  return {};
}

}  // namespace

VerifyResult verify_evidence(const ProblemInstance& p, const Vec& xbar, const std::string& check, const Verdict& v) {
  VerifyResult out;
  const Vec* g = v.find("subgradient");
  const Vec* lam = v.find("lambda");
  const Vec* nu = v.find("nu");
  const Vec* w = v.find("witness");
  if (check == "replay" || v.method == "replayed-sequence") {
    out.applicable = true;
    ReplayResult r = replay_sequence(p);
    out.ok = r.ok;
    out.detail = r.ok ? "sequence replayed exactly" : r.failures.front();
    return out;
  }
  if (lam && nu && v.status == Status::Proved) {
    out.applicable = true;
    std::string err = check_multiplier(p, xbar, g, *lam, *nu);
    out.ok = err.empty();
    out.detail = out.ok ? (g ? "multiplier identity verified" : "abnormal multiplier verified") : err;
    return out;
  }
  if (w && v.status == Status::Refuted && v.method == "facet-limit-sampler" &&
      (check == "am_reg" || check == "dam_reg" || check == "ccp")) {
    out.applicable = true;
    bool lifted = check != "dam_reg" && p.has_C();
    ProblemInstance q = lifted ? lift_abstract_set(p) : p;
    GeometricConstraint gc = GeometricConstraint::of(q);
    if (cone_union_membership(m_map_cones(gc, xbar, Vec(q.l(), Rational(0))), *w).member) {
      out.detail = "witness lies in the value at the reference point";
      return out;
    }
    std::optional<Rational> prev;
    for (const auto& rec : v.sequence) {
      const Vec* x = nullptr;
      const Vec* yt = nullptr;
      const Vec* m = nullptr;
      for (const auto& e : rec) {
        if (e.name == "x") x = &e.value;
        if (e.name == "ytil") yt = &e.value;
        if (e.name == "member") m = &e.value;
      }
      if (!x || !yt || !m) {
        out.detail = "sequence record lacks x, ytil or member";
        return out;
      }
      if (!m_map_membership(gc, *x, *yt, *m).member) {
        out.detail = "record member is not in the value at " + to_string(*x);
        return out;
      }
      Rational d = norm1(sub(*m, *w));
      if (prev && d > *prev) {
        out.detail = "distance to the witness increases along the sequence";
        return out;
      }
      prev = d;
    }
    out.ok = true;
    out.detail = "witness excluded at the reference point; " + std::to_string(v.sequence.size()) +
                 " sequence members verified";
    return out;
  }
  out.detail = "no substitution-checkable evidence";
  return out;
}

CheckOutcome run_check(const ProblemInstance& p, const std::string& key, const std::string& expected,
                       const RegularityConfig& cfg) {
  CheckOutcome c;
  c.check = key;
  c.expected = expected;
  auto t0 = std::chrono::steady_clock::now();
  try {
    c.verdict = run_verdict(p, key, cfg, c.got);
    if (matches(key, expected, c.got)) c.outcome = "pass";
    else if (c.got == "Unknown" || c.got == "inconclusive") c.outcome = "soft";
    else c.outcome = "hard";
  } catch (const SchemaError&) {
    throw;
  } catch (const std::exception& e) {
    c.got = "error";
    c.outcome = "hard";
    c.verdict = Verdict::make(Status::Unknown, "error", e.what());
  }
  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return c;
}

CatalogReport run_instances(const std::vector<ProblemInstance>& entries, const RegularityConfig& cfg) {
  CatalogReport rep;
  for (const auto& p : entries) {
    EntryReport er;
    er.id = p.id;
    er.description = p.description;
    for (const auto& key : expected_keys()) {
      auto it = p.expected.find(key);
      if (it == p.expected.end()) continue;
      CheckOutcome c = run_check(p, key, it->second, cfg);
      if (c.outcome == "pass") ++rep.passed;
      else if (c.outcome == "soft") ++rep.soft;
      else ++rep.hard;
      er.checks.push_back(std::move(c));
    }
    rep.entries.push_back(std::move(er));
  }
  return rep;
}

CatalogReport run_catalog(const std::string& filter, const RegularityConfig& cfg) {
  std::vector<ProblemInstance> sel;
  for (auto& p : load_catalog())
    if (filter.empty() || p.id.find(filter) != std::string::npos) sel.push_back(std::move(p));
  return run_instances(sel, cfg);
}

Json CatalogReport::to_json() const {
  Json j;
  Json es = Json::array();
  for (const auto& e : entries) {
    Json checks = Json::array();
    for (const auto& c : e.checks) {
      Json cj = {{"check", c.check}, {"expected", c.expected}, {"got", c.got}, {"outcome", c.outcome}};
      cj["verdict"] = verdict_to_json(c.verdict);
      checks.push_back(cj);
    }
    es.push_back({{"id", e.id}, {"description", e.description}, {"checks", checks}});
  }
  j["entries"] = es;
  j["passed"] = passed;
  j["soft_failures"] = soft;
  j["hard_failures"] = hard;
  return j;
}

std::string CatalogReport::table() const {
  std::ostringstream os;
  os << std::left << std::setw(14) << "entry" << std::setw(20) << "check" << std::setw(14) << "expected"
     << std::setw(14) << "got" << std::setw(8) << "result"
     << "method\n";
  for (const auto& e : entries) {
    for (const auto& c : e.checks) {
      os << std::setw(14) << e.id << std::setw(20) << c.check << std::setw(14) << c.expected << std::setw(14) << c.got
         << std::setw(8) << c.outcome << c.verdict.method << "\n";
    }
  }
  os << entries.size() << " entries, " << passed << " passed, " << soft << " soft failures, " << hard
     << " hard failures\n";
  return os.str();
}

}  // namespace vacone
