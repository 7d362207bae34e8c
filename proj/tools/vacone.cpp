// vacone command-line front end. Exit codes: 0 completed, 1 analysis error
// (or a failed --verify / catalog hard failure), 2 parse or schema error.
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "vacone/calculus.hpp"
#include "vacone/catalog.hpp"
#include "vacone/cones.hpp"
#include "vacone/maps.hpp"
#include "vacone/penalty.hpp"
#include "vacone/problem_io.hpp"
#include "vacone/regularity.hpp"

using namespace vacone;

namespace {

struct Usage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t default_seed() {
  if (const char* s = std::getenv("VACONE_SEED")) return std::strtoull(s, nullptr, 10);
  return 0;
}

Vec parse_point(const std::string& text) {
  Vec v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(parse_rational(item));
  return v;
}

const std::vector<std::string> kAllChecks{"feasibility", "m_stat", "fjm",      "nnamcq",  "polyhedrality",
                                          "am_stat",     "dam_stat", "am_reg", "dam_reg", "lin_cone",
                                          "gacq",        "ggcq",     "subreg_probe"};

struct Section {
  std::string check;
  Verdict verdict;
  std::optional<Json> extra;
  double seconds = 0;
};

Section run_section(const ProblemInstance& p, const Vec& x, const std::string& check, const RegularityConfig& cfg) {
  Section s;
  s.check = check;
  auto t0 = std::chrono::steady_clock::now();
  if (check == "feasibility") {
    bool ok = p.feasible(x);
    s.verdict = Verdict::make(ok ? Status::Proved : Status::Refuted, "exact", ok ? "G(x) ∈ K and x ∈ C" : "infeasible");
  } else if (check == "m_stat") {
    s.verdict = m_stationarity_check(p, x);
  } else if (check == "fjm") {
    s.verdict = fjm_stationarity_check(p, x);
  } else if (check == "nnamcq") {
    Verdict a = fjm_abnormal_check(p, x);
    s.verdict = a;
    s.verdict.status = a.status == Status::Proved ? Status::Refuted : Status::Proved;
    s.verdict.detail = a.status == Status::Proved ? "abnormal multiplier exists" : a.detail;
  } else if (check == "polyhedrality") {
    bool ok = polyhedrality_check(p);
    s.verdict = Verdict::make(ok ? Status::Proved : Status::Refuted, "structure",
                              ok ? "G affine, K and C polyhedral" : "G nonlinear or a set has smooth blocks");
  } else if (check == "am_stat") {
    s.verdict = am_stationarity_check(p, x);
  } else if (check == "dam_stat") {
    s.verdict = dam_stationarity_check(p, x);
  } else if (check == "am_reg") {
    s.verdict = am_regularity_check(p, x, cfg);
  } else if (check == "dam_reg") {
    s.verdict = dam_regularity_check(p, x, cfg);
  } else if (check == "lin_cone") {
    ConeUnion l = linearization_cone(p, x);
    s.verdict = Verdict::make(Status::Unknown, "linearization", std::to_string(l.branches.size()) + " branches");
    s.extra = cone_union_to_json(l);
  } else if (check == "gacq") {
    s.verdict = gacq_check(p, x);
  } else if (check == "ggcq") {
    s.verdict = ggcq_check(p, x);
  } else if (check == "subreg_probe") {
    ProbeReport rep = subregularity_probe(p, x, default_probe_directions(p.n()));
    s.verdict = Verdict::make(Status::Unknown, "probe", rep.summary());
    std::ostringstream os;
    os << std::setprecision(17) << rep.max_ratio;
    s.extra = Json{{"max_ratio", os.str()}, {"diverging", rep.diverging}};
  } else {
    throw Usage("unknown check '" + check + "'");
  }
  s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return s;
}

int cmd_analyze(const std::string& file, const std::string& point, const std::string& checks, std::uint64_t seed,
                std::size_t samples, bool json, const std::string& verify) {
  ProblemInstance p = load_problem(file);
  Vec x = point.empty() ? p.point : parse_point(point);
  if (x.size() != p.n()) throw DimensionError("point has " + std::to_string(x.size()) + " entries, expected " +
                                              std::to_string(p.n()));
  if (!verify.empty()) {
    std::ifstream in(verify);
    if (!in) throw Error("cannot open " + verify);
    Json rep;
    try {
      rep = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw SchemaError(std::string("invalid report: ") + e.what());
    }
    if (rep.contains("point")) x = vec_from_json(rep["point"]);
    bool all_ok = true;
    std::size_t checked = 0;
    for (const auto& sec : rep.at("sections")) {
      std::string check = sec.at("check").get<std::string>();
      if (!sec.contains("verdict")) continue;
      VerifyResult r = verify_evidence(p, x, check, verdict_from_json(sec["verdict"]));
      if (!r.applicable) continue;
      ++checked;
      all_ok = all_ok && r.ok;
      std::cout << std::left << std::setw(16) << check << (r.ok ? "verified  " : "FAILED    ") << r.detail << "\n";
    }
    std::cout << checked << " certificates re-checked\n";
    return all_ok ? 0 : 1;
  }
  std::vector<std::string> list;
  if (checks.empty()) {
    for (const auto& c : kAllChecks) {
      if ((c == "gacq" || c == "ggcq" || c == "subreg_probe") && !p.M_explicit) continue;
      if (c == "dam_stat" || c == "dam_reg") {
        if (!p.has_C() && !(p.analytic && p.analytic->dam)) continue;
      }
      list.push_back(c);
    }
  } else {
    std::stringstream ss(checks);
    std::string c;
    while (std::getline(ss, c, ',')) list.push_back(c);
  }
  RegularityConfig cfg;
  cfg.seed = seed;
  if (samples > 0) cfg.directions = samples;
  std::vector<Section> sections;
  for (const auto& c : list) sections.push_back(run_section(p, x, c, cfg));
  if (json) {
    Json out;
    out["schema_version"] = kSchemaVersion;
    out["id"] = p.id;
    out["point"] = vec_to_json(x);
    out["seed"] = seed;
    Json secs = Json::array();
    for (const auto& s : sections) {
      Json j = {{"check", s.check}, {"verdict", verdict_to_json(s.verdict)}};
      if (s.extra) j["value"] = *s.extra;
      secs.push_back(j);
    }
    out["sections"] = secs;
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << (p.id.empty() ? file : p.id) << " at x = " << to_string(x) << "\n";
    for (const auto& s : sections) {
      std::cout << std::left << std::setw(15) << s.check << std::setw(9) << to_string(s.verdict.status)
                << std::setw(28) << s.verdict.method << std::fixed << std::setprecision(3) << s.seconds << "s  "
                << s.verdict.detail << "\n";
      for (const auto& e : s.verdict.evidence) std::cout << "    " << e.name << " = " << to_string(e.value) << "\n";
      if (s.extra) std::cout << "    " << s.extra->dump() << "\n";
    }
  }
  return 0;
}

int cmd_penalty(const std::string& file, const std::string& point, double kmax, double tol, const std::string& csv,
                bool decoupled) {
  ProblemInstance p = load_problem(file);
  Vec x = point.empty() ? p.point : parse_point(point);
  PenaltyConfig cfg;
  cfg.ks = PenaltyConfig::schedule_up_to(kmax);
  cfg.tol_cap = tol;
  cfg.decoupled = decoupled;
  AMTrace t = am_trace(p, x, cfg);
  std::string table = trace_csv(t);
  if (csv.empty() || csv == "-") {
    std::cout << table;
  } else {
    std::ofstream out(csv);
    if (!out) throw Error("cannot write " + csv);
    out << table;
  }
  TraceClassification c = classify_trace(t, x, p);
  std::cout << "status: " << t.status << "\n";
  std::cout << "classification: " << to_string(c.kind) << "\n";
  if (!c.lambda.empty()) std::cout << "lambda = " << to_string(c.lambda) << "\n";
  if (!c.nu.empty()) std::cout << "nu = " << to_string(c.nu) << "\n";
  std::cout << c.detail << "\n";
  return 0;
}

void print_cones(const ConeUnion& u, bool json) {
  if (json) {
    std::cout << cone_union_to_json(u).dump(2) << "\n";
    return;
  }
  for (std::size_t i = 0; i < u.branches.size(); ++i) {
    const auto& b = u.branches[i];
    std::cout << "branch " << i << ":";
    for (const auto& r : b.rays) std::cout << " ray " << to_string(r);
    for (const auto& l : b.lineality) std::cout << " line " << to_string(l);
    if (b.rays.empty() && b.lineality.empty()) std::cout << " {0}";
    std::cout << "\n";
  }
}

int cmd_cone(const std::string& file, const std::string& set, const std::string& point, const std::string& kind,
             bool json) {
  ProblemInstance p = load_problem(file);
  if (kind == "linearization") {
    Vec x = point.empty() ? p.point : parse_point(point);
    print_cones(linearization_cone(p, x), json);
    return 0;
  }
  const PolyUnion* s = nullptr;
  Vec pt;
  if (set == "K") {
    s = &p.K;
    pt = point.empty() ? p.G.eval(p.point) : parse_point(point);
  } else if (set == "C") {
    if (!p.C) throw Error("the problem has no set C");
    s = &*p.C;
    pt = point.empty() ? p.point : parse_point(point);
  } else if (set == "M") {
    if (!p.M_explicit) throw Error("the problem has no explicit description of M");
    s = &*p.M_explicit;
    pt = point.empty() ? p.point : parse_point(point);
  } else {
    throw Usage("--set must be K, C or M");
  }
  if (pt.size() != s->dim) throw DimensionError("point dimension does not match the set");
  if (!s->contains(pt)) throw DomainError("point " + to_string(pt) + " is not in the set");
  if (kind == "tangent") print_cones(tangent_cone_union(*s, pt), json);
  else if (kind == "regular") print_cones(ConeUnion::single(canonicalize(regular_normal_cone(*s, pt))), json);
  else if (kind == "limiting") print_cones(normal_cone(*s, pt), json);
  else throw Usage("--kind must be tangent, regular, limiting or linearization");
  return 0;
}

int cmd_catalog(const std::string& filter, bool json, std::uint64_t seed) {
  RegularityConfig cfg;
  cfg.seed = seed;
  CatalogReport rep = run_catalog(filter, cfg);
  if (json) std::cout << rep.to_json().dump(2) << "\n";
  else std::cout << rep.table();
  return rep.hard == 0 ? 0 : 1;
}

bool identity_map(const ProblemInstance& p) {
  if (p.l() != p.n()) return false;
  for (std::size_t i = 0; i < p.n(); ++i)
    if (!(p.G[i] == Polynomial::variable(p.variables, i))) return false;
  return true;
}

int cmd_rules(const std::string& file, const std::string& point) {
  ProblemInstance p = load_problem(file);
  Vec x = point.empty() ? p.point : parse_point(point);
  if (p.C && identity_map(p)) {
    RuleResult r = intersection_rule_check(p.K, *p.C, x);
    std::cout << "intersection_rule      " << to_string(r.status) << "  " << r.detail << "\n";
    if (r.witness) std::cout << "    witness = " << to_string(*r.witness) << "\n";
    Verdict v = asymptotic_stability_check(p.K, *p.C, x);
    std::cout << "asymptotic_stability   " << to_string(v.status) << "  " << v.detail << "\n";
  } else {
    std::cout << "intersection_rule      n/a  needs G(x) = x and a set C\n";
  }
  RuleResult pr = preimage_rule_check(p, x);
  std::cout << "preimage_rule          " << to_string(pr.status) << "  " << pr.detail << "\n";
  if (pr.witness) std::cout << "    witness = " << to_string(*pr.witness) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Asymptotic stationarity and regularity checks for geometric constraints"};
  app.require_subcommand(1);
  std::string file, point, checks, csv, set = "K", kind = "limiting", filter, verify;
  std::uint64_t seed = default_seed();
  std::size_t samples = 0;
  double kmax = 1e6, tol = 1e-2;
  bool json = false, decoupled = false;

  auto* analyze = app.add_subcommand("analyze", "Run the stationarity and regularity checks on a problem file");
  analyze->add_option("file", file, "Problem file")->required();
  analyze->add_option("--point", point, "Reference point override, comma-separated rationals");
  analyze->add_option("--checks", checks, "Comma-separated subset of checks");
  analyze->add_option("--seed", seed, "Sampler seed (default: VACONE_SEED or 0)");
  analyze->add_option("--samples", samples, "Number of sampled directions");
  analyze->add_flag("--json", json, "Machine-readable report");
  analyze->add_option("--verify", verify, "Re-check the certificates of a JSON report");

  auto* penalty = app.add_subcommand("penalty", "Quadratic-penalty trace and its classification");
  penalty->add_option("file", file, "Problem file")->required();
  penalty->add_option("--point", point, "Reference point override");
  penalty->add_option("--kmax", kmax, "Largest penalty parameter");
  penalty->add_option("--tol", tol, "Cap on the inner tolerance");
  penalty->add_option("--csv", csv, "Write the trace table here ('-' for stdout)");
  penalty->add_flag("--decoupled", decoupled, "Keep x in C exactly");

  auto* cone = app.add_subcommand("cone", "Tangent and normal cones of K, C or M");
  cone->add_option("file", file, "Problem file")->required();
  cone->add_option("--set", set, "K, C or M");
  cone->add_option("--point", point, "Point of the set (default: reference point or its image)");
  cone->add_option("--kind", kind, "tangent, regular, limiting or linearization");
  cone->add_flag("--json", json, "Machine-readable output");

  auto* catalog = app.add_subcommand("catalog", "Run the built-in example catalog");
  catalog->add_option("--filter", filter, "Only entries whose id contains this text");
  catalog->add_flag("--json", json, "Machine-readable verdict matrix");
  catalog->add_option("--seed", seed, "Sampler seed");

  auto* rules = app.add_subcommand("rules", "Normal-cone calculus rules at the reference point");
  rules->add_option("file", file, "Problem file")->required();
  rules->add_option("--point", point, "Reference point override");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  try {
    if (*analyze) return cmd_analyze(file, point, checks, seed, samples, json, verify);
    if (*penalty) return cmd_penalty(file, point, kmax, tol, csv, decoupled);
    if (*cone) return cmd_cone(file, set, point, kind, json);
    if (*catalog) return cmd_catalog(filter, json, seed);
    if (*rules) return cmd_rules(file, point);
  } catch (const SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const Usage& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
