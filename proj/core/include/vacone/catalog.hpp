#pragma once

#include <string>
#include <vector>

#include "vacone/problem_io.hpp"
#include "vacone/regularity.hpp"

namespace vacone {

struct EmbeddedFile {
  const char* name;
  const char* body;
};

/// Problem files compiled into the library (generated at build time).
const std::vector<EmbeddedFile>& embedded_catalog_files();

/// Every catalog entry, in file-name order. Throws SchemaError naming the
/// entry for a malformed file or an unknown expected-verdict key.
std::vector<ProblemInstance> load_catalog();

/// Expected-verdict keys understood by run_catalog:
///   m_stat, am_stat, dam_stat, fjm, nnamcq, am_reg, dam_reg, ccp,
///   reduced_criterion, gacq, ggcq, consequence, preimage_rule   Proved | Refuted
///     (am_stat also accepts Certified: Proved by an exact sequence replay)
///   replay        Verified
///   subreg_probe  bounded | diverges
///   lin_cone      whole | zero
const std::vector<std::string>& expected_keys();

/// One check of one entry. outcome: "pass", "hard" (contradicts the expected
/// verdict, or an error), "soft" (Unknown where a verdict was expected).
struct CheckOutcome {
  std::string check;
  std::string expected;
  std::string got;
  std::string outcome;
  Verdict verdict;
  double seconds = 0;
};

struct EntryReport {
  std::string id;
  std::string description;
  std::vector<CheckOutcome> checks;
};

struct CatalogReport {
  std::vector<EntryReport> entries;
  std::size_t hard = 0;
  std::size_t soft = 0;
  std::size_t passed = 0;

  Json to_json() const;
  std::string table() const;
};

struct VerifyResult {
  bool applicable = false;
  bool ok = false;
  std::string detail;
};

/// Re-runs only the exact substitution checks behind a verdict's evidence:
/// multiplier identities and cone memberships for stationarity proofs and
/// abnormal multipliers, witness exclusion plus member-of-value along the
/// stored sequence for sampled regularity refutations, and exact sequence
/// replays. Verdicts without such evidence are reported as not applicable.
VerifyResult verify_evidence(const ProblemInstance& p, const Vec& xbar, const std::string& check, const Verdict& v);

/// Runs one expected-verdict check on an instance.
CheckOutcome run_check(const ProblemInstance& p, const std::string& key, const std::string& expected,
                       const RegularityConfig& cfg = {});

/// Runs every expected check of the entries whose id contains `filter`.
CatalogReport run_catalog(const std::string& filter = "", const RegularityConfig& cfg = {});
CatalogReport run_instances(const std::vector<ProblemInstance>& entries, const RegularityConfig& cfg = {});

}  // namespace vacone
