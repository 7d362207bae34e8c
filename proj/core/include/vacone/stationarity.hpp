#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vacone/maps.hpp"
#include "vacone/problem.hpp"

namespace vacone {

enum class Status { Proved, Refuted, Unknown };
std::string to_string(Status s);

struct NamedVec {
  std::string name;
  Vec value;
};

/// Proved / Refuted / Unknown with machine-checkable evidence. `sequence`
/// holds witness-sequence records (one list of named vectors per term).
struct Verdict {
  Status status = Status::Unknown;
  std::string method;
  std::string detail;
  std::vector<NamedVec> evidence;
  std::vector<std::vector<NamedVec>> sequence;

  const Vec* find(const std::string& name) const;
  static Verdict make(Status s, std::string method, std::string detail = {});
};

/// M-stationarity: some x*_f ∈ ∂f(x̄) with -x*_f ∈ M̃(x̄, 0). Evidence:
/// "subgradient", "lambda", "nu" with 0 = x*_f + G'(x̄)ᵀλ + ν exactly.
Verdict m_stationarity_check(const ProblemInstance& p, const Vec& xbar);

/// Abnormal multiplier: (λ, ν) ≠ 0 with G'(x̄)ᵀλ + ν = 0, λ ∈ N_K(G(x̄)),
/// ν ∈ N_C(x̄). Per branch pair the solution set is a polyhedral cone; a
/// nonzero generator of it is the certificate ("lambda", "nu").
Verdict fjm_abnormal_check(const ProblemInstance& p, const Vec& xbar);
bool nnamcq_check(const ProblemInstance& p, const Vec& xbar);

/// FJM-stationarity: an abnormal multiplier exists (λ₀ = 0) or x̄ is
/// M-stationary (λ₀ = 1). Both sides are exact, so the verdict is never Unknown.
Verdict fjm_stationarity_check(const ProblemInstance& p, const Vec& xbar);

/// G affine and K, C purely polyhedral.
bool polyhedrality_check(const ProblemInstance& p);

/// {d | G'(x̄)d ∈ T_K(G(x̄))}, one branch per active block, merged where the
/// union of branches is itself convex.
ConeUnion linearization_cone(const ProblemInstance& p, const Vec& xbar);

/// Replaces pairs of branches by their sum while the sum stays inside the
/// union (exact inclusion), so R₋ ∪ R₊ becomes R.
ConeUnion merge_convex_branches(const ConeUnion& u);

/// T_M(x̄) = L_M(x̄) (GACQ) and T_M(x̄)° = L_M(x̄)° (GGCQ) against an explicit
/// description of M; Unknown without one.
Verdict gacq_check(const ProblemInstance& p, const Vec& xbar);
Verdict ggcq_check(const ProblemInstance& p, const Vec& xbar);

struct ProbeSample {
  double t = 0;
  DVec x;
  double dist_to_M = 0;
  double residual = 0;
  double ratio = 0;
};

struct ProbeReport {
  std::vector<ProbeSample> samples;
  double max_ratio = 0;
  /// Ratios grow monotonically along some direction by at least a factor 10.
  bool diverging = false;
  std::string summary() const;
};

/// dist(x, M)/ρ(x) along x = x̄ + t d, with ρ(x) = dist(G(x), K) + dist(x, C).
/// Evidence only; never a proof either way.
ProbeReport subregularity_probe(const ProblemInstance& p, const Vec& xbar, const std::vector<DVec>& directions,
                                const std::vector<double>& radii = {1e-1, 1e-2, 1e-3, 1e-4});
/// Coordinate directions, their negatives, and the all-ones diagonals.
std::vector<DVec> default_probe_directions(std::size_t n);

/// Replays a stored witness sequence exactly at every listed k.
struct ReplayResult {
  bool ok = false;
  std::size_t checked = 0;
  std::vector<std::string> failures;
};
ReplayResult replay_sequence(const ProblemInstance& p);

/// Analytic-region checks (instances outside the (G, K, C) model).
/// Gap test: every subgradient of every region is at positive distance from
/// the negated values there, so stationarity in the asymptotic sense fails.
Verdict analytic_stationarity(const AnalyticVariant& v, const std::string& label);
/// limsup of the region values ⊆ value at the point.
Verdict analytic_regularity(const AnalyticVariant& v, const std::string& label);
/// ∂f(x̄) ∩ (−limsup M) ≠ ∅ for the regions' data.
Verdict analytic_limsup_condition(const AnalyticVariant& v, const Mat& subgradients_at_point);

/// AM-stationarity: a replayed witness sequence, an M-stationarity proof
/// (constant sequence), or an analytic gap refutation; otherwise Unknown.
Verdict am_stationarity_check(const ProblemInstance& p, const Vec& xbar);
Verdict dam_stationarity_check(const ProblemInstance& p, const Vec& xbar);

struct TraceRecord {
  double k = 0;
  DVec x, y, lambda, nu, eps;
  double residual = 0;
  double inner_tol = 0;
  std::size_t k_branch = 0;
  std::size_t c_branch = 0;
  bool normal_verified = false;
};

struct AMTrace {
  std::vector<TraceRecord> records;
  std::string status = "complete";
  bool decoupled = false;
};

enum class TraceClass { MLimit, Abnormal, Inconclusive };
std::string to_string(TraceClass c);

struct ClassifyConfig {
  double bound_factor = 1e3;
  double growth_threshold = 1e2;
  long max_denominator = 1'000'000;
};

struct TraceClassification {
  TraceClass kind = TraceClass::Inconclusive;
  Vec lambda;
  Vec nu;
  std::string detail;
};

/// Diverging multipliers (last/first norm ratio above the growth threshold)
/// are normalized, snapped, and verified as an exact abnormal multiplier;
/// bounded ones are snapped and verified as an exact M-stationarity
/// multiplier. Failed verification downgrades to Inconclusive.
TraceClassification classify_trace(const AMTrace& t, const Vec& xbar, const ProblemInstance& p,
                                   const ClassifyConfig& cfg = {});

}  // namespace vacone
