#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vacone/cones.hpp"
#include "vacone/problem.hpp"
#include "vacone/stationarity.hpp"

namespace vacone {

struct BruteForceConfig {
  /// Strictly decreasing, smallest at least 10⁻⁶. Kept small so that every
  /// sampled point lies in the neighbourhood where the regular normal cones
  /// of a polyhedral union already take their limiting values.
  std::vector<Rational> radii{Rational(1, 10000), Rational(1, 100000), Rational(1, 1000000)};
  std::size_t samples_per_radius = 64;
  /// Relative L1 tolerance used by BruteForceCloud::approaches.
  double tol = 1e-3;
  std::uint64_t seed = 0;
};

/// Regular normal cones sampled at points of S near ȳ, plus their generators
/// normalized to unit Euclidean length.
struct BruteForceCloud {
  std::size_t dim = 0;
  std::vector<GenCone> cones;
  std::vector<DVec> rays;

  /// v lies in one of the sampled cones exactly.
  bool contains(const Vec& v) const;
  /// v is within relative L1 distance `tol` of one of the sampled cones.
  bool approaches(const Vec& v, double tol) const;
};

/// Limiting normal cone by its definition: sample points y of S near ȳ (exact
/// projections of jittered points onto every block, per radius, kept when
/// ‖y − ȳ‖₂ ≤ r√dim) and collect the exact regular normal cones there.
/// Approximates N_S(ȳ) from inside.
BruteForceCloud brute_force_limiting_cone(const PolyUnion& s, const Vec& ybar, const BruteForceConfig& cfg = {});

enum class RuleStatus { Holds, Violated, Unknown };
std::string to_string(RuleStatus s);

struct RuleResult {
  RuleStatus status = RuleStatus::Unknown;
  std::string detail;
  std::optional<Vec> witness;
};

/// Block-pairwise intersection of two unions, empty pieces dropped.
PolyUnion intersect_unions(const PolyUnion& a, const PolyUnion& b);

/// N_{K∩C}(x̄) ⊆ N_K(x̄) + N_C(x̄) for polyhedral unions.
RuleResult intersection_rule_check(const PolyUnion& K, const PolyUnion& C, const Vec& xbar);

/// limsup (N_K(x) + N_C(x′)) ⊆ N_K(x̄) + N_C(x̄) with x ∈ K, x′ ∈ C approaching
/// x̄ independently, decided over the finitely many nearby activity patterns.
Verdict asymptotic_stability_check(const PolyUnion& K, const PolyUnion& C, const Vec& xbar);

/// N_M(x̄) ⊆ M(x̄, 0) for the feasible set given explicitly as M_explicit.
RuleResult preimage_rule_check(const ProblemInstance& p, const Vec& xbar);

}  // namespace vacone
