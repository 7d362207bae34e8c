#pragma once

#include <cstdint>
#include <optional>

#include "vacone/polyhedral.hpp"

namespace vacone {

struct Membership {
  bool member = false;
  std::size_t branch = 0;
  Vec weights;  // generator weights in the member branch
};

Membership cone_union_membership(const ConeUnion& u, const Vec& v);

/// min ‖v − w‖₁ over w in the cone, by LP; `nearest` receives a minimizer.
Rational l1_distance(const GenCone& c, const Vec& v, Vec* nearest = nullptr);

/// Union over branch pairs of the generator concatenation, canonicalized.
ConeUnion minkowski_sum(const ConeUnion& u, const ConeUnion& v);

struct InclusionResult {
  bool verified = false;
  /// True when the verdict was decided by the exact facet recursion rather
  /// than only by generator and sample checks.
  bool exact = false;
  std::optional<Vec> counterexample;
};

/// U ⊆ V? Checks every generator and n_samples random conic combinations per
/// U-branch, then decides the remaining cases exactly: a convex cone S lies in
/// V1 ∪ R iff S ∩ {h >= 0} ⊆ R for every facet normal h of V1 with
/// S ∩ {h > 0} nonempty. A failing branch yields a concrete vector of S
/// outside every V-branch.
InclusionResult cone_union_inclusion(const ConeUnion& u, const ConeUnion& v, std::size_t n_samples = 16,
                                     std::uint64_t seed = 0);

/// One realizable activity pattern of a polyhedral union near a base point.
struct ActivityPattern {
  std::vector<bool> included;                    // per block of the union
  std::vector<std::vector<std::size_t>> tight;  // tight inequality rows of included blocks
  Vec direction;                                 // ybar + s*direction realizes it for small s > 0
  GenCone cone;                                  // regular normal cone at such points
};

/// Enumerates activity patterns realized at points arbitrarily close to ybar.
/// Throws CapacityError for more than 20 rows in a block or dimension > 10.
std::vector<ActivityPattern> realizable_patterns(const PolyUnion& s, const Vec& ybar);

/// Limiting normal cone of a polyhedral union as a deduplicated cone union.
ConeUnion limiting_normal_cone(const PolyUnion& s, const Vec& ybar);

/// Regular normal cone at y: intersection of the convex normal cones of the
/// blocks containing y. Smooth blocks contribute cone{∇g_j(y) : g_j(y) = 0}.
GenCone regular_normal_cone(const PolyUnion& s, const Vec& y);

/// Union of the tangent cones (generator form) of the blocks containing y.
ConeUnion tangent_cone_union(const PolyUnion& s, const Vec& y);

}  // namespace vacone
