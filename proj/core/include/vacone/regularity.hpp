#pragma once

#include <cstdint>

#include "vacone/stationarity.hpp"

namespace vacone {

struct RegularityConfig {
  /// Sample radii t; x = x̄ + t d.
  std::vector<Rational> radii{Rational(1, 10), Rational(1, 100), Rational(1, 1000), Rational(1, 10000),
                              Rational(1, 100000), Rational(1, 1000000)};
  /// Number of sampled directions (coordinate directions come first).
  std::size_t directions = 64;
  std::uint64_t seed = 0;
  /// Boundary points per direction for smooth blocks of K.
  std::size_t boundary_samples = 4;
};

/// Decision ladder: polyhedral data, then NNAMCQ, then for polyhedral K the
/// reduced criterion limsup G'(x)ᵀN_K(G(x̄)) ⊆ G'(x̄)ᵀN_K(G(x̄)) with an
/// exact sign analysis, then the facet-limit sampler (also the only step for
/// smooth blocks). An abstract set C is folded into K first.
Verdict am_regularity_check(const ProblemInstance& p, const Vec& xbar, const RegularityConfig& cfg = {});

/// Same ladder for M̃, with samples restricted to x ∈ C and N_C(x) added.
Verdict dam_regularity_check(const ProblemInstance& p, const Vec& xbar, const RegularityConfig& cfg = {});

/// Standard NLP shape K = R₋ᵖ × {0}^q without C; delegates to the AM ladder.
Verdict ccp_check(const ProblemInstance& p, const Vec& xbar, const RegularityConfig& cfg = {});

/// The reduced criterion limsup K(x) ⊆ K(x̄), K(x) = G'(x)ᵀN_K(G(x̄)),
/// evaluated for any K (also where it does not characterize AM-regularity).
Verdict reduced_criterion_check(const ProblemInstance& p, const Vec& xbar, const RegularityConfig& cfg = {});

/// Rational sample directions: ±e_i, then seeded random integer vectors.
std::vector<Vec> sample_directions(std::size_t n, std::size_t count, std::uint64_t seed);

}  // namespace vacone
