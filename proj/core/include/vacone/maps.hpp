#pragma once

#include <optional>

#include "vacone/cones.hpp"
#include "vacone/problem.hpp"

namespace vacone {

/// Φ(x) = (G(x) − K, x − C). An absent C means C = Rⁿ.
struct GeometricConstraint {
  PolyMap G;
  PolyUnion K;
  std::optional<PolyUnion> C;

  static GeometricConstraint of(const ProblemInstance& p);
  std::size_t n() const { return G.domain_dim(); }
  std::size_t l() const { return G.codomain_dim(); }
};

/// Limiting normal cone of a polyhedral union. For unions with smooth blocks
/// the point must lie in exactly one block; the convex normal cone
/// cone{∇g_j(y) : g_j(y) = 0} of that block is returned.
ConeUnion normal_cone(const PolyUnion& s, const Vec& y);

/// The coderivative value G'(x)ᵀλ̃ + z* when λ̃ ∈ N_K(G(x) − ỹ) and
/// z* ∈ N_C(x − z); nullopt when the coderivative is empty at these
/// multipliers. Throws DomainError when (x, (ỹ, z)) is not in the graph.
/// Empty z or z* stand for zero vectors.
std::optional<Vec> coderivative(const GeometricConstraint& gc, const Vec& x, const Vec& ytil, const Vec& z,
                                const Vec& lambda, const Vec& zstar);
bool coderivative_contains(const GeometricConstraint& gc, const Vec& x, const Vec& ytil, const Vec& z,
                           const Vec& lambda, const Vec& zstar);

struct MMembership {
  bool member = false;
  Vec lambda;
  Vec nu;
  std::size_t k_branch = 0;
  std::size_t c_branch = 0;
};

/// x* = Jᵀλ + ν with λ ∈ P, ν ∈ Q, decided by one LP over generator weights.
std::optional<std::pair<Vec, Vec>> image_preimage(const Mat& J, const GenCone& P, const GenCone& Q, const Vec& xstar);

/// x* ∈ M̃(x, ỹ) = G'(x)ᵀN_K(G(x) − ỹ) + N_C(x). Requires x ∈ C.
MMembership m_map_membership(const GeometricConstraint& gc, const Vec& x, const Vec& ytil, const Vec& xstar);
/// x* ∈ M(x, (ỹ, z)) = G'(x)ᵀN_K(G(x) − ỹ) + N_C(x − z). Requires x − z ∈ C.
MMembership m_map_membership_coupled(const GeometricConstraint& gc, const Vec& x, const Vec& ytil, const Vec& z,
                                     const Vec& xstar);

/// The branches of M̃(x, ỹ) as explicit cones in Rⁿ (canonicalized). Used
/// only where facet descriptions are needed; membership goes through LPs.
ConeUnion m_map_cones(const GeometricConstraint& gc, const Vec& x, const Vec& ytil);

/// ρ_Γ(x, y) = dist(G(x) − y, K).
double generalized_distance(const GeometricConstraint& gc, const DVec& x, const DVec& y);
double generalized_distance(const GeometricConstraint& gc, const Vec& x, const Vec& y);

}  // namespace vacone
