#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vacone/expr.hpp"
#include "vacone/polyhedral.hpp"

namespace vacone {

/// One smooth piece of a piecewise objective, valid on `region`.
struct SubdiffPiece {
  HPolyhedron region;
  Polynomial f;
};

/// f is either a single polynomial or a finite family of polynomial pieces
/// whose regions cover a neighborhood of every queried point.
class Objective {
 public:
  Objective() = default;
  static Objective polynomial(Polynomial f);
  /// With `convexify` set, ∂f(x) is the convex hull of the active piece
  /// gradients (the regular subdifferential of a convex kink); otherwise each
  /// active gradient is its own singleton (limiting subdifferential of a
  /// concave kink such as -|x|).
  static Objective piecewise(std::vector<SubdiffPiece> pieces, bool convexify);

  bool is_piecewise() const { return !pieces_.empty(); }
  bool convexify() const { return convexify_; }
  const Polynomial& smooth() const { return smooth_; }
  const std::vector<SubdiffPiece>& pieces() const { return pieces_; }
  std::size_t arity() const;

  /// ∂f(x) as a list of polytopes, each given by its vertex gradients.
  std::vector<Mat> subdifferential(const Vec& x) const;

  Rational value(const Vec& x) const;
  double value(const DVec& x) const;
  /// Gradient of the first piece whose region contains x (tolerance 1e-12).
  DVec gradient(const DVec& x) const;
  /// Index of the piece used by gradient(); 0 for a polynomial objective.
  std::size_t active_piece(const DVec& x) const;
  /// Signed slack of x against the nearest region boundary of its piece.
  double boundary_distance(const DVec& x) const;

 private:
  Polynomial smooth_;
  std::vector<SubdiffPiece> pieces_;
  bool convexify_ = false;
};

/// One region near the reference point in a hand-derived description of the
/// multiplier-image map: the subgradients of f there and every value the map
/// takes there.
struct AnalyticRegion {
  std::string label;
  Mat subgradients;
  std::vector<GenCone> values;
};

struct AnalyticVariant {
  std::vector<AnalyticRegion> regions;
  ConeUnion at_point;
};

/// Piecewise-constant multiplier-image data for instances outside the
/// (G, K, C) model. `am` describes M(x, y) (coupled), `dam` the decoupled map.
struct AnalyticData {
  std::string note;
  std::optional<AnalyticVariant> am;
  std::optional<AnalyticVariant> dam;
};

/// A witness sequence stored as expressions in k and h = 1/k.
struct Replay {
  std::vector<Polynomial> x, y, lambda, nu;
  /// "eps": check eps_k = ∇f(x_k) + G'(x_k)^T λ_k + ν_k; "image": check the
  /// coderivative image equals `target`.
  std::string kind;
  std::vector<Polynomial> eps;
  Vec target;
  std::vector<Rational> ks;
};

struct ProblemInstance {
  std::string id;
  std::string description;
  std::string provenance;
  std::vector<std::string> variables;
  Objective f;
  PolyMap G;
  PolyUnion K;
  std::optional<PolyUnion> C;
  Vec point;
  std::optional<PolyUnion> M_explicit;
  std::map<std::string, std::string> expected;
  std::vector<std::string> flags;
  std::optional<AnalyticData> analytic;
  std::optional<Replay> replay;

  std::size_t n() const { return variables.size(); }
  std::size_t l() const { return G.codomain_dim(); }
  bool has_C() const { return C && !C->is_whole_space(); }
  bool has_flag(const std::string& flag) const;
  /// G(x) ∈ K and x ∈ C, exactly.
  bool feasible(const Vec& x) const;
  /// Throws DimensionError on inconsistent data.
  void validate() const;
};

/// Cartesian product of two unions (block pairs).
PolyUnion product(const PolyUnion& a, const PolyUnion& b);

/// The same constraint system with C folded into K: G~(x) = (G(x), x) and
/// K~ = K × C. The coupled multiplier-image map of the original problem is
/// the plain one of the result.
ProblemInstance lift_abstract_set(const ProblemInstance& p);

}  // namespace vacone
