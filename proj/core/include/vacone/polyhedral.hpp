#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "vacone/expr.hpp"
#include "vacone/lp.hpp"
#include "vacone/rational.hpp"

namespace vacone {

/// {y | A_i y <= b_i (or = b_i when eq[i])}.
struct HPolyhedron {
  std::size_t dim = 0;
  Mat A;
  Vec b;
  std::vector<bool> eq;

  HPolyhedron() = default;
  explicit HPolyhedron(std::size_t d) : dim(d) {}

  void add(Vec a, Rational rhs, bool equality = false);
  void add_le(Vec a, Rational rhs = 0) { add(std::move(a), std::move(rhs), false); }
  void add_eq(Vec a, Rational rhs = 0) { add(std::move(a), std::move(rhs), true); }
  std::size_t rows() const { return A.size(); }

  bool contains(const Vec& y) const;
  bool is_cone() const;
  bool is_empty() const;
  /// Indices of inequality rows tight at y.
  std::vector<std::size_t> active_rows(const Vec& y) const;

  static HPolyhedron whole(std::size_t d) { return HPolyhedron(d); }
  /// Cone {y | le y <= 0, eq y = 0}.
  static HPolyhedron cone(std::size_t d, const Mat& le, const Mat& eqs = {});
};

/// cone{rays} + span{lineality}.
struct GenCone {
  std::size_t dim = 0;
  Mat rays;
  Mat lineality;

  GenCone() = default;
  explicit GenCone(std::size_t d) : dim(d) {}
  GenCone(std::size_t d, Mat r, Mat l = {});

  static GenCone zero(std::size_t d) { return GenCone(d); }
  static GenCone whole(std::size_t d);

  bool contains(const Vec& v) const;
  /// Generator weights (ray weights then lineality weights) when v is a member.
  std::optional<Vec> decompose(const Vec& v) const;
  bool is_zero() const;
  /// All generators, lineality listed with both signs.
  Mat all_generators() const;
};

/// {y | g_j(y) <= 0 for all j}, each g_j convex by assumption. Blocks with
/// `convex` cleared are accepted only as feasible-set descriptions for
/// distance probes.
struct SmoothConvexBlock {
  std::size_t dim = 0;
  std::vector<Polynomial> g;
  Vec slater;
  bool convex = true;

  bool contains(const Vec& y) const;
  bool contains(const DVec& y, double tol) const;
  /// Indices j with g_j(y) = 0 exactly.
  std::vector<std::size_t> active(const Vec& y) const;
};

using Block = std::variant<HPolyhedron, SmoothConvexBlock>;

/// Finite union of blocks sharing one ambient dimension.
struct PolyUnion {
  std::size_t dim = 0;
  std::vector<Block> blocks;

  PolyUnion() = default;
  explicit PolyUnion(std::size_t d) : dim(d) {}
  PolyUnion(std::size_t d, std::vector<Block> b);

  static PolyUnion whole(std::size_t d);
  static PolyUnion of(HPolyhedron h);

  bool contains(const Vec& y) const;
  bool purely_polyhedral() const;
  bool is_whole_space() const;
  /// Indices of blocks containing y.
  std::vector<std::size_t> active_blocks(const Vec& y) const;
  const HPolyhedron& poly(std::size_t i) const { return std::get<HPolyhedron>(blocks[i]); }
};

struct ConeUnion {
  std::size_t dim = 0;
  std::vector<GenCone> branches;

  ConeUnion() = default;
  explicit ConeUnion(std::size_t d) : dim(d) {}
  ConeUnion(std::size_t d, std::vector<GenCone> b) : dim(d), branches(std::move(b)) {}
  static ConeUnion single(GenCone c);
};

/// Feasibility (and optional maximization) over an H-polyhedron.
LpResult lp_feasible(const HPolyhedron& h, const std::optional<Vec>& objective = std::nullopt);

/// Generator form of an H-cone (double description).
GenCone to_generators(const HPolyhedron& cone);
/// Irredundant H-form of a generated cone.
HPolyhedron to_hform(const GenCone& c);

/// Polar of cone{R}+span{L} is {v | R v <= 0, L v = 0}.
HPolyhedron polar(const GenCone& c);
/// Polar of an H-cone is generated by its rows (equality rows as lineality).
GenCone polar_h(const HPolyhedron& c);

HPolyhedron tangent_cone_convex(const HPolyhedron& d, const Vec& y);
GenCone normal_cone_convex(const HPolyhedron& d, const Vec& y);

/// Minimal generators with RREF lineality basis, rays projected onto the
/// orthogonal complement of the lineality space, scaled so the first nonzero
/// entry has absolute value one, and sorted.
GenCone canonicalize(const GenCone& c);
bool same_cone(const GenCone& a, const GenCone& b);
/// Exact inclusion between convex cones (generator membership).
bool cone_subset(const GenCone& a, const GenCone& b);
GenCone intersect(const GenCone& a, const GenCone& b);
GenCone intersect(const std::vector<GenCone>& cs, std::size_t dim);
GenCone sum(const GenCone& a, const GenCone& b);
/// Image under the linear map x -> M^T x (M has rows in the domain of c).
GenCone image_transpose(const Mat& m, const GenCone& c, std::size_t out_dim);

/// Canonicalizes every branch, drops duplicates and branches contained in
/// another branch; keeps first-occurrence order.
ConeUnion canonicalize(const ConeUnion& u);

std::string to_string(const GenCone& c);

}  // namespace vacone
