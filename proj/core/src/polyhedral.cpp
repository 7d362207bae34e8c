#include "vacone/polyhedral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vacone/double_description.hpp"
#include "vacone/linalg.hpp"

namespace vacone {

void HPolyhedron::add(Vec a, Rational rhs, bool equality) {
  if (a.size() != dim) throw DimensionError("HPolyhedron row has wrong length");
  A.push_back(std::move(a));
  b.push_back(std::move(rhs));
  eq.push_back(equality);
}

bool HPolyhedron::contains(const Vec& y) const {
  if (y.size() != dim) throw DimensionError("point dimension does not match polyhedron");
  for (std::size_t i = 0; i < A.size(); ++i) {
    Rational v = dot(A[i], y);
    if (eq[i] ? v != b[i] : v > b[i]) return false;
  }
  return true;
}

bool HPolyhedron::is_cone() const {
  for (const auto& v : b)
    if (v != 0) return false;
  return true;
}

bool HPolyhedron::is_empty() const { return lp_feasible(*this).status == LpStatus::Infeasible; }

std::vector<std::size_t> HPolyhedron::active_rows(const Vec& y) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < A.size(); ++i)
    if (!eq[i] && dot(A[i], y) == b[i]) out.push_back(i);
  return out;
}

HPolyhedron HPolyhedron::cone(std::size_t d, const Mat& le, const Mat& eqs) {
  HPolyhedron h(d);
  for (const auto& r : le) h.add_le(r);
  for (const auto& r : eqs) h.add_eq(r);
  return h;
}

GenCone::GenCone(std::size_t d, Mat r, Mat l) : dim(d), rays(std::move(r)), lineality(std::move(l)) {
  for (const auto& v : rays)
    if (v.size() != dim) throw DimensionError("ray has wrong dimension");
  for (const auto& v : lineality)
    if (v.size() != dim) throw DimensionError("lineality vector has wrong dimension");
  rays.erase(std::remove_if(rays.begin(), rays.end(), [](const Vec& v) { return vacone::is_zero(v); }), rays.end());
  lineality.erase(std::remove_if(lineality.begin(), lineality.end(), [](const Vec& v) { return vacone::is_zero(v); }),
                  lineality.end());
}

GenCone GenCone::whole(std::size_t d) {
  GenCone c(d);
  for (std::size_t i = 0; i < d; ++i) {
    Vec e(d, Rational(0));
    e[i] = 1;
    c.lineality.push_back(std::move(e));
  }
  return c;
}

std::optional<Vec> GenCone::decompose(const Vec& v) const {
  if (v.size() != dim) throw DimensionError("vector dimension does not match cone");
  const std::size_t nr = rays.size(), nl = lineality.size();
  if (vacone::is_zero(v)) return Vec(nr + nl, Rational(0));
  if (nr + nl == 0) return std::nullopt;
  LpProblem lp(nr + nl);
  for (std::size_t j = 0; j < nr; ++j) lp.nonneg[j] = true;
  for (std::size_t i = 0; i < dim; ++i) {
    Vec row(nr + nl);
    for (std::size_t j = 0; j < nr; ++j) row[j] = rays[j][i];
    for (std::size_t j = 0; j < nl; ++j) row[nr + j] = lineality[j][i];
    lp.add_eq(std::move(row), v[i]);
  }
  LpResult r = solve_lp(lp);
  if (r.status == LpStatus::Infeasible) return std::nullopt;
  return r.point;
}

bool GenCone::contains(const Vec& v) const { return decompose(v).has_value(); }

bool GenCone::is_zero() const { return rays.empty() && lineality.empty(); }

Mat GenCone::all_generators() const {
  Mat out = rays;
  for (const auto& l : lineality) {
    out.push_back(l);
    out.push_back(scale(l, Rational(-1)));
  }
  return out;
}

bool SmoothConvexBlock::contains(const Vec& y) const {
  for (const auto& p : g)
    if (p.eval(y) > 0) return false;
  return true;
}

bool SmoothConvexBlock::contains(const DVec& y, double tol) const {
  for (const auto& p : g)
    if (p.eval(y) > tol) return false;
  return true;
}

std::vector<std::size_t> SmoothConvexBlock::active(const Vec& y) const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < g.size(); ++j)
    if (g[j].eval(y) == 0) out.push_back(j);
  return out;
}

PolyUnion::PolyUnion(std::size_t d, std::vector<Block> b) : dim(d), blocks(std::move(b)) {
  for (const auto& blk : blocks) {
    std::size_t bd = std::visit([](const auto& x) { return x.dim; }, blk);
    if (bd != dim) throw DimensionError("union blocks must share the ambient dimension");
  }
}

PolyUnion PolyUnion::whole(std::size_t d) { return PolyUnion(d, {HPolyhedron(d)}); }

PolyUnion PolyUnion::of(HPolyhedron h) {
  std::size_t d = h.dim;
  return PolyUnion(d, {std::move(h)});
}

bool PolyUnion::contains(const Vec& y) const { return !active_blocks(y).empty(); }

std::vector<std::size_t> PolyUnion::active_blocks(const Vec& y) const {
  if (y.size() != dim) throw DimensionError("point dimension does not match union");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < blocks.size(); ++i)
    if (std::visit([&](const auto& b) { return b.contains(y); }, blocks[i])) out.push_back(i);
  return out;
}

bool PolyUnion::purely_polyhedral() const {
  for (const auto& b : blocks)
    if (!std::holds_alternative<HPolyhedron>(b)) return false;
  return true;
}

bool PolyUnion::is_whole_space() const {
  for (const auto& b : blocks)
    if (const auto* h = std::get_if<HPolyhedron>(&b); h && h->rows() == 0) return true;
  return false;
}

ConeUnion ConeUnion::single(GenCone c) {
  std::size_t d = c.dim;
  return ConeUnion(d, {std::move(c)});
}

LpResult lp_feasible(const HPolyhedron& h, const std::optional<Vec>& objective) {
  LpProblem lp(h.dim);
  for (std::size_t i = 0; i < h.rows(); ++i) lp.add_row(h.A[i], h.b[i], h.eq[i]);
  if (objective) {
    if (objective->size() != h.dim) throw DimensionError("objective dimension mismatch");
    lp.objective = *objective;
  }
  return solve_lp(lp);
}

GenCone to_generators(const HPolyhedron& cone) {
  if (!cone.is_cone()) throw Error("to_generators: input is not a cone (nonzero right-hand side)");
  Mat le, eqs;
  for (std::size_t i = 0; i < cone.rows(); ++i) (cone.eq[i] ? eqs : le).push_back(cone.A[i]);
  ConeGenerators g = double_description(le, eqs, cone.dim);
  return GenCone(cone.dim, std::move(g.rays), std::move(g.lineality));
}

HPolyhedron polar(const GenCone& c) { return HPolyhedron::cone(c.dim, c.rays, c.lineality); }

GenCone polar_h(const HPolyhedron& c) {
  if (!c.is_cone()) throw Error("polar_h: input is not a cone (nonzero right-hand side)");
  GenCone g(c.dim);
  for (std::size_t i = 0; i < c.rows(); ++i) {
    if (vacone::is_zero(c.A[i])) continue;
    (c.eq[i] ? g.lineality : g.rays).push_back(c.A[i]);
  }
  return g;
}

HPolyhedron to_hform(const GenCone& c) { return polar(to_generators(polar(c))); }

HPolyhedron tangent_cone_convex(const HPolyhedron& d, const Vec& y) {
  if (!d.contains(y)) throw DomainError("tangent_cone_convex: point is not in the polyhedron");
  HPolyhedron t(d.dim);
  for (std::size_t i = 0; i < d.rows(); ++i) {
    if (d.eq[i]) {
      t.add_eq(d.A[i]);
    } else if (dot(d.A[i], y) == d.b[i]) {
      t.add_le(d.A[i]);
    }
  }
  return t;
}

GenCone normal_cone_convex(const HPolyhedron& d, const Vec& y) { return polar_h(tangent_cone_convex(d, y)); }

GenCone canonicalize(const GenCone& c) {
  GenCone g = to_generators(to_hform(c));
  Mat basis = span_basis(g.lineality, c.dim);
  GenCone out(c.dim);
  out.lineality = basis;
  // Orthogonal projection onto the complement of the lineality space.
  Mat gram(basis.size(), Vec(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j) gram[i][j] = dot(basis[i], basis[j]);
  for (const auto& r : g.rays) {
    Vec v = r;
    if (!basis.empty()) {
      Vec rhs(basis.size());
      for (std::size_t i = 0; i < basis.size(); ++i) rhs[i] = dot(basis[i], r);
      Vec alpha = *solve(gram, rhs, basis.size());
      for (std::size_t i = 0; i < basis.size(); ++i) v = sub(v, scale(basis[i], alpha[i]));
    }
    if (vacone::is_zero(v)) continue;
    out.rays.push_back(normalize_leading(v));
  }
  std::sort(out.rays.begin(), out.rays.end());
  out.rays.erase(std::unique(out.rays.begin(), out.rays.end()), out.rays.end());
  return out;
}

bool same_cone(const GenCone& a, const GenCone& b) {
  if (a.dim != b.dim) return false;
  GenCone ca = canonicalize(a), cb = canonicalize(b);
  return ca.rays == cb.rays && ca.lineality == cb.lineality;
}

bool cone_subset(const GenCone& a, const GenCone& b) {
  if (a.dim != b.dim) throw DimensionError("cone_subset: dimension mismatch");
  for (const auto& g : a.all_generators())
    if (!b.contains(g)) return false;
  return true;
}

GenCone intersect(const std::vector<GenCone>& cs, std::size_t dim) {
  HPolyhedron h(dim);
  for (const auto& c : cs) {
    if (c.dim != dim) throw DimensionError("intersect: dimension mismatch");
    HPolyhedron hc = to_hform(c);
    for (std::size_t i = 0; i < hc.rows(); ++i) h.add(hc.A[i], 0, hc.eq[i]);
  }
  return to_generators(h);
}

GenCone intersect(const GenCone& a, const GenCone& b) { return intersect({a, b}, a.dim); }

GenCone sum(const GenCone& a, const GenCone& b) {
  if (a.dim != b.dim) throw DimensionError("sum: dimension mismatch");
  GenCone s = a;
  s.rays.insert(s.rays.end(), b.rays.begin(), b.rays.end());
  s.lineality.insert(s.lineality.end(), b.lineality.begin(), b.lineality.end());
  return s;
}

GenCone image_transpose(const Mat& m, const GenCone& c, std::size_t out_dim) {
  GenCone out(out_dim);
  for (const auto& r : c.rays) {
    Vec v = mat_t_vec(m, r, out_dim);
    if (!vacone::is_zero(v)) out.rays.push_back(std::move(v));
  }
  for (const auto& l : c.lineality) {
    Vec v = mat_t_vec(m, l, out_dim);
    if (!vacone::is_zero(v)) out.lineality.push_back(std::move(v));
  }
  return out;
}

ConeUnion canonicalize(const ConeUnion& u) {
  std::vector<GenCone> canon;
  for (const auto& b : u.branches) {
    GenCone c = canonicalize(b);
    bool dup = false;
    for (const auto& e : canon)
      if (e.rays == c.rays && e.lineality == c.lineality) dup = true;
    if (!dup) canon.push_back(std::move(c));
  }
  ConeUnion out(u.dim);
  for (std::size_t i = 0; i < canon.size(); ++i) {
    bool contained = false;
    for (std::size_t j = 0; j < canon.size() && !contained; ++j)
      if (i != j && cone_subset(canon[i], canon[j])) contained = true;
    if (!contained) out.branches.push_back(canon[i]);
  }
  return out;
}

std::string to_string(const GenCone& c) {
  std::ostringstream os;
  os << "rays[";
  for (std::size_t i = 0; i < c.rays.size(); ++i) os << (i ? " " : "") << to_string(c.rays[i]);
  os << "] lineality[";
  for (std::size_t i = 0; i < c.lineality.size(); ++i) os << (i ? " " : "") << to_string(c.lineality[i]);
  os << "]";
  return os.str();
}

}  // namespace vacone
