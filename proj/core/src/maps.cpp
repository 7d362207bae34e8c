#include "vacone/maps.hpp"

#include "vacone/lp.hpp"
#include "vacone/projection.hpp"

namespace vacone {

GeometricConstraint GeometricConstraint::of(const ProblemInstance& p) {
  GeometricConstraint gc{p.G, p.K, std::nullopt};
  if (p.has_C()) gc.C = p.C;
  return gc;
}

ConeUnion normal_cone(const PolyUnion& s, const Vec& y) {
  if (y.size() != s.dim) throw DimensionError("normal cone point dimension mismatch");
  if (s.purely_polyhedral()) return limiting_normal_cone(s, y);
  auto act = s.active_blocks(y);
  if (act.empty()) throw DomainError("normal cone: point " + to_string(y) + " is not in the set");
  if (act.size() > 1)
    throw Error("normal cone: a point shared by several blocks of a union with smooth blocks is not supported");
  return canonicalize(ConeUnion::single(regular_normal_cone(s, y)));
}

namespace {

ConeUnion c_normal(const GeometricConstraint& gc, const Vec& v) {
  if (!gc.C) return ConeUnion::single(GenCone::zero(gc.n()));
  return normal_cone(*gc.C, v);
}

void check_graph(const GeometricConstraint& gc, const Vec& x, const Vec& ytil, const Vec* cpoint) {
  if (x.size() != gc.n() || ytil.size() != gc.l()) throw DimensionError("graph point dimension mismatch");
  if (!gc.K.contains(sub(gc.G.eval(x), ytil))) throw DomainError("(x, y) is not in the graph: G(x) - y is not in K");
  if (cpoint && gc.C && !gc.C->contains(*cpoint)) throw DomainError("(x, z) is not in the graph: x - z is not in C");
}

MMembership membership(const GeometricConstraint& gc, const Vec& x, const Vec& ytil, const Vec& cpoint,
                       const Vec& xstar) {
  if (xstar.size() != gc.n()) throw DimensionError("x* dimension mismatch");
  ConeUnion nk = normal_cone(gc.K, sub(gc.G.eval(x), ytil));
  ConeUnion nc = c_normal(gc, cpoint);
  Mat J = gc.G.jacobian(x);
  for (std::size_t i = 0; i < nk.branches.size(); ++i) {
    for (std::size_t j = 0; j < nc.branches.size(); ++j) {
      if (auto w = image_preimage(J, nk.branches[i], nc.branches[j], xstar)) {
        return MMembership{true, w->first, w->second, i, j};
      }
    }
  }
  return {};
}

}  // namespace

std::optional<Vec> coderivative(const GeometricConstraint& gc, const Vec& x, const Vec& ytil, const Vec& z,
                                const Vec& lambda, const Vec& zstar_in) {
  const Vec zero(gc.n(), Rational(0));
  const Vec& zstar = zstar_in.empty() ? zero : zstar_in;
  Vec cpoint = z.empty() ? x : sub(x, z);
  check_graph(gc, x, ytil, &cpoint);
  if (lambda.size() != gc.l() || zstar.size() != gc.n()) throw DimensionError("multiplier dimension mismatch");
  if (!cone_union_membership(normal_cone(gc.K, sub(gc.G.eval(x), ytil)), lambda).member) return std::nullopt;
  if (!cone_union_membership(c_normal(gc, cpoint), zstar).member) return std::nullopt;
  return add(mat_t_vec(gc.G.jacobian(x), lambda, gc.n()), zstar);
}

bool coderivative_contains(const GeometricConstraint& gc, const Vec& x, const Vec& ytil, const Vec& z,
                           const Vec& lambda, const Vec& zstar) {
  return coderivative(gc, x, ytil, z, lambda, zstar).has_value();
}

std::optional<std::pair<Vec, Vec>> image_preimage(const Mat& J, const GenCone& P, const GenCone& Q,
                                                  const Vec& xstar) {
  const std::size_t n = xstar.size();
  Mat pg = P.rays, qg = Q.rays;
  const std::size_t pr = pg.size(), qr = qg.size();
  pg.insert(pg.end(), P.lineality.begin(), P.lineality.end());
  qg.insert(qg.end(), Q.lineality.begin(), Q.lineality.end());
  LpProblem lp(pg.size() + qg.size());
  for (std::size_t i = 0; i < pr; ++i) lp.nonneg[i] = true;
  for (std::size_t j = 0; j < qr; ++j) lp.nonneg[pg.size() + j] = true;
  Mat cols;
  for (const auto& g : pg) cols.push_back(mat_t_vec(J, g, n));
  for (const auto& g : qg) cols.push_back(g);
  for (std::size_t r = 0; r < n; ++r) {
    Vec row(cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) row[c] = cols[c][r];
    lp.add_eq(row, xstar[r]);
  }
  LpResult res = solve_lp(lp);
  if (res.status == LpStatus::Infeasible) return std::nullopt;
  Vec lambda(P.dim, Rational(0)), nu(Q.dim, Rational(0));
  for (std::size_t i = 0; i < pg.size(); ++i) lambda = add(lambda, scale(pg[i], res.point[i]));
  for (std::size_t j = 0; j < qg.size(); ++j) nu = add(nu, scale(qg[j], res.point[pg.size() + j]));
  return std::make_pair(lambda, nu);
}

MMembership m_map_membership(const GeometricConstraint& gc, const Vec& x, const Vec& ytil, const Vec& xstar) {
  check_graph(gc, x, ytil, &x);
  return membership(gc, x, ytil, x, xstar);
}

MMembership m_map_membership_coupled(const GeometricConstraint& gc, const Vec& x, const Vec& ytil, const Vec& z,
                                     const Vec& xstar) {
  Vec cpoint = sub(x, z);
  check_graph(gc, x, ytil, &cpoint);
  return membership(gc, x, ytil, cpoint, xstar);
}

ConeUnion m_map_cones(const GeometricConstraint& gc, const Vec& x, const Vec& ytil) {
  check_graph(gc, x, ytil, &x);
  ConeUnion nk = normal_cone(gc.K, sub(gc.G.eval(x), ytil));
  ConeUnion nc = c_normal(gc, x);
  Mat J = gc.G.jacobian(x);
  ConeUnion out(gc.n());
  for (const auto& p : nk.branches) {
    GenCone img = image_transpose(J, p, gc.n());
    for (const auto& q : nc.branches) out.branches.push_back(sum(img, q));
  }
  return canonicalize(out);
}

double generalized_distance(const GeometricConstraint& gc, const DVec& x, const DVec& y) {
  DVec gx = gc.G.eval(x);
  if (gx.size() != y.size()) throw DimensionError("generalized distance dimension mismatch");
  for (std::size_t i = 0; i < y.size(); ++i) gx[i] -= y[i];
  return distance(gc.K, gx);
}

double generalized_distance(const GeometricConstraint& gc, const Vec& x, const Vec& y) {
  return project(gc.K, sub(gc.G.eval(x), y)).dist;
}

}  // namespace vacone
