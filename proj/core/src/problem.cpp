#include "vacone/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vacone {

namespace {

std::vector<std::string> names(const std::string& stem, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(stem + std::to_string(i + 1));
  return out;
}

// p(y) viewed as a polynomial in `total` variables, its own variables placed
// starting at `offset`.
Polynomial embed(const Polynomial& p, const std::vector<std::string>& vars, std::size_t offset) {
  Polynomial out(vars);
  for (const auto& [e, c] : p.terms()) {
    Exponent big(vars.size(), 0);
    for (std::size_t i = 0; i < e.size(); ++i) big[offset + i] = e[i];
    out.add_term(big, c);
  }
  return out;
}

std::vector<Polynomial> as_polynomials(const HPolyhedron& h, const std::vector<std::string>& vars) {
  std::vector<Polynomial> out;
  for (std::size_t r = 0; r < h.rows(); ++r) {
    Polynomial g = Polynomial::constant(vars, -h.b[r]);
    for (std::size_t i = 0; i < h.dim; ++i) g += Polynomial::variable(vars, i) * h.A[r][i];
    out.push_back(g);
    if (h.eq[r]) out.push_back(-g);
  }
  return out;
}

SmoothConvexBlock as_smooth(const Block& b, std::size_t dim) {
  if (const auto* s = std::get_if<SmoothConvexBlock>(&b)) return *s;
  const auto& h = std::get<HPolyhedron>(b);
  SmoothConvexBlock s;
  s.dim = dim;
  s.g = as_polynomials(h, names("y", dim));
  auto lp = lp_feasible(h);
  s.slater = lp.status == LpStatus::Infeasible ? Vec(dim, Rational(0)) : lp.point;
  return s;
}

bool region_contains(const HPolyhedron& h, const DVec& x, double tol) {
  for (std::size_t r = 0; r < h.rows(); ++r) {
    double s = 0;
    for (std::size_t i = 0; i < h.dim; ++i) s += h.A[r][i].get_d() * x[i];
    double b = h.b[r].get_d();
    if (h.eq[r] ? std::abs(s - b) > tol : s > b + tol) return false;
  }
  return true;
}

}  // namespace

Objective Objective::polynomial(Polynomial f) {
  Objective o;
  o.smooth_ = std::move(f);
  return o;
}

Objective Objective::piecewise(std::vector<SubdiffPiece> pieces, bool convexify) {
  if (pieces.empty()) throw Error("piecewise objective needs at least one piece");
  Objective o;
  o.smooth_ = pieces.front().f;
  o.pieces_ = std::move(pieces);
  o.convexify_ = convexify;
  for (const auto& pc : o.pieces_)
    if (pc.f.arity() != o.smooth_.arity() || pc.region.dim != o.smooth_.arity())
      throw DimensionError("objective pieces disagree on dimension");
  return o;
}

std::size_t Objective::arity() const { return smooth_.arity(); }

std::vector<Mat> Objective::subdifferential(const Vec& x) const {
  auto grad = [&](const Polynomial& f) {
    Vec g;
    for (std::size_t i = 0; i < f.arity(); ++i) g.push_back(f.differentiate(i).eval(x));
    return g;
  };
  if (!is_piecewise()) return {Mat{grad(smooth_)}};
  Mat gs;
  for (const auto& pc : pieces_) {
    if (!pc.region.contains(x)) continue;
    Vec g = grad(pc.f);
    if (std::find(gs.begin(), gs.end(), g) == gs.end()) gs.push_back(g);
  }
  if (gs.empty()) throw DomainError("no objective piece covers the point " + to_string(x));
  if (convexify_) return {gs};
  std::vector<Mat> out;
  for (auto& g : gs) out.push_back(Mat{g});
  return out;
}

Rational Objective::value(const Vec& x) const {
  if (!is_piecewise()) return smooth_.eval(x);
  for (const auto& pc : pieces_)
    if (pc.region.contains(x)) return pc.f.eval(x);
  throw DomainError("no objective piece covers the point " + to_string(x));
}

std::size_t Objective::active_piece(const DVec& x) const {
  for (std::size_t i = 0; i < pieces_.size(); ++i)
    if (region_contains(pieces_[i].region, x, 1e-12)) return i;
  if (is_piecewise()) throw DomainError("no objective piece covers the evaluation point");
  return 0;
}

double Objective::value(const DVec& x) const {
  return is_piecewise() ? pieces_[active_piece(x)].f.eval(x) : smooth_.eval(x);
}

DVec Objective::gradient(const DVec& x) const {
  const Polynomial& f = is_piecewise() ? pieces_[active_piece(x)].f : smooth_;
  DVec g;
  for (std::size_t i = 0; i < f.arity(); ++i) g.push_back(f.differentiate(i).eval(x));
  return g;
}

double Objective::boundary_distance(const DVec& x) const {
  if (!is_piecewise()) return std::numeric_limits<double>::infinity();
  const auto& h = pieces_[active_piece(x)].region;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < h.rows(); ++r) {
    if (h.eq[r]) continue;
    double s = 0, nrm = 0;
    for (std::size_t i = 0; i < h.dim; ++i) {
      s += h.A[r][i].get_d() * x[i];
      nrm += h.A[r][i].get_d() * h.A[r][i].get_d();
    }
    if (nrm > 0) best = std::min(best, (h.b[r].get_d() - s) / std::sqrt(nrm));
  }
  return best;
}

bool ProblemInstance::has_flag(const std::string& flag) const {
  return std::find(flags.begin(), flags.end(), flag) != flags.end();
}

bool ProblemInstance::feasible(const Vec& x) const {
  if (x.size() != n()) throw DimensionError("point dimension does not match the variables");
  if (!K.contains(G.eval(x))) return false;
  return !C || C->contains(x);
}

void ProblemInstance::validate() const {
  if (variables.empty()) throw DimensionError("problem has no variables");
  if (f.arity() != n()) throw DimensionError("objective arity does not match the variables");
  if (G.domain_dim() != n()) throw DimensionError("G arity does not match the variables");
  if (K.dim != l()) throw DimensionError("K dimension does not match the number of G components");
  if (K.blocks.empty()) throw DimensionError("K has no blocks");
  if (C && C->dim != n()) throw DimensionError("C dimension does not match the variables");
  if (M_explicit && M_explicit->dim != n()) throw DimensionError("M_explicit dimension does not match the variables");
  if (point.size() != n()) throw DimensionError("point dimension does not match the variables");
}

PolyUnion product(const PolyUnion& a, const PolyUnion& b) {
  const std::size_t d = a.dim + b.dim;
  PolyUnion out(d);
  for (const auto& ba : a.blocks) {
    for (const auto& bb : b.blocks) {
      const auto* ha = std::get_if<HPolyhedron>(&ba);
      const auto* hb = std::get_if<HPolyhedron>(&bb);
      if (ha && hb) {
        HPolyhedron h(d);
        for (std::size_t r = 0; r < ha->rows(); ++r) {
          Vec row(d, Rational(0));
          std::copy(ha->A[r].begin(), ha->A[r].end(), row.begin());
          h.add(row, ha->b[r], ha->eq[r]);
        }
        for (std::size_t r = 0; r < hb->rows(); ++r) {
          Vec row(d, Rational(0));
          std::copy(hb->A[r].begin(), hb->A[r].end(), row.begin() + a.dim);
          h.add(row, hb->b[r], hb->eq[r]);
        }
        out.blocks.push_back(h);
        continue;
      }
      SmoothConvexBlock sa = as_smooth(ba, a.dim), sb = as_smooth(bb, b.dim);
      SmoothConvexBlock s;
      s.dim = d;
      s.convex = sa.convex && sb.convex;
      auto vars = names("y", d);
      for (const auto& g : sa.g) s.g.push_back(embed(g, vars, 0));
      for (const auto& g : sb.g) s.g.push_back(embed(g, vars, a.dim));
      s.slater = sa.slater;
      s.slater.insert(s.slater.end(), sb.slater.begin(), sb.slater.end());
      out.blocks.push_back(s);
    }
  }
  return out;
}

ProblemInstance lift_abstract_set(const ProblemInstance& p) {
  if (!p.has_C()) return p;
  ProblemInstance q = p;
  std::vector<Polynomial> comps = p.G.components();
  for (std::size_t i = 0; i < p.n(); ++i) comps.push_back(Polynomial::variable(p.variables, i));
  q.G = PolyMap(p.n(), std::move(comps));
  q.K = product(p.K, *p.C);
  q.C.reset();
  return q;
}

}  // namespace vacone
