#include "vacone/cones.hpp"

#include <map>
#include <random>

#include "vacone/lp.hpp"

namespace vacone {

Membership cone_union_membership(const ConeUnion& u, const Vec& v) {
  for (std::size_t i = 0; i < u.branches.size(); ++i)
    if (auto w = u.branches[i].decompose(v)) return {true, i, *w};
  return {};
}

Rational l1_distance(const GenCone& c, const Vec& v, Vec* nearest) {
  if (v.size() != c.dim) throw DimensionError("l1_distance: dimension mismatch");
  const std::size_t nr = c.rays.size(), nl = c.lineality.size(), d = c.dim;
  // Variables: ray weights (>= 0), lineality weights, slacks e (>= 0).
  LpProblem lp(nr + nl + d);
  for (std::size_t j = 0; j < nr; ++j) lp.nonneg[j] = true;
  for (std::size_t i = 0; i < d; ++i) lp.nonneg[nr + nl + i] = true;
  for (std::size_t i = 0; i < d; ++i) {
    for (int sgn : {1, -1}) {
      // sgn (v_i - w_i) <= e_i
      Vec row(nr + nl + d, Rational(0));
      for (std::size_t j = 0; j < nr; ++j) row[j] = -sgn * c.rays[j][i];
      for (std::size_t j = 0; j < nl; ++j) row[nr + j] = -sgn * c.lineality[j][i];
      row[nr + nl + i] = -1;
      lp.add_le(std::move(row), Rational(-sgn) * v[i]);
    }
  }
  lp.objective.assign(nr + nl + d, Rational(0));
  for (std::size_t i = 0; i < d; ++i) lp.objective[nr + nl + i] = -1;
  LpResult r = solve_lp(lp);
  if (r.status != LpStatus::Optimal) throw Error("l1_distance: LP did not reach an optimum");
  if (nearest) {
    Vec w(d, Rational(0));
    for (std::size_t j = 0; j < nr; ++j) w = add(w, scale(c.rays[j], r.point[j]));
    for (std::size_t j = 0; j < nl; ++j) w = add(w, scale(c.lineality[j], r.point[nr + j]));
    *nearest = w;
  }
  return -r.value;
}

ConeUnion minkowski_sum(const ConeUnion& u, const ConeUnion& v) {
  if (u.dim != v.dim) throw DimensionError("minkowski_sum: dimension mismatch");
  ConeUnion out(u.dim);
  for (const auto& a : u.branches)
    for (const auto& b : v.branches) out.branches.push_back(sum(a, b));
  return canonicalize(out);
}

namespace {

bool in_union(const std::vector<GenCone>& cs, std::size_t from, const Vec& v) {
  for (std::size_t i = from; i < cs.size(); ++i)
    if (cs[i].contains(v)) return true;
  return false;
}

// Returns a vector of S outside V[j..], or nullopt when S ⊆ ∪ V[j..].
std::optional<Vec> uncovered(const HPolyhedron& s_h, const GenCone& s, const std::vector<GenCone>& v,
                             const std::vector<HPolyhedron>& v_h, std::size_t j) {
  if (s.is_zero()) return std::nullopt;
  Mat gens = s.all_generators();
  if (j == v.size()) return gens.front();
  if (cone_subset(s, v[j])) return std::nullopt;

  const HPolyhedron& h = v_h[j];
  std::vector<Vec> normals;
  for (std::size_t i = 0; i < h.rows(); ++i) {
    normals.push_back(h.A[i]);
    if (h.eq[i]) normals.push_back(scale(h.A[i], Rational(-1)));
  }
  for (const auto& n : normals) {
    const Vec* inside = nullptr;
    for (const auto& g : gens)
      if (dot(n, g) > 0) {
        inside = &g;
        break;
      }
    if (!inside) continue;
    HPolyhedron sub_h = s_h;
    sub_h.add_le(scale(n, Rational(-1)));
    GenCone sub = to_generators(sub_h);
    auto q = uncovered(sub_h, sub, v, v_h, j + 1);
    if (!q) continue;
    // q lies outside the closed set ∪ V[j+1..]; nudging it toward a point with
    // n > 0 keeps it outside for a small enough step and leaves V[j].
    Rational eps = 1;
    for (int iter = 0; iter < 256; ++iter, eps /= 2) {
      Vec cand = add(*q, scale(*inside, eps));
      if (!in_union(v, j, cand)) return primitive(cand);
    }
    throw Error("cone_union_inclusion: witness nudging did not terminate");
  }
  return std::nullopt;
}

}  // namespace

InclusionResult cone_union_inclusion(const ConeUnion& u, const ConeUnion& v, std::size_t n_samples,
                                     std::uint64_t seed) {
  if (u.dim != v.dim) throw DimensionError("cone_union_inclusion: dimension mismatch");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> weight(0, 9);

  for (const auto& s : u.branches) {
    Mat gens = s.all_generators();
    for (const auto& g : gens)
      if (!in_union(v.branches, 0, g)) return {false, true, primitive(g)};
    for (std::size_t k = 0; k < n_samples && !gens.empty(); ++k) {
      Vec c(u.dim, Rational(0));
      for (const auto& g : gens) c = add(c, scale(g, Rational(weight(rng))));
      if (!in_union(v.branches, 0, c)) return {false, true, primitive(c)};
    }
  }

  std::vector<HPolyhedron> v_h;
  for (const auto& b : v.branches) v_h.push_back(to_hform(b));
  for (const auto& s : u.branches) {
    if (auto q = uncovered(to_hform(s), s, v.branches, v_h, 0)) return {false, true, *q};
  }
  return {true, true, std::nullopt};
}

namespace {

struct BlockInfo {
  std::size_t index;
  const HPolyhedron* poly;
  std::vector<std::size_t> act;  // active inequality rows
  std::vector<std::size_t> eqs;  // equality rows
};

// Linear conditions on the direction d, homogeneous in (d, t):
// kind 0: a·d = 0, kind 1: a·d + t <= 0, kind 2: -a·d + t <= 0.
struct Cond {
  const Vec* a;
  int kind;
};

class PatternSearch {
 public:
  PatternSearch(const PolyUnion& s, const Vec& ybar) : s_(s), dim_(s.dim) {
    if (dim_ > 10) throw CapacityError("limiting_normal_cone: ambient dimension exceeds 10");
    for (std::size_t i = 0; i < s.blocks.size(); ++i) {
      const auto* h = std::get_if<HPolyhedron>(&s.blocks[i]);
      if (!h) throw Error("limiting_normal_cone: smooth blocks are not supported");
      if (h->rows() > 20) throw CapacityError("limiting_normal_cone: block has more than 20 rows");
    }
    for (std::size_t i : s.active_blocks(ybar)) {
      BlockInfo bi{i, &s.poly(i), {}, {}};
      bi.act = bi.poly->active_rows(ybar);
      for (std::size_t r = 0; r < bi.poly->rows(); ++r)
        if (bi.poly->eq[r]) bi.eqs.push_back(r);
      blocks_.push_back(std::move(bi));
    }
    if (blocks_.empty()) throw DomainError("limiting_normal_cone: point is not in the set");
    included_.assign(blocks_.size(), false);
    tight_.assign(blocks_.size(), {});
  }

  std::vector<ActivityPattern> run() {
    dfs_block(0);
    return std::move(out_);
  }

 private:
  // Maximizes t subject to the conditions, |d_i| <= 1, t <= 1; returns d when
  // the optimum is strictly positive.
  std::optional<Vec> margin_lp(const std::vector<Cond>& conds) const {
    bool strict = false;
    for (const auto& c : conds) strict |= c.kind != 0;
    LpProblem lp(dim_ + 1);
    for (const auto& c : conds) {
      Vec row(dim_ + 1, Rational(0));
      Rational sgn = c.kind == 2 ? -1 : 1;
      for (std::size_t i = 0; i < dim_; ++i) row[i] = sgn * (*c.a)[i];
      if (c.kind != 0) row[dim_] = 1;
      lp.add_row(std::move(row), 0, c.kind == 0);
    }
    if (!strict) return Vec(dim_, Rational(0));
    for (std::size_t i = 0; i < dim_; ++i) {
      Vec row(dim_ + 1, Rational(0));
      row[i] = 1;
      lp.add_le(row, 1);
      row[i] = -1;
      lp.add_le(row, 1);
    }
    Vec trow(dim_ + 1, Rational(0));
    trow[dim_] = 1;
    lp.add_le(trow, 1);
    lp.objective = trow;
    LpResult r = solve_lp(lp);
    if (r.status != LpStatus::Optimal || r.value <= 0) return std::nullopt;
    return Vec(r.point.begin(), r.point.begin() + static_cast<std::ptrdiff_t>(dim_));
  }

  // Tries one violated row per pending exclusion, pruning as soon as the
  // chosen rows admit no direction.
  std::optional<Vec> realizable(std::vector<Cond>& conds, std::size_t ex) const {
    if (ex == exclusions_.size()) return margin_lp(conds);
    const BlockInfo& b = blocks_[exclusions_[ex]];
    const HPolyhedron& h = *b.poly;
    auto attempt = [&](const Vec& a, int kind) -> std::optional<Vec> {
      conds.push_back({&a, kind});
      std::optional<Vec> d;
      if (ex + 1 == exclusions_.size() || margin_lp(conds)) d = realizable(conds, ex + 1);
      conds.pop_back();
      return d;
    };
    for (std::size_t r : b.act)
      if (auto d = attempt(h.A[r], 2)) return d;
    for (std::size_t r : b.eqs)
      for (int kind : {1, 2})
        if (auto d = attempt(h.A[r], kind)) return d;
    return std::nullopt;
  }

  // Whether d meets the current conditions with strict rows strict and
  // leaves every excluded block.
  bool witnesses(const Vec& d) const {
    for (const auto& c : base_) {
      Rational v = dot(*c.a, d);
      if (c.kind == 0 ? v != 0 : (c.kind == 1 ? v >= 0 : v <= 0)) return false;
    }
    for (std::size_t bi : exclusions_) {
      const BlockInfo& b = blocks_[bi];
      bool out = false;
      for (std::size_t r : b.act) out = out || dot(b.poly->A[r], d) > 0;
      for (std::size_t r : b.eqs) out = out || dot(b.poly->A[r], d) != 0;
      if (!out) return false;
    }
    return true;
  }

  std::optional<Vec> check() {
    if (last_ && witnesses(*last_)) return last_;
    std::vector<Cond> conds = base_;
    auto d = realizable(conds, 0);
    if (d) last_ = d;
    return d;
  }

  void dfs_block(std::size_t bi) {
    if (bi == blocks_.size()) {
      bool any = false;
      for (bool inc : included_) any |= inc;
      if (!any) return;
      auto d = check();
      if (d) emit(*d);
      return;
    }
    const BlockInfo& b = blocks_[bi];
    const HPolyhedron& h = *b.poly;
    // Included: equalities hold, then decide each active row tight or strict.
    std::size_t mark = base_.size();
    for (std::size_t r : b.eqs) base_.push_back({&h.A[r], 0});
    included_[bi] = true;
    tight_[bi].clear();
    if (check()) dfs_rows(bi, 0);
    included_[bi] = false;
    base_.resize(mark);
    // Excluded: some active row or equality is violated.
    if (!b.act.empty() || !b.eqs.empty()) {
      exclusions_.push_back(bi);
      if (check()) dfs_block(bi + 1);
      exclusions_.pop_back();
    }
  }

  void dfs_rows(std::size_t bi, std::size_t k) {
    const BlockInfo& b = blocks_[bi];
    if (k == b.act.size()) {
      dfs_block(bi + 1);
      return;
    }
    const Vec& a = b.poly->A[b.act[k]];
    for (int kind : {0, 1}) {
      base_.push_back({&a, kind});
      if (kind == 0) tight_[bi].push_back(b.act[k]);
      if (check()) dfs_rows(bi, k + 1);
      if (kind == 0) tight_[bi].pop_back();
      base_.pop_back();
    }
  }

  void emit(const Vec& d) {
    ActivityPattern p;
    p.included.assign(s_.blocks.size(), false);
    p.tight.assign(s_.blocks.size(), {});
    p.direction = d;
    std::vector<GenCone> parts;
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
      if (!included_[i]) continue;
      const BlockInfo& b = blocks_[i];
      p.included[b.index] = true;
      p.tight[b.index] = tight_[i];
      GenCone c(dim_);
      for (std::size_t r : tight_[i]) c.rays.push_back(b.poly->A[r]);
      for (std::size_t r : b.eqs) c.lineality.push_back(b.poly->A[r]);
      c = GenCone(dim_, c.rays, c.lineality);
      parts.push_back(std::move(c));
    }
    p.cone = parts.size() == 1 ? parts.front() : intersect(parts, dim_);
    out_.push_back(std::move(p));
  }

  const PolyUnion& s_;
  std::size_t dim_;
  std::vector<BlockInfo> blocks_;
  std::vector<bool> included_;
  std::vector<std::vector<std::size_t>> tight_;
  std::vector<Cond> base_;
  std::vector<std::size_t> exclusions_;
  std::optional<Vec> last_;
  std::vector<ActivityPattern> out_;
};

}  // namespace

std::vector<ActivityPattern> realizable_patterns(const PolyUnion& s, const Vec& ybar) {
  if (ybar.size() != s.dim) throw DimensionError("limiting_normal_cone: point dimension mismatch");
  return PatternSearch(s, ybar).run();
}

ConeUnion limiting_normal_cone(const PolyUnion& s, const Vec& ybar) {
  ConeUnion u(s.dim);
  for (auto& p : realizable_patterns(s, ybar)) u.branches.push_back(std::move(p.cone));
  return canonicalize(u);
}

GenCone regular_normal_cone(const PolyUnion& s, const Vec& y) {
  std::vector<GenCone> parts;
  for (std::size_t i : s.active_blocks(y)) {
    if (const auto* h = std::get_if<HPolyhedron>(&s.blocks[i])) {
      parts.push_back(normal_cone_convex(*h, y));
    } else {
      const auto& sb = std::get<SmoothConvexBlock>(s.blocks[i]);
      GenCone c(s.dim);
      for (std::size_t j : sb.active(y)) {
        Vec grad(s.dim);
        for (std::size_t k = 0; k < s.dim; ++k) grad[k] = sb.g[j].differentiate(k).eval(y);
        if (!is_zero(grad)) c.rays.push_back(std::move(grad));
      }
      parts.push_back(std::move(c));
    }
  }
  if (parts.empty()) throw DomainError("regular_normal_cone: point is not in the set");
  if (parts.size() == 1) return parts.front();
  return intersect(parts, s.dim);
}

ConeUnion tangent_cone_union(const PolyUnion& s, const Vec& y) {
  ConeUnion u(s.dim);
  for (std::size_t i : s.active_blocks(y)) {
    const auto* h = std::get_if<HPolyhedron>(&s.blocks[i]);
    if (!h) throw Error("tangent_cone_union: smooth blocks are not supported");
    u.branches.push_back(to_generators(tangent_cone_convex(*h, y)));
  }
  if (u.branches.empty()) throw DomainError("tangent_cone_union: point is not in the set");
  return canonicalize(u);
}

}  // namespace vacone
