#include "vacone/double_description.hpp"

#include <algorithm>

namespace vacone {

namespace {

struct Ray {
  Vec v;
  std::vector<bool> zero;  // tight at each processed inequality
};

int sign(const Rational& r) { return sgn(r); }

bool subset(const std::vector<bool>& a, const std::vector<bool>& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] && !b[i]) return false;
  return true;
}

}  // namespace

ConeGenerators double_description(const Mat& le, const Mat& eq, std::size_t dim) {
  for (const auto& r : le)
    if (r.size() != dim) throw DimensionError("double_description: row length mismatch");
  for (const auto& r : eq)
    if (r.size() != dim) throw DimensionError("double_description: row length mismatch");

  Mat lin;
  for (std::size_t i = 0; i < dim; ++i) {
    Vec e(dim, Rational(0));
    e[i] = 1;
    lin.push_back(std::move(e));
  }
  std::vector<Ray> rays;
  std::size_t processed = 0;

  // Equalities first: they only shrink the lineality space or cut rays to
  // their zero set, which keeps the intermediate ray lists short.
  std::vector<std::pair<const Vec*, bool>> order;
  for (const auto& r : eq) order.emplace_back(&r, true);
  for (const auto& r : le) order.emplace_back(&r, false);

  for (const auto& [ap, is_eq] : order) {
    const Vec& a = *ap;
    if (is_zero(a)) continue;
    const std::size_t idx = processed++;
    for (auto& r : rays) r.zero.push_back(true);

    std::size_t pick = lin.size();
    for (std::size_t i = 0; i < lin.size(); ++i)
      if (dot(a, lin[i]) != 0) {
        pick = i;
        break;
      }

    if (pick != lin.size()) {
      Vec l = lin[pick];
      Rational al = dot(a, l);
      lin.erase(lin.begin() + static_cast<std::ptrdiff_t>(pick));
      for (auto& other : lin) {
        Rational ao = dot(a, other);
        if (ao != 0) other = primitive(sub(other, scale(l, ao / al)));
      }
      for (auto& r : rays) {
        Rational ar = dot(a, r.v);
        if (ar != 0) r.v = primitive(sub(r.v, scale(l, ar / al)));
      }
      if (!is_eq) {
        Ray nr{primitive(al > 0 ? scale(l, Rational(-1)) : l), std::vector<bool>(idx + 1, true)};
        nr.zero[idx] = false;
        rays.push_back(std::move(nr));
      }
      continue;
    }

    std::vector<std::size_t> pos, neg, zer;
    std::vector<Rational> val(rays.size());
    for (std::size_t i = 0; i < rays.size(); ++i) {
      val[i] = dot(a, rays[i].v);
      int s = sign(val[i]);
      (s > 0 ? pos : s < 0 ? neg : zer).push_back(i);
    }
    if (pos.empty() && (neg.empty() || !is_eq)) {
      for (std::size_t i : neg) rays[i].zero[idx] = false;
      continue;
    }

    const std::size_t need = dim - lin.size() >= 2 ? dim - lin.size() - 2 : 0;
    std::vector<Ray> next;
    for (std::size_t i : zer) next.push_back(rays[i]);
    if (!is_eq)
      for (std::size_t i : neg) {
        Ray r = rays[i];
        r.zero[idx] = false;
        next.push_back(std::move(r));
      }
    for (std::size_t p : pos)
      for (std::size_t n : neg) {
        std::vector<bool> common(idx + 1, false);
        std::size_t count = 0;
        for (std::size_t k = 0; k < idx; ++k)
          if (rays[p].zero[k] && rays[n].zero[k]) {
            common[k] = true;
            ++count;
          }
        if (count < need) continue;
        bool adjacent = true;
        for (std::size_t o = 0; o < rays.size() && adjacent; ++o) {
          if (o == p || o == n) continue;
          std::vector<bool> oz(rays[o].zero.begin(), rays[o].zero.end());
          oz[idx] = false;
          if (subset(common, oz)) adjacent = false;
        }
        if (!adjacent) continue;
        Vec v = sub(scale(rays[n].v, val[p]), scale(rays[p].v, val[n]));
        if (is_zero(v)) continue;
        common[idx] = true;
        next.push_back(Ray{primitive(v), std::move(common)});
      }
    rays = std::move(next);
  }

  ConeGenerators out;
  out.lineality = std::move(lin);
  for (auto& r : rays) out.rays.push_back(std::move(r.v));
  std::sort(out.rays.begin(), out.rays.end());
  out.rays.erase(std::unique(out.rays.begin(), out.rays.end()), out.rays.end());
  return out;
}

}  // namespace vacone
