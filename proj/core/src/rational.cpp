#include "vacone/rational.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace vacone {

Rational parse_rational(std::string_view text) {
  std::string s(text);
  std::size_t b = s.find_first_not_of(" \t");
  std::size_t e = s.find_last_not_of(" \t");
  if (b == std::string::npos) throw ParseError("empty rational", 0);
  s = s.substr(b, e - b + 1);

  auto bad = [&](std::size_t at) { throw ParseError("malformed rational '" + std::string(text) + "'", at); };

  std::size_t dot_pos = s.find('.');
  if (dot_pos != std::string::npos) {
    if (s.find('/') != std::string::npos) bad(dot_pos);
    std::string whole = s.substr(0, dot_pos);
    std::string frac = s.substr(dot_pos + 1);
    bool neg = !whole.empty() && whole[0] == '-';
    if (!whole.empty() && (whole[0] == '-' || whole[0] == '+')) whole = whole.substr(1);
    if (whole.empty()) whole = "0";
    for (char c : whole)
      if (!std::isdigit(static_cast<unsigned char>(c))) bad(0);
    for (char c : frac)
      if (!std::isdigit(static_cast<unsigned char>(c))) bad(dot_pos + 1);
    mpz_class num(whole + frac, 10);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
    Rational r(num, den);
    r.canonicalize();
    return neg ? Rational(-r) : r;
  }

  std::size_t slash = s.find('/');
  std::string num = slash == std::string::npos ? s : s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  auto check_int = [&](const std::string& part, std::size_t base, bool allow_sign) {
    std::size_t i = 0;
    if (allow_sign && i < part.size() && (part[i] == '-' || part[i] == '+')) ++i;
    if (i == part.size()) bad(base);
    for (; i < part.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(part[i]))) bad(base + i);
  };
  check_int(num, 0, true);
  check_int(den, slash == std::string::npos ? 0 : slash + 1, false);
  if (num[0] == '+') num = num.substr(1);
  mpz_class n(num, 10), d(den, 10);
  if (d == 0) throw ParseError("zero denominator in '" + std::string(text) + "'", slash + 1);
  Rational r(n, d);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

std::string to_string(const Vec& v) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << to_string(v[i]);
  os << ")";
  return os.str();
}

DVec to_double(const Vec& v) {
  DVec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].get_d();
  return out;
}

Rational from_double(double v) {
  if (!std::isfinite(v)) throw Error("cannot convert non-finite double to rational");
  Rational r(v);
  return r;
}

Rational snap(double v, double tol, long max_den) {
  if (!std::isfinite(v)) throw Error("cannot snap non-finite value");
  if (v < 0) return -snap(-v, tol, max_den);
  // Continued-fraction expansion; semiconvergents are tried before each
  // convergent so the first candidate within tolerance has the smallest
  // denominator.
  const Rational target = from_double(v);
  auto close = [&](const Rational& c) { return std::abs(Rational(c - target).get_d()) <= tol; };
  mpz_class h2 = 0, h1 = 1, k2 = 1, k1 = 0;
  Rational x = target;
  Rational best = 0;
  for (int iter = 0; iter < 128; ++iter) {
    mpz_class a;
    mpz_fdiv_q(a.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    mpz_class lo = (a + 1) / 2;
    if (lo < 1) lo = 1;
    for (mpz_class m = lo; m < a; ++m) {
      mpz_class k = m * k1 + k2;
      if (k > max_den) break;
      Rational cand(m * h1 + h2, k);
      cand.canonicalize();
      if (close(cand)) return cand;
    }
    mpz_class h = a * h1 + h2;
    mpz_class k = a * k1 + k2;
    if (k > max_den) break;
    Rational cand(h, k);
    cand.canonicalize();
    best = cand;
    if (close(cand)) return cand;
    h2 = h1;
    h1 = h;
    k2 = k1;
    k1 = k;
    Rational frac = x - Rational(a);
    if (frac == 0) break;
    x = 1 / frac;
  }
  return best;
}

Vec snap(const DVec& v, double tol, long max_den) {
  Vec out;
  out.reserve(v.size());
  for (double x : v) out.push_back(snap(x, tol, max_den));
  return out;
}

Rational dot(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw DimensionError("dot: size mismatch");
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Vec add(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw DimensionError("add: size mismatch");
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Vec sub(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw DimensionError("sub: size mismatch");
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Vec scale(const Vec& a, const Rational& s) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * s;
  return r;
}

bool is_zero(const Vec& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

Rational norm1(const Vec& v) {
  Rational s = 0;
  for (const auto& x : v) s += abs(x);
  return s;
}

Rational norm_inf(const Vec& v) {
  Rational s = 0;
  for (const auto& x : v)
    if (abs(x) > s) s = abs(x);
  return s;
}

Vec normalize_leading(const Vec& v) {
  for (const auto& x : v)
    if (x != 0) return scale(v, Rational(1) / abs(x));
  return v;
}

Vec primitive(const Vec& v) {
  mpz_class l = 1;
  for (const auto& x : v)
    if (x != 0) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  std::vector<mpz_class> ints(v.size());
  mpz_class g = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    Rational s = v[i] * l;
    ints[i] = s.get_num();
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), ints[i].get_mpz_t());
  }
  if (g == 0) return v;
  Vec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = Rational(ints[i] / g);
  return out;
}

Mat transpose(const Mat& m, std::size_t cols_if_empty) {
  std::size_t rows = m.size();
  std::size_t cols = rows ? m[0].size() : cols_if_empty;
  Mat t(cols, Vec(rows));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) t[j][i] = m[i][j];
  return t;
}

Vec mat_vec(const Mat& m, const Vec& v) {
  Vec r(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) r[i] = dot(m[i], v);
  return r;
}

Vec mat_t_vec(const Mat& m, const Vec& v, std::size_t cols_if_empty) {
  if (m.size() != v.size()) throw DimensionError("mat_t_vec: size mismatch");
  std::size_t cols = m.empty() ? cols_if_empty : m[0].size();
  Vec r(cols, Rational(0));
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (v[i] == 0) continue;
    for (std::size_t j = 0; j < cols; ++j) r[j] += m[i][j] * v[i];
  }
  return r;
}

double norm2(const DVec& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double dot(const DVec& a, const DVec& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace vacone
