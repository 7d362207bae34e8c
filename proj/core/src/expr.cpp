#include "vacone/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

namespace vacone {

namespace {

unsigned total_degree(const Exponent& e) { return std::accumulate(e.begin(), e.end(), 0u); }

}  // namespace

Polynomial::Polynomial(std::vector<std::string> variables) : vars_(std::move(variables)) {}

Polynomial Polynomial::constant(std::vector<std::string> variables, const Rational& c) {
  Polynomial p(std::move(variables));
  p.add_term(Exponent(p.arity(), 0), c);
  return p;
}

Polynomial Polynomial::variable(std::vector<std::string> variables, std::size_t index) {
  Polynomial p(std::move(variables));
  if (index >= p.arity()) throw DimensionError("variable index out of range");
  Exponent e(p.arity(), 0);
  e[index] = 1;
  p.add_term(e, 1);
  return p;
}

void Polynomial::add_term(const Exponent& e, const Rational& c) {
  if (e.size() != arity()) throw DimensionError("exponent arity mismatch");
  if (c == 0) return;
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(e, c);
    return;
  }
  it->second += c;
  if (it->second == 0) terms_.erase(it);
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && total_degree(terms_.begin()->first) == 0);
}

Rational Polynomial::constant_term() const {
  auto it = terms_.find(Exponent(arity(), 0));
  return it == terms_.end() ? Rational(0) : it->second;
}

unsigned Polynomial::degree() const {
  unsigned d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, total_degree(e));
  return d;
}

Rational Polynomial::eval(const Vec& point) const {
  if (point.size() != arity()) throw DimensionError("polynomial evaluated at point of wrong dimension");
  // Powers are accumulated per variable once, then reused across terms.
  std::vector<std::vector<Rational>> powers(arity(), std::vector<Rational>{Rational(1)});
  Rational sum = 0;
  for (const auto& [e, c] : terms_) {
    Rational t = c;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      auto& pw = powers[i];
      while (pw.size() <= e[i]) pw.push_back(pw.back() * point[i]);
      t *= pw[e[i]];
    }
    sum += t;
  }
  return sum;
}

double Polynomial::eval(const DVec& point) const {
  if (point.size() != arity()) throw DimensionError("polynomial evaluated at point of wrong dimension");
  std::vector<std::vector<double>> powers(arity(), std::vector<double>{1.0});
  double sum = 0;
  for (const auto& [e, c] : terms_) {
    double t = c.get_d();
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      auto& pw = powers[i];
      while (pw.size() <= e[i]) pw.push_back(pw.back() * point[i]);
      t *= pw[e[i]];
    }
    sum += t;
  }
  return sum;
}

Polynomial Polynomial::differentiate(std::size_t var_index) const {
  if (var_index >= arity()) throw DimensionError("differentiation index out of range");
  Polynomial d(vars_);
  for (const auto& [e, c] : terms_) {
    if (e[var_index] == 0) continue;
    Exponent f = e;
    f[var_index] -= 1;
    d.add_term(f, c * e[var_index]);
  }
  return d;
}

Polynomial Polynomial::compose_affine(const Vec& origin, const Mat& R, std::vector<std::string> new_variables) const {
  if (origin.size() != arity() || R.size() != arity()) throw DimensionError("compose_affine: dimension mismatch");
  const std::size_t m = new_variables.size();
  std::vector<Polynomial> lin;
  lin.reserve(arity());
  for (std::size_t i = 0; i < arity(); ++i) {
    if (R[i].size() != m) throw DimensionError("compose_affine: column count mismatch");
    Polynomial li = constant(new_variables, origin[i]);
    for (std::size_t j = 0; j < m; ++j)
      if (R[i][j] != 0) li += variable(new_variables, j) * R[i][j];
    lin.push_back(std::move(li));
  }
  std::vector<std::vector<Polynomial>> powers(arity(), std::vector<Polynomial>{constant(new_variables, 1)});
  Polynomial out(new_variables);
  for (const auto& [e, c] : terms_) {
    Polynomial t = constant(new_variables, c);
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      auto& pw = powers[i];
      while (pw.size() <= e[i]) pw.push_back(pw.back() * lin[i]);
      t *= pw[e[i]];
    }
    out += t;
  }
  return out;
}

void Polynomial::check_compatible(const Polynomial& o) const {
  if (vars_ != o.vars_) throw DimensionError("polynomials over different variable lists");
}

Polynomial Polynomial::operator-() const {
  Polynomial r = *this;
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  check_compatible(o);
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  check_compatible(o);
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Polynomial& o) {
  check_compatible(o);
  Polynomial r(vars_);
  for (const auto& [e1, c1] : terms_)
    for (const auto& [e2, c2] : o.terms_) {
      Exponent e(e1.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = e1[i] + e2[i];
      r.add_term(e, c1 * c2);
    }
  terms_ = std::move(r.terms_);
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

Polynomial Polynomial::pow(unsigned e) const {
  Polynomial result = constant(vars_, 1);
  Polynomial base = *this;
  while (e) {
    if (e & 1u) result *= base;
    e >>= 1;
    if (e) base *= base;
  }
  return result;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::vector<std::pair<Exponent, Rational>> ordered(terms_.begin(), terms_.end());
  std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
    unsigned da = total_degree(a.first), db = total_degree(b.first);
    if (da != db) return da > db;
    return a.first > b.first;
  });
  std::string out;
  bool first = true;
  for (const auto& [e, c] : ordered) {
    Rational mag = abs(c);
    if (first) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    first = false;
    std::string mono;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += vars_[i];
      if (e[i] > 1) mono += "^" + std::to_string(e[i]);
    }
    if (mono.empty()) {
      out += vacone::to_string(mag);
    } else if (mag == 1) {
      out += mono;
    } else {
      out += vacone::to_string(mag) + "*" + mono;
    }
  }
  return out;
}

namespace {

class Parser {
 public:
  Parser(std::string_view text, const std::vector<std::string>& vars) : s_(text), vars_(vars) {}

  Polynomial parse() {
    Polynomial p = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Polynomial expr() {
    Polynomial p = term();
    for (;;) {
      if (accept('+')) {
        p += term();
      } else if (accept('-')) {
        p -= term();
      } else {
        return p;
      }
    }
  }

  Polynomial term() {
    Polynomial p = unary();
    for (;;) {
      if (accept('*')) {
        p *= unary();
      } else if (accept('/')) {
        std::size_t at = pos_;
        Polynomial d = unary();
        if (!d.is_constant()) throw ParseError("division by a non-constant expression", at);
        Rational c = d.constant_term();
        if (c == 0) throw ParseError("division by zero", at);
        p *= Rational(1) / c;
      } else {
        return p;
      }
    }
  }

  Polynomial unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Polynomial power() {
    Polynomial base = atom();
    if (accept('^')) {
      skip_ws();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected a nonnegative integer exponent");
      unsigned long e = std::stoul(std::string(s_.substr(start, pos_ - start)));
      if (e > 64) throw ParseError("exponent too large", start);
      return base.pow(static_cast<unsigned>(e));
    }
    return base;
  }

  Polynomial atom() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Polynomial p = expr();
      if (!accept(')')) fail("expected ')'");
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (pos_ < s_.size() && s_[pos_] == '.') {
        ++pos_;
        std::size_t frac = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (frac == pos_) throw ParseError("expected digits after '.'", pos_);
      }
      if (start < pos_ && s_[start] == '.') throw ParseError("number must start with a digit", start);
      return Polynomial::constant(vars_, parse_rational(s_.substr(start, pos_ - start)));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string name(s_.substr(start, pos_ - start));
      auto it = std::find(vars_.begin(), vars_.end(), name);
      if (it == vars_.end()) throw ParseError("unknown variable '" + name + "'", start);
      return Polynomial::variable(vars_, static_cast<std::size_t>(it - vars_.begin()));
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  std::string_view s_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial parse_polynomial(std::string_view text, const std::vector<std::string>& variables) {
  return Parser(text, variables).parse();
}

PolyMap::PolyMap(std::size_t domain_dim, std::vector<Polynomial> components)
    : n_(domain_dim), comps_(std::move(components)) {
  jac_.reserve(comps_.size());
  for (const auto& c : comps_) {
    if (c.arity() != n_) throw DimensionError("component arity does not match domain dimension");
    std::vector<Polynomial> row;
    row.reserve(n_);
    for (std::size_t j = 0; j < n_; ++j) row.push_back(c.differentiate(j));
    jac_.push_back(std::move(row));
  }
}

Vec PolyMap::eval(const Vec& x) const {
  Vec out;
  out.reserve(comps_.size());
  for (const auto& c : comps_) out.push_back(c.eval(x));
  return out;
}

DVec PolyMap::eval(const DVec& x) const {
  DVec out;
  out.reserve(comps_.size());
  for (const auto& c : comps_) out.push_back(c.eval(x));
  return out;
}

Mat PolyMap::jacobian(const Vec& x) const {
  Mat j(comps_.size(), Vec(n_));
  for (std::size_t i = 0; i < comps_.size(); ++i)
    for (std::size_t k = 0; k < n_; ++k) j[i][k] = jac_[i][k].eval(x);
  return j;
}

std::vector<DVec> PolyMap::jacobian(const DVec& x) const {
  std::vector<DVec> j(comps_.size(), DVec(n_));
  for (std::size_t i = 0; i < comps_.size(); ++i)
    for (std::size_t k = 0; k < n_; ++k) j[i][k] = jac_[i][k].eval(x);
  return j;
}

unsigned PolyMap::degree() const {
  unsigned d = 0;
  for (const auto& c : comps_) d = std::max(d, c.degree());
  return d;
}

Mat jacobian(const PolyMap& g, const Vec& x) { return g.jacobian(x); }

}  // namespace vacone
