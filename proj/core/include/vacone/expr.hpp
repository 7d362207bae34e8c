#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "vacone/rational.hpp"

namespace vacone {

using Exponent = std::vector<unsigned>;

/// Multivariate polynomial with rational coefficients over a named, ordered
/// variable list. Zero coefficients are never stored.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<std::string> variables);

  static Polynomial constant(std::vector<std::string> variables, const Rational& c);
  static Polynomial variable(std::vector<std::string> variables, std::size_t index);

  const std::vector<std::string>& variables() const { return vars_; }
  std::size_t arity() const { return vars_.size(); }
  const std::map<Exponent, Rational>& terms() const { return terms_; }

  void add_term(const Exponent& e, const Rational& c);

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// Coefficient of the zero exponent.
  Rational constant_term() const;
  /// Total degree; zero for the zero polynomial.
  unsigned degree() const;

  Rational eval(const Vec& point) const;
  double eval(const DVec& point) const;

  Polynomial differentiate(std::size_t var_index) const;

  /// q(s) = p(origin + R s), where R has arity() rows. The result is a
  /// polynomial in `new_variables` (one per column of R).
  Polynomial compose_affine(const Vec& origin, const Mat& R, std::vector<std::string> new_variables) const;

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Polynomial& o);
  Polynomial& operator*=(const Rational& c);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Polynomial& b) { return a *= b; }
  friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
  Polynomial pow(unsigned e) const;

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.vars_ == b.vars_ && a.terms_ == b.terms_;
  }

  /// Canonical text: terms by descending total degree, then descending
  /// exponent vector; parses back to an identical polynomial.
  std::string to_string() const;

 private:
  void check_compatible(const Polynomial& o) const;

  std::vector<std::string> vars_;
  std::map<Exponent, Rational> terms_;
};

/// Grammar:
///   expr   := term (('+' | '-') term)*
///   term   := unary (('*' | '/') unary)*        divisor must be a nonzero constant
///   unary  := ('+' | '-') unary | power
///   power  := atom ('^' digits)?
///   atom   := number | identifier | '(' expr ')'
///   number := digits ('.' digits)?
/// Identifiers are [A-Za-z_][A-Za-z0-9_]* and must appear in `variables`.
Polynomial parse_polynomial(std::string_view text, const std::vector<std::string>& variables);

/// Vector-valued polynomial map G: R^n -> R^m.
class PolyMap {
 public:
  PolyMap() = default;
  PolyMap(std::size_t domain_dim, std::vector<Polynomial> components);

  std::size_t domain_dim() const { return n_; }
  std::size_t codomain_dim() const { return comps_.size(); }
  const std::vector<Polynomial>& components() const { return comps_; }
  const Polynomial& operator[](std::size_t i) const { return comps_[i]; }

  Vec eval(const Vec& x) const;
  DVec eval(const DVec& x) const;

  /// m x n matrix whose row i is the gradient of component i at x.
  Mat jacobian(const Vec& x) const;
  std::vector<DVec> jacobian(const DVec& x) const;

  /// Symbolic partial derivatives: entry (i, j) is d G_i / d x_j.
  const std::vector<std::vector<Polynomial>>& jacobian_polynomials() const { return jac_; }

  /// Maximum total degree over components.
  unsigned degree() const;

 private:
  std::size_t n_ = 0;
  std::vector<Polynomial> comps_;
  std::vector<std::vector<Polynomial>> jac_;
};

Mat jacobian(const PolyMap& g, const Vec& x);

}  // namespace vacone
