#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vacone {

/// Exact rational number. GMP keeps every value canonical (reduced, positive
/// denominator) after each arithmetic operation.
using Rational = mpq_class;
using Vec = std::vector<Rational>;
using Mat = std::vector<Vec>;
using DVec = std::vector<double>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at byte " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Raised when an input exceeds the documented enumeration limits.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Raised when a point is required to lie in a set (or a graph) but does not.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// num/den in canonical form. mpq_class(num, den) does not reduce, and GMP
/// arithmetic on unreduced operands is undefined.
inline Rational ratio(long num, long den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/// Parses "p/q", "-7", or a finite decimal such as "0.125" exactly.
Rational parse_rational(std::string_view text);

/// "p/q", or "p" when the denominator is one.
std::string to_string(const Rational& r);
std::string to_string(const Vec& v);

inline double to_double(const Rational& r) { return r.get_d(); }
DVec to_double(const Vec& v);

/// Exact conversion of a finite double (every double is a dyadic rational).
Rational from_double(double v);

/// Simplest rational within `tol` of `v` among continued-fraction convergents
/// and semiconvergents whose denominator does not exceed `max_den`. Falls back
/// to the best convergent under the cap when no candidate is within `tol`.
Rational snap(double v, double tol, long max_den = 1'000'000);
Vec snap(const DVec& v, double tol, long max_den = 1'000'000);

Rational dot(const Vec& a, const Vec& b);
Vec add(const Vec& a, const Vec& b);
Vec sub(const Vec& a, const Vec& b);
Vec scale(const Vec& a, const Rational& s);
bool is_zero(const Vec& v);
Rational norm1(const Vec& v);
Rational norm_inf(const Vec& v);

/// Rescales v so that its first nonzero entry has absolute value one.
Vec normalize_leading(const Vec& v);
/// Rescales v to the primitive integer vector pointing in the same direction.
Vec primitive(const Vec& v);

Mat transpose(const Mat& m, std::size_t cols_if_empty = 0);
Vec mat_vec(const Mat& m, const Vec& v);
Vec mat_t_vec(const Mat& m, const Vec& v, std::size_t cols_if_empty = 0);

double norm2(const DVec& v);
double dot(const DVec& a, const DVec& b);

}  // namespace vacone
