#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace tropex {

// Exact scalars. All geometry in this library is exact: integers are
// arbitrary-precision and rationals are kept in canonical reduced form
// (positive denominator) by the underlying representation.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

using VecI = std::vector<Int>;
using VecQ = std::vector<Rat>;

inline Int num(const Rat& q) { return boost::multiprecision::numerator(q); }
inline Int den(const Rat& q) { return boost::multiprecision::denominator(q); }

inline Int gcd(const Int& a, const Int& b) { return boost::multiprecision::gcd(a, b); }
inline Int lcm(const Int& a, const Int& b) { return boost::multiprecision::lcm(a, b); }
inline Int iabs(const Int& a) { return a < 0 ? Int(-a) : a; }

// "p/q" (or "p" when q == 1). The only numeric wire format used in JSON.
std::string rat_to_string(const Rat& q);
Rat rat_from_string(const std::string& s);

inline Rat dot(const VecI& a, const VecQ& x) {
  if (a.size() != x.size()) throw std::invalid_argument("dot: size mismatch");
  Rat s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += Rat(a[i]) * x[i];
  return s;
}

inline Rat dot(const VecQ& a, const VecQ& x) {
  if (a.size() != x.size()) throw std::invalid_argument("dot: size mismatch");
  Rat s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * x[i];
  return s;
}

inline Int dot(const VecI& a, const VecI& x) {
  if (a.size() != x.size()) throw std::invalid_argument("dot: size mismatch");
  Int s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * x[i];
  return s;
}

// gcd of all entries (nonnegative; 0 for the zero vector).
Int content(const VecI& v);

// v / content(v); the zero vector stays zero.
VecI primitive(const VecI& v);

bool is_zero(const VecI& v);
bool is_zero(const VecQ& v);

VecI add(const VecI& a, const VecI& b);
VecI sub(const VecI& a, const VecI& b);
VecI scale(const Int& c, const VecI& a);
VecI negate(const VecI& a);

VecQ to_rational(const VecI& v);
// Fails (throws) unless every entry is an integer.
VecI to_integer(const VecQ& v);
// Least common multiple of denominators (>= 1).
Int common_denominator(const VecQ& v);

}  // namespace tropex
