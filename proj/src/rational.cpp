#include "tropex/rational.hpp"

namespace tropex {

std::string rat_to_string(const Rat& q) {
  Int n = num(q), d = den(q);
  if (d == 1) return n.str();
  return n.str() + "/" + d.str();
}

Rat rat_from_string(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("rational: empty string");
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rat(Int(s));
    Int n(s.substr(0, slash));
    Int d(s.substr(slash + 1));
    if (d == 0) throw std::invalid_argument("rational: zero denominator");
    return Rat(n, d);
  } catch (const std::runtime_error&) {
    throw std::invalid_argument("rational: cannot parse '" + s + "'");
  }
}

Int content(const VecI& v) {
  Int g = 0;
  for (const auto& e : v) g = gcd(g, e);
  return g < 0 ? Int(-g) : g;
}

VecI primitive(const VecI& v) {
  Int g = content(v);
  if (g == 0 || g == 1) return v;
  VecI w(v.size());
  for (size_t i = 0; i < v.size(); ++i) w[i] = v[i] / g;
  return w;
}

bool is_zero(const VecI& v) {
  for (const auto& e : v)
    if (e != 0) return false;
  return true;
}

bool is_zero(const VecQ& v) {
  for (const auto& e : v)
    if (e != 0) return false;
  return true;
}

VecI add(const VecI& a, const VecI& b) {
  if (a.size() != b.size()) throw std::invalid_argument("add: size mismatch");
  VecI c(a.size());
  for (size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
  return c;
}

VecI sub(const VecI& a, const VecI& b) {
  if (a.size() != b.size()) throw std::invalid_argument("sub: size mismatch");
  VecI c(a.size());
  for (size_t i = 0; i < a.size(); ++i) c[i] = a[i] - b[i];
  return c;
}

VecI scale(const Int& c, const VecI& a) {
  VecI r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
  return r;
}

VecI negate(const VecI& a) {
  VecI r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
  return r;
}

VecQ to_rational(const VecI& v) {
  VecQ r(v.size());
  for (size_t i = 0; i < v.size(); ++i) r[i] = Rat(v[i]);
  return r;
}

VecI to_integer(const VecQ& v) {
  VecI r(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    if (den(v[i]) != 1) throw std::invalid_argument("to_integer: non-integral entry");
    r[i] = num(v[i]);
  }
  return r;
}

Int common_denominator(const VecQ& v) {
  Int l = 1;
  for (const auto& e : v) l = lcm(l, den(e));
  return l;
}

}  // namespace tropex
