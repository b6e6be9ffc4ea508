#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

#include "gofinsler/error.hpp"

namespace gofinsler {

using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

/// Parses "p", "-p" or "p/q" with integer p, q (q != 0).
inline Rational parse_rational(std::string_view text) {
  auto is_int = [](std::string_view s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') return false;
    return true;
  };
  auto to_int = [](std::string_view s) {
    if (!s.empty() && s[0] == '+') s.remove_prefix(1);
    return Integer(std::string(s));
  };
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    if (!is_int(text)) throw InputError("not a rational: '" + std::string(text) + "'");
    return Rational(to_int(text));
  }
  const auto num = text.substr(0, slash);
  const auto den = text.substr(slash + 1);
  if (!is_int(num) || !is_int(den) || den[0] == '-' || den[0] == '+')
    throw InputError("not a rational: '" + std::string(text) + "'");
  Integer d = to_int(den);
  if (d == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
  return Rational(to_int(num), d);
}

/// "p" for integers, "p/q" otherwise.
inline std::string format_rational(const Rational& r) {
  const Integer& num = boost::multiprecision::numerator(r);
  const Integer& den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Best rational approximation of x with denominator at most max_den
/// (continued-fraction convergents).
inline Rational rationalize(double x, std::int64_t max_den = 1000000) {
  if (!std::isfinite(x)) throw NumericalError("cannot rationalize a non-finite value");
  const bool negative = x < 0;
  double v = std::fabs(x);
  Integer p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  for (int iter = 0; iter < 64; ++iter) {
    const double a = std::floor(v);
    const Integer ai(static_cast<std::int64_t>(a));
    Integer p2 = ai * p1 + p0;
    Integer q2 = ai * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    const double frac = v - a;
    if (frac < 1e-12) break;
    v = 1.0 / frac;
    if (v > 1e15) break;
  }
  if (q1 == 0) return Rational(0);
  Rational r(p1, q1);
  return negative ? Rational(-r) : r;
}

}  // namespace gofinsler
