#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <numeric>
#include <string>

namespace effinv {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational rat(long long num, long long den = 1) {
  return Rational(Integer(num), Integer(den));
}

/// Fractional part {x} in [0,1).
inline Rational frac(const Rational& x) {
  Integer num = numerator(x);
  Integer den = denominator(x);
  Integer q = num / den;  // truncates toward zero
  if (num < 0 && q * den != num) q -= 1;
  return x - Rational(q);
}

inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q = a / b;
  if ((a % b) != 0 && ((a < 0) != (b < 0))) q -= 1;
  return q;
}

inline long long lcm_ll(long long a, long long b) {
  return std::lcm(a, b);
}

inline Rational pow_rat(const Rational& base, unsigned exp) {
  Rational out = 1;
  for (unsigned i = 0; i < exp; ++i) out *= base;
  return out;
}

inline std::string to_string(const Rational& x) {
  if (denominator(x) == 1) return numerator(x).str();
  return numerator(x).str() + "/" + denominator(x).str();
}

}  // namespace effinv
