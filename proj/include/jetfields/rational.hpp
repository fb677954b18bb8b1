#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>

namespace jetfields {

// Exact rational arithmetic for expression constants and group-law tests.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline Rational rational_factorial(int n) {
  BigInt f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return Rational(f);
}

inline bool is_integer(const Rational& q) {
  return boost::multiprecision::denominator(q) == 1;
}

// Exact integer power; negative exponents require a nonzero base.
inline Rational rational_pow(const Rational& base, std::int64_t e) {
  if (e == 0) return Rational(1);
  bool neg = e < 0;
  std::uint64_t k = neg ? static_cast<std::uint64_t>(-e) : static_cast<std::uint64_t>(e);
  Rational acc = 1, b = base;
  while (k > 0) {
    if (k & 1u) acc *= b;
    b *= b;
    k >>= 1u;
  }
  if (neg) {
    if (acc == 0) throw std::domain_error("rational_pow: zero base with negative exponent");
    acc = Rational(1) / acc;
  }
  return acc;
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

}  // namespace jetfields
