#pragma once

#include <cstdint>
#include <limits>
#include <string>

#include <gmpxx.h>

#include "mcf/errors.hpp"

namespace mcf {

using i64 = std::int64_t;
using i128 = __int128;

inline i128 checked_mul(i128 a, i128 b, const char* what) {
  if (a != 0) {
    constexpr i128 lim = (i128(1) << 126);
    i128 q = (b >= 0 ? b : -b);
    i128 p = (a >= 0 ? a : -a);
    if (q != 0 && p > lim / q)
      throw ArithmeticError(std::string("128-bit overflow computing ") + what +
                            "; instance too large");
  }
  return a * b;
}

inline i64 narrow_i64(i128 v, const char* what) {
  if (v > i128(std::numeric_limits<i64>::max()) || v < i128(std::numeric_limits<i64>::min()))
    throw ArithmeticError(std::string(what) + " does not fit in 64 bits; instance too large");
  return static_cast<i64>(v);
}

inline i64 checked_add(i64 a, i64 b, const char* what) {
  i64 r;
  if (__builtin_add_overflow(a, b, &r))
    throw ArithmeticError(std::string("64-bit overflow computing ") + what);
  return r;
}

inline std::string to_string_i128(i128 v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  unsigned __int128 u = neg ? -(unsigned __int128)v : (unsigned __int128)v;
  std::string s;
  while (u) {
    s.push_back(char('0' + int(u % 10)));
    u /= 10;
  }
  if (neg) s.push_back('-');
  return std::string(s.rbegin(), s.rend());
}

/// ceil(a / b) for b > 0.
inline i128 ceil_div(i128 a, i128 b) { return (a + b - 1) / b; }

/// Scalar abstraction shared by the float and the exact-rational solver
/// instantiations.
template <class T>
struct NumTraits;

template <>
struct NumTraits<double> {
  static double from_i64(i64 v) { return static_cast<double>(v); }
  static double from_ratio(i64 num, i64 den) {
    return static_cast<double>(num) / static_cast<double>(den);
  }
  static double to_double(double v) { return v; }
  static double abs(double v) { return v < 0 ? -v : v; }
  static constexpr bool exact = false;
};

template <>
struct NumTraits<long double> {
  static long double from_i64(i64 v) { return static_cast<long double>(v); }
  static long double from_ratio(i64 num, i64 den) {
    return static_cast<long double>(num) / static_cast<long double>(den);
  }
  static double to_double(long double v) { return static_cast<double>(v); }
  static long double abs(long double v) { return v < 0 ? -v : v; }
  static constexpr bool exact = false;
};

template <>
struct NumTraits<mpf_class> {
  static mpf_class from_i64(i64 v) { return mpf_class(static_cast<long>(v)); }
  static mpf_class from_ratio(i64 num, i64 den) {
    return mpf_class(static_cast<long>(num)) / mpf_class(static_cast<long>(den));
  }
  static double to_double(const mpf_class& v) { return v.get_d(); }
  static mpf_class abs(const mpf_class& v) { return v < 0 ? mpf_class(-v) : v; }
  static constexpr bool exact = false;
};

template <>
struct NumTraits<mpq_class> {
  static mpq_class from_i64(i64 v) {
    mpq_class q;
    q = static_cast<long>(v);  // test-scale values fit in long
    return q;
  }
  static mpq_class from_ratio(i64 num, i64 den) {
    mpq_class q(static_cast<long>(num), static_cast<long>(den));
    q.canonicalize();
    return q;
  }
  static double to_double(const mpq_class& v) { return v.get_d(); }
  static mpq_class abs(const mpq_class& v) { return v < 0 ? mpq_class(-v) : v; }
  static constexpr bool exact = true;
};

}  // namespace mcf
