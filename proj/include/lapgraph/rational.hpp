#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstdint>
#include <string>
#include <string_view>

#include "lapgraph/errors.hpp"

namespace lapgraph {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

inline BigInt numerator(const BigRational& r) { return boost::multiprecision::numerator(r); }
inline BigInt denominator(const BigRational& r) { return boost::multiprecision::denominator(r); }

inline bool is_integer(const BigRational& r) { return denominator(r) == 1; }

inline std::string to_string(const BigInt& v) { return v.str(); }

/// "num/den", or just "num" when the denominator is 1.
inline std::string to_string(const BigRational& r) {
  if (is_integer(r)) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

inline BigInt parse_integer(std::string_view s) {
  std::string_view digits = s;
  if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) digits.remove_prefix(1);
  if (digits.empty()) throw ValidationError("empty integer literal");
  for (char c : digits) {
    if (c < '0' || c > '9') throw ValidationError("malformed integer '" + std::string(s) + "'");
  }
  return BigInt(std::string(s));
}

/// Accepts "a", "a/b" and plain decimals like "0.3" (taken exactly as 3/10).
inline BigRational parse_rational(std::string_view s) {
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_integer(s.substr(0, slash));
    BigInt den = parse_integer(s.substr(slash + 1));
    if (den == 0) throw ValidationError("zero denominator in '" + std::string(s) + "'");
    return BigRational(num, den);
  }
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view frac = s.substr(dot + 1);
    std::string whole(s.substr(0, dot));
    if (whole.empty() || whole == "-" || whole == "+") whole += "0";
    if (frac.empty()) throw ValidationError("malformed decimal '" + std::string(s) + "'");
    BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(frac.size()));
    BigInt int_part = parse_integer(whole);
    BigInt frac_part = parse_integer(frac);
    bool negative = !whole.empty() && whole.front() == '-';
    BigInt num = int_part * scale + (negative ? -frac_part : frac_part);
    return BigRational(num, scale);
  }
  return BigRational(parse_integer(s));
}

inline BigInt ipow(const BigInt& base, unsigned exponent) {
  return boost::multiprecision::pow(base, exponent);
}

/// Integer power of a rational; negative exponents need a nonzero base.
inline BigRational rpow(const BigRational& base, long exponent) {
  if (exponent < 0) {
    if (base == 0) throw ValidationError("zero raised to a negative power");
    return BigRational(1) / rpow(base, -exponent);
  }
  BigRational result = 1;
  BigRational b = base;
  auto e = static_cast<unsigned long>(exponent);
  while (e) {
    if (e & 1U) result *= b;
    e >>= 1U;
    if (e) b *= b;
  }
  return result;
}

inline BigInt factorial(unsigned n) {
  BigInt r = 1;
  for (unsigned i = 2; i <= n; ++i) r *= i;
  return r;
}

inline BigInt binomial(long n, long k) {
  if (n < 0 || k < 0 || k > n) {
    throw ValidationError("binomial(" + std::to_string(n) + ", " + std::to_string(k) +
                          ") requires 0 <= k <= n");
  }
  k = std::min(k, n - k);
  BigInt r = 1;
  for (long i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

inline long double to_long_double(const BigRational& r) { return r.convert_to<long double>(); }
inline double to_double(const BigRational& r) { return r.convert_to<double>(); }

/// Decimal expansion truncated toward zero after `digits` fractional digits.
inline std::string to_decimal(const BigRational& r, unsigned digits) {
  BigInt num = numerator(r);
  BigInt den = denominator(r);
  std::string out;
  if (num < 0) {
    out += '-';
    num = -num;
  }
  BigInt whole = num / den;
  BigInt rest = num % den;
  out += whole.str();
  if (digits == 0) return out;
  out += '.';
  for (unsigned i = 0; i < digits; ++i) {
    rest *= 10;
    out += static_cast<char>('0' + static_cast<int>(rest / den));
    rest %= den;
  }
  return out;
}

}  // namespace lapgraph
