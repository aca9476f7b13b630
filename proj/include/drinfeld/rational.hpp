#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace drinfeld {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  return Rational(BigInt(num), BigInt(den));
}

inline BigInt numerator_of(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt denominator_of(const Rational& r) { return boost::multiprecision::denominator(r); }

inline bool is_integer(const Rational& r) { return denominator_of(r) == 1; }

inline BigInt floor_of(const Rational& r) {
  BigInt n = numerator_of(r);
  BigInt d = denominator_of(r);
  BigInt quot = n / d;
  if (n < 0 && quot * d != n) quot -= 1;
  return quot;
}

inline BigInt ceil_of(const Rational& r) { return -floor_of(-r); }

/// base^exp for a possibly negative exponent.
inline Rational power(std::int64_t base, std::int64_t exp) {
  BigInt b = boost::multiprecision::pow(BigInt(base), static_cast<unsigned>(exp < 0 ? -exp : exp));
  if (exp < 0) return Rational(BigInt(1), b);
  return Rational(b);
}

/// "n" or "n/d", always reduced.
inline std::string to_string(const Rational& r) {
  if (is_integer(r)) return numerator_of(r).str();
  return numerator_of(r).str() + "/" + denominator_of(r).str();
}

inline std::string to_string(const BigInt& n) { return n.str(); }

/// If r == base^e for an integer e, returns e.
inline std::optional<std::int64_t> log_exact(const Rational& r, std::int64_t base) {
  if (r <= 0 || base < 2) return std::nullopt;
  BigInt n = numerator_of(r), d = denominator_of(r);
  if (n != 1 && d != 1) return std::nullopt;
  BigInt m = (n == 1) ? d : n;
  std::int64_t e = 0;
  while (m > 1) {
    if (m % base != 0) return std::nullopt;
    m /= base;
    ++e;
  }
  return n == 1 ? -e : e;
}

}  // namespace drinfeld
