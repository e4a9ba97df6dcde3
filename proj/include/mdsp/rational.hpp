#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mdsp/errors.hpp"

namespace mdsp {

// Exact arbitrary-precision scalars. gmpxx keeps mpq_class canonical (reduced,
// positive denominator) after every arithmetic operation; values built from
// raw numerator/denominator pairs go through make_rational.
using Integer = mpz_class;
using Rational = mpq_class;
using IntVector = std::vector<Integer>;

inline Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw InvalidArgument("rational with zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline bool is_integral(const Rational& q) { return q.get_den() == 1; }

inline Integer floor_of(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

inline Integer ceil_of(const Rational& q) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

// Nearest integer, halves rounded up.
inline Integer round_of(const Rational& q) { return floor_of(q + Rational(1, 2)); }

inline Rational abs_of(const Rational& q) { return q < 0 ? Rational(-q) : q; }

// Bits needed to write |z|; zero takes one bit.
inline std::size_t bit_length(const Integer& z) {
  return mpz_sizeinbase(z.get_mpz_t(), 2);
}

// Storage size of a rational as numerator bits plus denominator bits.
inline std::size_t bit_size(const Rational& q) {
  return bit_length(q.get_num()) + bit_length(q.get_den());
}

inline Integer isqrt(const Integer& z) {
  if (z < 0) throw InvalidArgument("isqrt of a negative integer");
  Integer r;
  mpz_sqrt(r.get_mpz_t(), z.get_mpz_t());
  return r;
}

inline Integer pow2(unsigned long e) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, e);
  return r;
}

// Rational enclosure [lo, hi] of sqrt(q) with hi - lo <= 2^-frac_bits / den(q).
// Both ends are exact when q is a perfect rational square.
inline std::pair<Rational, Rational> sqrt_enclosure(const Rational& q,
                                                    unsigned long frac_bits) {
  if (q < 0) throw InvalidArgument("sqrt of a negative rational");
  // sqrt(a/b) = sqrt(a*b)/b
  const Integer scale = pow2(frac_bits);
  const Integer radicand = q.get_num() * q.get_den() * scale * scale;
  const Integer root = isqrt(radicand);
  const Integer denom = q.get_den() * scale;
  Rational lo = make_rational(root, denom);
  if (root * root == radicand) return {lo, lo};
  return {lo, make_rational(root + 1, denom)};
}

// Integers j with (j - center)^2 <= radius_sq, as a closed range [lo, hi].
// Empty when lo > hi.
inline std::pair<Integer, Integer> integers_within(const Rational& center,
                                                   const Rational& radius_sq) {
  if (radius_sq < 0) return {Integer(1), Integer(0)};
  auto [lo_r, hi_r] = sqrt_enclosure(radius_sq, 8);
  Integer lo = floor_of(center - hi_r);
  Integer hi = ceil_of(center + hi_r);
  auto inside = [&](const Integer& j) {
    Rational d = Rational(j) - center;
    return d * d <= radius_sq;
  };
  while (lo <= hi && !inside(lo)) ++lo;
  while (hi >= lo && !inside(hi)) --hi;
  return {lo, hi};
}

// Canonical text form: "p/q", or "p" for integers.
inline std::string to_string(const Rational& q) { return q.get_str(); }
inline std::string to_string(const Integer& z) { return z.get_str(); }

// Accepts "p", "-p", "+p", "p/q" with decimal integers and q != 0.
inline std::optional<Rational> parse_rational(std::string_view text) {
  if (text.empty()) return std::nullopt;
  auto valid_int = [](std::string_view s, bool allow_sign) {
    if (s.empty()) return false;
    std::size_t i = 0;
    if (allow_sign && (s[0] == '-' || s[0] == '+')) i = 1;
    if (i == s.size()) return false;
    return std::all_of(s.begin() + static_cast<std::ptrdiff_t>(i), s.end(),
                       [](char c) { return c >= '0' && c <= '9'; });
  };
  const auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den =
      slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!valid_int(num, true) || !valid_int(den, false)) return std::nullopt;
  std::string num_s(num);
  if (num_s[0] == '+') num_s.erase(0, 1);
  Integer n(num_s, 10);
  Integer d(std::string(den), 10);
  if (d == 0) return std::nullopt;
  return make_rational(n, d);
}

inline Rational rational_or_throw(std::string_view text) {
  auto q = parse_rational(text);
  if (!q) throw InvalidArgument("not a rational number: '" + std::string(text) + "'");
  return *q;
}

// Lexicographic order on integer tuples of equal length.
inline bool lex_less(const IntVector& a, const IntVector& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

inline IntVector to_int_vector(const std::vector<long>& xs) {
  return IntVector(xs.begin(), xs.end());
}

}  // namespace mdsp
