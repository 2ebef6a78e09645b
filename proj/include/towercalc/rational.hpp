#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace towercalc {

/// Exact rational scalar. GMP keeps it in lowest terms with a positive
/// denominator after every arithmetic operation.
using Rational = mpq_class;
using BigInt = mpz_class;

/// Parses "p", "p/q", "-p/q" or a finite decimal such as "2.5".
Rational parse_rational(std::string_view text);

/// "p/q", or "p" when the denominator is one.
std::string to_string(const Rational& value);

/// num/den reduced to lowest terms. mpq_class(num, den) alone does not reduce.
inline Rational make_rational(const BigInt& num, const BigInt& den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline Rational half(long numerator) { return make_rational(numerator, 2); }

/// Floor of a rational as a long (values used here are small).
long floor_to_long(const Rational& value);

/// True iff value is an integer.
inline bool is_integer(const Rational& value) { return value.get_den() == 1; }

}  // namespace towercalc
