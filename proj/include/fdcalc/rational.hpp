#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace fdc {

using Rational = mpq_class;
using Integer = mpz_class;

/// num/den in lowest terms (mpq_class(num, den) does not canonicalize).
inline Rational ratio(long num, long den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

/// Canonical text form: "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& q);

/// Parses "p", "-p" or "p/q". Throws std::invalid_argument on malformed text.
Rational parse_rational(std::string_view text);

int sign(const Rational& q);

Integer floor(const Rational& q);
Integer ceil(const Rational& q);

/// The rational of least denominator (then least magnitude) in the open
/// interval (lo, hi). Either bound may be absent (unbounded side).
Rational simplest_between(const std::optional<Rational>& lo, const std::optional<Rational>& hi);

/// Decimal approximation with `digits` fractional digits (truncated toward zero).
std::string to_decimal(const Rational& q, int digits);

double to_double(const Rational& q);

}  // namespace fdc
