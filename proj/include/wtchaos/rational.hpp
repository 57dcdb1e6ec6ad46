#pragma once

// Exact rational arithmetic on top of GMP.

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>

namespace wtchaos {

using Rational = mpq_class;
using BigInt = mpz_class;

/// Bit-length cap applied to exact products. Exceeding it raises NumericRangeError.
struct ExactOptions {
  std::size_t max_bits = 1u << 14;
};

/// Parses "3", "-2/7", "0.125" or "1e-3" into an exact rational.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" (or "p" when q == 1).
std::string to_string(const Rational& q);

/// Bit length of numerator plus bit length of denominator.
std::size_t bit_length(const Rational& q);

/// Throws NumericRangeError when bit_length(q) exceeds the cap.
void check_bits(const Rational& q, const ExactOptions& opts, std::string_view what);

/// Natural logarithm of a positive rational, accurate for arbitrarily large parts.
double log_of(const Rational& q);

double to_double(const Rational& q);

Rational pow_int(const Rational& base, long exponent);

/// Rational enclosure lo <= sqrt(q) <= hi with hi - lo <= 2^-precision_bits * (scale of q).
std::pair<Rational, Rational> sqrt_enclosure(const Rational& q, unsigned precision_bits);

}  // namespace wtchaos
