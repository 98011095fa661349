#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace rounderr {

// Exact arithmetic backbone of the moment engine. Every quantity that enters
// a moment bound (half-widths, factorials, series coefficients) stays an
// arbitrary-precision rational until the final conversion to a tail
// probability or epsilon, which happens in the log domain.
using Rational = mpq_class;

// base^e with e >= 0, exact.
Rational rational_pow(const Rational& base, unsigned long exponent);

// 2^k for any sign of k, exact.
Rational pow2(long k);

// n! as an arbitrary-precision integer.
mpz_class factorial(unsigned long n);

// binomial(n, k) as an arbitrary-precision integer.
mpz_class binomial(unsigned long n, unsigned long k);

// Natural log / log2 / log10 of a positive rational, accurate to a few ulps
// regardless of magnitude (works far outside binary64 range).
double ln_rational(const Rational& q);
double log2_rational(const Rational& q);
double log10_rational(const Rational& q);

double to_double(const Rational& q);

// Exact conversion of a finite binary64 value.
Rational rational_from_double(double x);

// Canonical "num/den" rendering; integers render without the denominator.
std::string to_string(const Rational& q);

// Accepts "2^-24", "3/4", "0.25", "1e9", "1.5e-3", plain integers.
// Decimal forms are converted digit-for-digit, so the result is the exact
// rational the user typed, not the nearest binary64.
Rational parse_rational(std::string_view text);

// Exact nonnegative integer from the same grammar ("1e9" -> 1000000000).
// Throws if the value is fractional, negative, or does not fit 64 bits.
std::uint64_t parse_count(std::string_view text);

}  // namespace rounderr
