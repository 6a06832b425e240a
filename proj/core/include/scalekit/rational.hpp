#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace scalekit {

// Exact rational arithmetic. GMP keeps denominators positive and fractions
// canonical after every operation, which is exactly the contract the
// certificate code relies on.
using Rational = mpq_class;
using Integer = mpz_class;

// max(bits of |numerator|, bits of denominator); 0 has bit length 1.
int bit_length(const Rational& q);

// Largest bit_length over a collection. Empty collections count as 1.
int bit_complexity(const std::vector<Rational>& values);

// Accepts "p/q", integers, plain decimals ("-0.125") and scientific decimals
// ("25e-3"). Throws Error on anything else.
Rational rational_from_string(const std::string& text);

// Exact binary expansion of the double (no decimal rounding).
Rational rational_from_double(double x);

double to_double(const Rational& q);

}  // namespace scalekit
