#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace stvrla {

// Exact arithmetic for tallies, transfer values and bound vectors. Floating
// point only appears in the risk layer.
using Rational = mpq_class;

Rational make_rational(std::int64_t num, std::int64_t den = 1);

// "2000/9001", or "7001" when the denominator is 1.
std::string to_fraction_string(const Rational& r);

// Decimal rendering rounded half away from zero to `digits` places.
std::string to_decimal_string(const Rational& r, int digits = 6);

double to_double(const Rational& r);

// Accepts "a/b", integers and finite decimals ("0.05" parses to 1/20 exactly).
Rational parse_rational(std::string_view text);

}  // namespace stvrla
