#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace duomagma {

using Integer = mpz_class;
using Rational = mpq_class;

/// Parses "p", "-p" or "p/q" into a canonical rational. Throws SchemaError.
Rational parse_rational(std::string_view text);

/// Canonical text form: "p" for integers, "p/q" otherwise.
std::string format_rational(const Rational& r);

Integer floor(const Rational& r);

/// Representative of r modulo 1 in [0,1).
Rational frac(const Rational& r);

/// Distance from r to the nearest integer.
Rational dist_to_integer(const Rational& r);

Rational abs(const Rational& r);

Integer lcm_of_denominators(const std::vector<Rational>& values);

}  // namespace duomagma
