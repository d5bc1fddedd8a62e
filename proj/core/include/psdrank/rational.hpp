#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>

namespace psdrank {

using Integer = mpz_class;
using Rational = mpq_class;

/// num/den in lowest terms. mpq_class(num, den) alone does not reduce,
/// and unreduced values compare unequal to their reduced forms.
Rational make_rational(long num, long den);

/// Parses "p", "-p", "p/q" or a finite decimal such as "0.25".
Rational parse_rational(std::string_view text);

/// Always "p/q" with q >= 1, the file-format spelling.
std::string to_fraction_string(const Rational& value);

/// "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& value);

/// Exact square root when value is the square of a rational.
std::optional<Rational> exact_sqrt(const Rational& value);

double to_double(const Rational& value);

Rational abs(const Rational& value);

}  // namespace psdrank
