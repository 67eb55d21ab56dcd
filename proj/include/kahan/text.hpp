#pragma once

// Plain-text syntax for polynomials.
//
//   3/2*x1'^2*x2 - a*_x1 + h^2
//
// `xJ` is component J at shift 0; each trailing apostrophe is one forward
// shift (`x1''` is shift 2, `x1'3` is shift 3); each leading underscore is one
// backward shift (`_x1` is shift -1).  `x0` is the dummy constant 1.  Any other
// identifier is a parameter.  Division is allowed by constants only.

#include <string>
#include <string_view>

#include "kahan/polynomial.hpp"

namespace kahan {

/// Throws ParseError with a 1-based column.
Polynomial parse_polynomial(std::string_view text);

/// Parses an exact rational literal: integer, fraction (`-3/7`) or decimal (`0.125`).
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& q);
/// Canonical printing: terms in descending graded-lex order.  The output parses
/// back to the same polynomial.
std::string to_string(const Polynomial& p);
std::string to_string(const Monomial& m);
std::string to_string(const RationalFunction& f);

}  // namespace kahan
