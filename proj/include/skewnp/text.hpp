#pragma once

#include <string>
#include <string_view>

#include "skewnp/rings.hpp"

namespace skewnp {

// Text forms shared by the CLI and the tests.
//
//   scalar:  3, -3/2, 0.25, 1e-3, i, 2i, (1+2i)/3
//   series:  1 - 3/2*x^(1/2) + (2+1i)*x^2 + O(x^3)
//   poly:    t^2 - (2+x)*t + (1+2*x)
//
// Products may be written by juxtaposition ("2x"); exponents of x are
// integers or parenthesized fractions. Coefficients multiply t from the left.
// A loose O(x^e) term in a polynomial truncates every coefficient but the
// leading one.

GaussianRational parse_scalar(std::string_view text);
PuiseuxSeries parse_series(std::string_view text);
PuiseuxPoly parse_poly(std::string_view text, const PuiseuxRingPtr& ring);
// Rational literal, or "i"-style complex literal accepted as a diagnostic alpha.
Alpha parse_alpha(std::string_view text);

// Shortest decimal that reads back to the same value at the working precision.
std::string format_real(const BigReal& v);
std::string format_complex(const BigComplex& c);
std::string format_rational(const Rational& q);
std::string format_series(const PuiseuxSeries& s);
std::string format_poly(const PuiseuxPoly& p);

}  // namespace skewnp
