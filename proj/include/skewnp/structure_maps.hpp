#pragma once

#include <optional>
#include <string>
#include <utility>

#include "skewnp/rings.hpp"

namespace skewnp {

// One ring isomorphism applied by the factorizer, kept so factors can be
// pulled back to the original ring.
struct IsoRecord {
  enum class Kind { Shift, Scale, Reembed, UnitNormalize };
  Kind kind;
  PuiseuxSeries series;   // Shift: b; UnitNormalize: the unit
  Rational exponent{0};   // Scale: r; UnitNormalize: exponent of x in the unit
  std::int64_t index = 1; // Reembed: n

  static IsoRecord shift(PuiseuxSeries b) { return {Kind::Shift, std::move(b), Rational(0), 1}; }
  static IsoRecord scale(Rational r) { return {Kind::Scale, PuiseuxSeries(), std::move(r), 1}; }
  static IsoRecord reembed(std::int64_t n) { return {Kind::Reembed, PuiseuxSeries(), Rational(0), n}; }
  static IsoRecord unit_normalize(PuiseuxSeries u, Rational e) { return {Kind::UnitNormalize, std::move(u), std::move(e), 1}; }

  std::string str() const;
};

// t -> t - b, from F[t,sigma,delta_a] onto F[t,sigma,delta_(a-b)].
PuiseuxPoly shift_iso(const PuiseuxPoly& f, const PuiseuxSeries& b);

// t -> x^(-r) t, from F[t,sigma,delta_a] onto F[t,sigma,delta_(a x^r)].
PuiseuxPoly scale_iso(const PuiseuxPoly& f, const Rational& r);

// (x^(-r) t)^i = beta_i x^(-r i) t^i with beta_i = alpha^(-r i (i-1) / 2).
BigComplex scale_beta(const Alpha& alpha, const Rational& r, int i);

// b + sigma(b) + ... + sigma^(d-1)(b)
PuiseuxSeries trace_map(const PuiseuxSeries& b, int d, const Alpha& alpha);
// Termwise preimage of the trace map: b_j = g_j / (1 + beta_j + ... + beta_j^(d-1)).
PuiseuxSeries trace_solve(const PuiseuxSeries& g, int d, const Alpha& alpha);

// max over i < d of -ord(f_i) / (d - i); empty when f = t^d.
std::optional<Rational> newton_slope(const PuiseuxPoly& f);

struct NormalizedScaled {
  PuiseuxPoly poly;     // monic, all orders >= 0, some order 0
  PuiseuxSeries unit;   // poly = unit * psi_f
};
// Left-multiplies the scaled polynomial by the inverse of its leading coefficient.
NormalizedScaled normalize_scaled(const PuiseuxPoly& psi_f, const Rational& r);

// u (t - c) = (t - c') u' with u' = sigma^(-1)(u); returns (c', u').
// `order` bounds the inverse of u' when all inputs are exact.
std::pair<PuiseuxSeries, PuiseuxSeries> pull_unit_through_linear(const PuiseuxSeries& u, const PuiseuxSeries& c,
                                                                  const PuiseuxRing& ring, const Rational& order);

}  // namespace skewnp
