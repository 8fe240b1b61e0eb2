#include "skewnp/structure_maps.hpp"

#include <sstream>

#include "skewnp/errors.hpp"

namespace skewnp {

namespace {

std::int64_t den64(const Rational& q) { return to_int64(boost::multiprecision::denominator(q)); }

}  // namespace

std::string IsoRecord::str() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::Shift: os << "shift(ord b = " << series.ord().str() << ")"; break;
    case Kind::Scale: os << "scale(r = " << exponent.str() << ")"; break;
    case Kind::Reembed: os << "reembed(n = " << index << ")"; break;
    case Kind::UnitNormalize: os << "unit_normalize(x^" << exponent.str() << ")"; break;
  }
  return os.str();
}

PuiseuxPoly shift_iso(const PuiseuxPoly& f, const PuiseuxSeries& b) {
  const PuiseuxRing& src = f.ring();
  const std::int64_t L = lcm_ramification(src.L(), b.compact().ramification());
  auto target = PuiseuxRing::make(src.alpha(), L, src.a() - b);
  return substitute(f, PuiseuxPoly::linear(target, b));
}

PuiseuxPoly scale_iso(const PuiseuxPoly& f, const Rational& r) {
  const PuiseuxRing& src = f.ring();
  const std::int64_t L = lcm_ramification(src.L(), den64(r));
  auto target = PuiseuxRing::make(src.alpha(), L, src.a().shifted(r));
  const PuiseuxPoly X(target, {PuiseuxSeries(), PuiseuxSeries::x_power(-r)});
  return substitute(f, X);
}

BigComplex scale_beta(const Alpha& alpha, const Rational& r, int i) {
  return alpha.pow(-r * Rational(i * (i - 1), 2));
}

PuiseuxSeries trace_map(const PuiseuxSeries& b, int d, const Alpha& alpha) {
  if (d < 1) throw DomainError("trace map needs d >= 1");
  PuiseuxSeries acc = b;
  PuiseuxSeries cur = b;
  for (int k = 1; k < d; ++k) {
    cur = sigma_apply(cur, Rational(1), alpha);
    acc += cur;
  }
  return acc;
}

PuiseuxSeries trace_solve(const PuiseuxSeries& g, int d, const Alpha& alpha) {
  if (d < 1) throw DomainError("trace map needs d >= 1");
  if (d == 1) return g;
  const std::int64_t m = g.ramification();
  const BigReal tiny = pow2(-static_cast<long>(working_bits()) + 16);
  return g.map_terms([&](std::int64_t j, const BigComplex& c) {
    const BigComplex beta = alpha.pow(Rational(j, m));
    BigComplex s(0), p(1);
    for (int k = 0; k < d; ++k) {
      s += p;
      p *= beta;
    }
    if (s.abs() <= tiny) {
      std::ostringstream os;
      os << "trace map is not invertible at exponent " << Rational(j, m).str();
      throw MathObstruction(os.str());
    }
    return c / s;
  });
}

std::optional<Rational> newton_slope(const PuiseuxPoly& f) {
  const int d = f.degree();
  if (d < 1) throw DomainError("slope of a constant polynomial");
  std::optional<Rational> r;
  for (int i = 0; i < d; ++i) {
    const auto& c = f.coeffs()[static_cast<std::size_t>(i)];
    if (c.is_zero()) continue;
    Rational v = -c.ord().value() / (d - i);
    if (!r || v > *r) r = v;
  }
  return r;
}

NormalizedScaled normalize_scaled(const PuiseuxPoly& psi_f, const Rational& r) {
  const int d = psi_f.degree();
  if (d < 1) throw DomainError("normalization of a constant polynomial");
  const PuiseuxSeries& lead = psi_f.leading();
  if (lead.terms().size() != 1 || lead.ord() != Valuation(-r * d))
    throw DomainError("scaled polynomial must have leading coefficient of the form c x^(-r d)");
  // The leading coefficient is a monomial in truth; a truncation tail on it
  // only reflects how it was computed.
  const auto& term = lead.terms().front();
  PuiseuxSeries unit = PuiseuxSeries::monomial(BigComplex(1) / term.c, -Rational(term.k, lead.ramification()));
  PuiseuxPoly p = left_scalar(unit, psi_f);
  if (p.degree() != d) throw InternalError("normalization lost the leading coefficient");
  p.mutable_coeffs().back() = PuiseuxSeries(1);
  return {std::move(p), std::move(unit)};
}

std::pair<PuiseuxSeries, PuiseuxSeries> pull_unit_through_linear(const PuiseuxSeries& u, const PuiseuxSeries& c,
                                                                  const PuiseuxRing& ring, const Rational& order) {
  if (u.is_zero()) throw ZeroDivision("unit is numerically zero");
  PuiseuxSeries up = ring.sigma_pow(u, -1);
  PuiseuxSeries inv = series_inv(up, order);
  PuiseuxSeries cp = (u * c + ring.delta(up)) * inv;
  return {std::move(cp), std::move(up)};
}

}  // namespace skewnp
