#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "skewnp/factorizer.hpp"
#include "skewnp/text.hpp"

namespace skewnp::testing {

inline PuiseuxRingPtr ring_for(const std::string& alpha, std::int64_t L = 1, const std::string& a = "0") {
  return PuiseuxRing::make(parse_alpha(alpha), L, parse_series(a));
}

inline PuiseuxPoly poly(const std::string& text, const PuiseuxRingPtr& R) { return parse_poly(text, R); }

inline BigReal bits(long e) { return pow2(e); }

// Fixed-seed generator for property suites.
class Gen {
public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }
  bool coin() { return integer(0, 1) == 1; }
  Rational rational(long h = 5) {
    long den = integer(1, h);
    return Rational(integer(-h, h), den);
  }
  Rational nonzero_rational(long h = 5) {
    for (;;) {
      Rational q = rational(h);
      if (q != 0) return q;
    }
  }
  BigComplex complex(long h = 5) { return BigComplex(rational(h), coin() ? rational(h) : Rational(0)); }
  BigComplex real(long h = 5) { return BigComplex(rational(h)); }

  // Exact series with `terms` terms at ramification L, exponents k/L for k in [kmin, kmax].
  PuiseuxSeries series(std::int64_t L, long kmin, long kmax, int terms, bool complex_coeffs = false) {
    std::vector<PuiseuxSeries::Term> t;
    for (int i = 0; i < terms; ++i) t.push_back({integer(kmin, kmax), complex_coeffs ? complex() : real()});
    return PuiseuxSeries::from_terms(L, std::move(t));
  }

  PuiseuxPoly poly(const PuiseuxRingPtr& R, int deg, std::int64_t L, long kmin, long kmax, int terms, bool monic) {
    std::vector<PuiseuxSeries> c;
    for (int i = 0; i <= deg; ++i) c.push_back(series(L, kmin, kmax, terms));
    if (monic) c.back() = PuiseuxSeries(1);
    else if (c.back().is_zero()) c.back() = PuiseuxSeries(1);
    return PuiseuxPoly(R, std::move(c));
  }

  std::mt19937_64& engine() { return rng_; }

private:
  std::mt19937_64 rng_;
};

inline BigReal poly_diff(const PuiseuxPoly& a, const PuiseuxPoly& b, const Valuation& upto = Valuation::infinity()) {
  return poly_deviation(a, b, upto);
}

inline BigReal poly_norm(const PuiseuxPoly& f) {
  BigReal m(0);
  for (const auto& c : f.coeffs())
    for (const auto& t : c.terms()) if (m < t.c.abs()) m = t.c.abs();
  return m;
}

// Agreement to 2^(16-P) relative to the larger operand, times a condition
// factor for computations whose intermediates outgrow their result.
inline bool close(const PuiseuxPoly& a, const PuiseuxPoly& b, const Valuation& upto = Valuation::infinity(),
                  const BigReal& condition = BigReal(1)) {
  const BigReal na = poly_norm(a), nb = poly_norm(b);
  const BigReal scale = (1 + (na < nb ? nb : na)) * condition;
  return poly_diff(a, b, upto) <= pow2(16 - static_cast<long>(working_bits())) * scale;
}

// The sigma-zero of t^2 - (2+x) t + (1 + 2x) with constant term 1, from
// sigma(z) z - (2+x) z + 1 + 2x = 0 solved coefficient by coefficient over Q.
inline std::vector<Rational> example_one_zero(const Rational& alpha, int n) {
  std::vector<Rational> g{Rational(1)};
  for (int k = 1; k < n; ++k) {
    Rational rest = -g[static_cast<std::size_t>(k - 1)];
    if (k == 1) rest += 2;
    for (int i = 1; i < k; ++i) {
      Rational ai(1);
      for (int e = 0; e < i; ++e) ai *= alpha;
      rest += ai * g[static_cast<std::size_t>(i)] * g[static_cast<std::size_t>(k - i)];
    }
    Rational ak(1);
    for (int e = 0; e < k; ++e) ak *= alpha;
    g.push_back(-rest / (ak - 1));
  }
  return g;
}

// Exact series with order in [-1, 2] and ramification at most 3.
inline PuiseuxSeries random_zero(Gen& gen) {
  const std::int64_t L = gen.integer(1, 3);
  const long k0 = gen.integer(-L, 2 * L);
  std::vector<PuiseuxSeries::Term> t{{k0, BigComplex(gen.nonzero_rational(3), gen.coin() ? gen.rational(3) : Rational(0))}};
  const int extra = static_cast<int>(gen.integer(1, 3));
  for (int i = 0; i < extra; ++i) t.push_back({gen.integer(k0 + 1, k0 + 4 * L), gen.complex(3)});
  return PuiseuxSeries::from_terms(L, std::move(t));
}

inline PuiseuxPoly linear_product(const PuiseuxRingPtr& R, const std::vector<PuiseuxSeries>& zeros) {
  PuiseuxPoly p = PuiseuxPoly::one(R);
  for (const auto& c : zeros) p = p * PuiseuxPoly::linear(R, c);
  return p;
}

}  // namespace skewnp::testing
