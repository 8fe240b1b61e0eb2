#pragma once

#include <memory>
#include <string>
#include <vector>

#include "skewnp/puiseux.hpp"
#include "skewnp/residue.hpp"
#include "skewnp/skew_poly.hpp"

namespace skewnp {

// Coefficients in F with sigma(x) = alpha x and delta_a(b) = a (sigma(b) - b).
// The uniformizer is pi = x^(1/L); orders in "units" count powers of pi.
class PuiseuxRing {
public:
  using Elem = PuiseuxSeries;

  explicit PuiseuxRing(SkewContext ctx);
  PuiseuxRing(Alpha alpha, std::int64_t L = 1, PuiseuxSeries a = PuiseuxSeries())
      : PuiseuxRing(SkewContext(std::move(alpha), L, std::move(a))) {}
  static std::shared_ptr<const PuiseuxRing> make(Alpha alpha, std::int64_t L = 1, PuiseuxSeries a = PuiseuxSeries()) {
    return std::make_shared<const PuiseuxRing>(std::move(alpha), L, std::move(a));
  }

  const SkewContext& context() const { return ctx_; }
  const Alpha& alpha() const { return ctx_.alpha; }
  std::int64_t L() const { return ctx_.L; }
  const PuiseuxSeries& a() const { return ctx_.a; }
  const BigComplex& alpha_eff() const { return alpha_eff_; }
  bool alpha_eff_is_one() const { return ctx_.alpha.is_one(); }
  std::int64_t uniformizers_per_x() const { return ctx_.L; }

  Elem zero() const { return Elem(); }
  Elem one() const { return Elem(1); }
  Elem lift(const BigComplex& c) const { return Elem(c); }
  bool is_zero(const Elem& e) const { return e.is_zero(); }
  bool is_one(const Elem& e) const;
  bool has_delta() const { return ctx_.has_delta(); }

  Elem sigma(const Elem& e) const;
  Elem sigma_pow(const Elem& e, long q) const;
  Elem delta(const Elem& e) const;

  Valuation ord(const Elem& e) const { return e.ord(); }
  // Order in units of pi, rounded up; empty for the zero series.
  std::optional<std::int64_t> ord_units(const Elem& e) const;
  BigComplex residue(const Elem& e) const;

  Elem left_mul_uniformizer(const Elem& e, long n) const { return e.shifted(Rational(n, ctx_.L)); }
  Elem left_div_uniformizer(const Elem& e, long n) const { return e.shifted(Rational(-n, ctx_.L)); }
  Elem uniformizer_pow(long n) const { return Elem::x_power(Rational(n, ctx_.L)); }
  Elem truncate_units(const Elem& e, long n) const { return e.truncated(Rational(n, ctx_.L)); }
  // Known precision in units of pi, rounded down; empty for exact series.
  std::optional<std::int64_t> precision_units(const Elem& e) const;

  // Conjugation by pi fixes coefficients and sends t to
  // alpha_eff^(-n) t + a (alpha_eff^(-n) - 1).
  Elem phi(const Elem& e, long) const { return e; }
  std::pair<Elem, Elem> phi_t(long n) const;

  TMap tmap() const;
  ResiduePoly twist_residue(const ResiduePoly& p, long n) const { return skewnp::twist_residue(p, n, tmap()); }
  TwistCheck twist_check(const ResiduePoly& g, const ResiduePoly& h, const std::optional<BigReal>& tol = std::nullopt) const;

  BigReal deviation(const Elem& a, const Elem& b, const Valuation& upto) const {
    return max_coefficient_deviation(a, b, upto);
  }
  bool same(const PuiseuxRing& o) const;
  std::string describe() const;

private:
  SkewContext ctx_;
  BigComplex alpha_eff_;
};

using PuiseuxPoly = SkewPoly<PuiseuxRing>;
using PuiseuxRingPtr = std::shared_ptr<const PuiseuxRing>;

// Element sum u_k x^k + O(x^trunc) of C[[x, rho]] with x u = rho(u) x,
// rho the complex conjugation.
class SkewSeries {
public:
  SkewSeries() = default;
  SkewSeries(const BigComplex& c);  // NOLINT
  SkewSeries(long c) : SkewSeries(BigComplex(c)) {}  // NOLINT
  SkewSeries(std::vector<BigComplex> u, std::int64_t trunc = kExact);

  const std::vector<BigComplex>& coeffs() const { return u_; }
  std::int64_t trunc() const { return trunc_; }
  BigComplex coeff(std::int64_t k) const;
  bool is_zero() const { return u_.empty(); }
  std::optional<std::int64_t> ord() const;

  SkewSeries operator-() const;
  friend SkewSeries operator+(const SkewSeries& a, const SkewSeries& b);
  friend SkewSeries operator-(const SkewSeries& a, const SkewSeries& b);
  // (sum u_i x^i)(sum v_j x^j) = sum_k (sum_(i+j=k) u_i rho^i(v_j)) x^k
  friend SkewSeries operator*(const SkewSeries& a, const SkewSeries& b);

  // rho^n applied to every coefficient.
  SkewSeries conj_pow(long n) const;
  SkewSeries shifted(long n) const;
  SkewSeries truncated(std::int64_t n) const;

private:
  void normalize();
  std::vector<BigComplex> u_;
  std::int64_t trunc_ = kExact;
};

// C[[x, rho]] as the coefficient ring of a polynomial ring with central t.
class SkewSeriesRing {
public:
  using Elem = SkewSeries;
  static std::shared_ptr<const SkewSeriesRing> make() { return std::make_shared<const SkewSeriesRing>(); }

  std::int64_t uniformizers_per_x() const { return 1; }
  Elem zero() const { return Elem(); }
  Elem one() const { return Elem(1); }
  Elem lift(const BigComplex& c) const { return Elem(c); }
  bool is_zero(const Elem& e) const { return e.is_zero(); }
  bool is_one(const Elem& e) const;
  bool has_delta() const { return false; }
  Elem sigma(const Elem& e) const { return e; }
  Elem delta(const Elem&) const { return Elem(); }

  Valuation ord(const Elem& e) const;
  std::optional<std::int64_t> ord_units(const Elem& e) const { return e.ord(); }
  BigComplex residue(const Elem& e) const { return e.coeff(0); }

  // x^n u = rho^n(u) x^n
  Elem left_mul_uniformizer(const Elem& e, long n) const { return e.conj_pow(n).shifted(n); }
  Elem left_div_uniformizer(const Elem& e, long n) const { return e.shifted(-n).conj_pow(n); }
  Elem uniformizer_pow(long n) const;
  Elem truncate_units(const Elem& e, long n) const { return e.truncated(n); }
  std::optional<std::int64_t> precision_units(const Elem& e) const {
    if (e.trunc() == kExact) return std::nullopt;
    return e.trunc();
  }

  // x u x^(-1) = rho(u); t is central.
  Elem phi(const Elem& e, long n) const { return e.conj_pow(n); }
  std::pair<Elem, Elem> phi_t(long) const { return {Elem(), Elem(1)}; }
  // Period of the twist on residues.
  static constexpr long kTwistPeriod = 2;
  ResiduePoly twist_residue(const ResiduePoly& p, long n) const;
  TwistCheck twist_check(const ResiduePoly& g, const ResiduePoly& h, const std::optional<BigReal>& tol = std::nullopt) const;

  BigReal deviation(const Elem& a, const Elem& b, const Valuation& upto) const;
  bool same(const SkewSeriesRing&) const { return true; }
  std::string describe() const { return "C[[x,rho]]"; }
};

using SkewSeriesPoly = SkewPoly<SkewSeriesRing>;

}  // namespace skewnp
