#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "skewnp/scalar.hpp"

namespace skewnp {

// A rational number or +infinity; the order of a series or polynomial.
class Valuation {
public:
  Valuation() = default;  // +infinity
  Valuation(Rational v) : value_(std::move(v)) {}  // NOLINT
  Valuation(long v) : value_(Rational(v)) {}       // NOLINT
  static Valuation infinity() { return Valuation(); }

  bool is_infinite() const { return !value_.has_value(); }
  const Rational& value() const;

  friend bool operator==(const Valuation& a, const Valuation& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Valuation& a, const Valuation& b);
  friend Valuation operator+(const Valuation& a, const Valuation& b);
  friend Valuation min(const Valuation& a, const Valuation& b) { return b < a ? b : a; }

  std::string str() const;

private:
  std::optional<Rational> value_;
};

// Truncation sentinel: the series is exact (no O(x^T) tail).
inline constexpr std::int64_t kExact = std::numeric_limits<std::int64_t>::max();

// Truncated Puiseux series sum c_k x^(k/L) + O(x^(T/L)).
//
// Terms are kept sorted by k, with k < T and no (numerically) zero
// coefficient. Binary operations bring both operands to the least common
// ramification and track the tightest provable truncation.
class PuiseuxSeries {
public:
  struct Term {
    std::int64_t k;
    BigComplex c;
  };

  PuiseuxSeries() = default;
  PuiseuxSeries(const BigComplex& c);  // NOLINT: constants embed implicitly
  PuiseuxSeries(long c);               // NOLINT

  static PuiseuxSeries monomial(const BigComplex& c, const Rational& exponent);
  static PuiseuxSeries x_power(const Rational& exponent) { return monomial(BigComplex(1), exponent); }
  static PuiseuxSeries from_terms(std::int64_t ramification, std::vector<Term> terms,
                                  std::int64_t trunc_units = kExact);
  // The zero series known modulo x^order.
  static PuiseuxSeries big_o(const Rational& order);

  std::int64_t ramification() const { return ram_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_exact() const { return trunc_ == kExact; }
  std::int64_t trunc_units() const { return trunc_; }
  // Truncation order in units of x; infinite for exact series.
  Valuation precision() const;
  bool is_zero() const { return terms_.empty(); }

  Valuation ord() const;
  std::optional<std::int64_t> ord_units() const;
  // min(ord, precision): a lower bound on the true order.
  Valuation valuation_bound() const { return min(ord(), precision()); }

  BigComplex coeff_units(std::int64_t k) const;
  BigComplex coeff(const Rational& exponent) const;
  BigComplex constant_term() const;
  const BigComplex& leading_coefficient() const;

  std::int64_t minimal_ramification() const;
  PuiseuxSeries with_ramification(std::int64_t ramification) const;
  PuiseuxSeries compact() const;

  PuiseuxSeries truncated(const Rational& order) const;
  PuiseuxSeries truncated_units(std::int64_t t) const;
  PuiseuxSeries shifted(const Rational& e) const;
  PuiseuxSeries scaled(const BigComplex& s) const;
  PuiseuxSeries conj() const;

  PuiseuxSeries operator-() const;
  PuiseuxSeries& operator+=(const PuiseuxSeries& o);
  PuiseuxSeries& operator-=(const PuiseuxSeries& o);
  PuiseuxSeries& operator*=(const PuiseuxSeries& o);
  friend PuiseuxSeries operator+(PuiseuxSeries a, const PuiseuxSeries& b) { return a += b; }
  friend PuiseuxSeries operator-(PuiseuxSeries a, const PuiseuxSeries& b) { return a -= b; }
  friend PuiseuxSeries operator*(const PuiseuxSeries& a, const PuiseuxSeries& b);

  // Multiplier of each term: c x^(k/L) -> m(k) c x^(k/L).
  template <class F>
  PuiseuxSeries map_terms(F&& multiplier) const {
    PuiseuxSeries r = *this;
    for (auto& t : r.terms_) t.c = multiplier(t.k, t.c);
    r.normalize();
    return r;
  }

private:
  void normalize();
  friend PuiseuxSeries add_impl(const PuiseuxSeries& a, const PuiseuxSeries& b, bool subtract);

  std::int64_t ram_ = 1;
  std::vector<Term> terms_;
  std::int64_t trunc_ = kExact;
};

inline Valuation ord(const PuiseuxSeries& f) { return f.ord(); }

PuiseuxSeries series_add(const PuiseuxSeries& a, const PuiseuxSeries& b);
PuiseuxSeries series_mul(const PuiseuxSeries& a, const PuiseuxSeries& b);
// Inverse known modulo x^order (or less when f lacks the precision).
PuiseuxSeries series_inv(const PuiseuxSeries& f, const Rational& order);

// sigma^q: c x^(k/L) -> c alpha^(q k / L) x^(k/L).
PuiseuxSeries sigma_apply(const PuiseuxSeries& f, const Rational& q, const Alpha& alpha);
// c x^(k/L) -> c m^k x^(k/L), m the multiplier of x^(1/L).
PuiseuxSeries sigma_with_multiplier(const PuiseuxSeries& f, const BigComplex& m);

// Same series re-indexed at ramification k * L.
PuiseuxSeries reembed(const PuiseuxSeries& f, std::int64_t k);

// The ring isomorphism C[[x^(1/n)]] -> C[[x]], sum a_i x^(i/n) -> sum a_i x^i.
PuiseuxSeries uniformize(const PuiseuxSeries& f, std::int64_t n);
// Inverse of uniformize.
PuiseuxSeries deuniformize(const PuiseuxSeries& f, std::int64_t n);

std::int64_t lcm_ramification(std::int64_t a, std::int64_t b);

// max |a_k - b_k| over exponents below `upto`, without zero thresholding.
BigReal max_coefficient_deviation(const PuiseuxSeries& a, const PuiseuxSeries& b, const Valuation& upto);
BigReal max_coefficient_modulus(const PuiseuxSeries& a);

// Parameters of F[t, sigma, delta_a]: sigma(x) = alpha x and
// delta_a(b) = a (sigma(b) - b). L is the ramification of the working
// subring C[[x^(1/L)]].
struct SkewContext {
  Alpha alpha;
  std::int64_t L = 1;
  PuiseuxSeries a;

  explicit SkewContext(Alpha al, std::int64_t ram = 1, PuiseuxSeries delta_param = PuiseuxSeries())
      : alpha(std::move(al)), L(ram), a(std::move(delta_param)) {}

  bool has_delta() const { return !a.is_zero(); }
  // Multiplier of sigma on the uniformizer x^(1/L).
  BigComplex alpha_eff() const { return alpha.pow(Rational(1, L)); }
};

PuiseuxSeries delta_apply(const SkewContext& ctx, const PuiseuxSeries& f);

}  // namespace skewnp
