#include "skewnp/puiseux.hpp"

#include <algorithm>
#include <numeric>

#include "skewnp/errors.hpp"

namespace skewnp {

const Rational& Valuation::value() const {
  if (!value_) throw DomainError("valuation is infinite");
  return *value_;
}

std::strong_ordering operator<=>(const Valuation& a, const Valuation& b) {
  if (a.is_infinite() || b.is_infinite()) {
    if (a.is_infinite() && b.is_infinite()) return std::strong_ordering::equal;
    return a.is_infinite() ? std::strong_ordering::greater : std::strong_ordering::less;
  }
  if (*a.value_ < *b.value_) return std::strong_ordering::less;
  if (*a.value_ > *b.value_) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Valuation operator+(const Valuation& a, const Valuation& b) {
  if (a.is_infinite() || b.is_infinite()) return Valuation::infinity();
  return Valuation(*a.value_ + *b.value_);
}

std::string Valuation::str() const { return value_ ? value_->str() : std::string("inf"); }

namespace {

std::int64_t sat_add(std::int64_t a, std::int64_t b) {
  if (a == kExact || b == kExact) return kExact;
  return a + b;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw DomainError("ramification index overflow");
  return r;
}

std::int64_t rational_units(const Rational& q, std::int64_t L) {
  Rational u = q * L;
  if (boost::multiprecision::denominator(u) != 1) throw InternalError("exponent not representable at ramification");
  return to_int64(boost::multiprecision::numerator(u));
}

std::int64_t denominator64(const Rational& q) { return to_int64(boost::multiprecision::denominator(q)); }

}  // namespace

std::int64_t lcm_ramification(std::int64_t a, std::int64_t b) {
  std::int64_t g = std::gcd(a, b);
  return checked_mul(a / g, b);
}

PuiseuxSeries::PuiseuxSeries(const BigComplex& c) {
  if (!c.is_zero()) terms_.push_back({0, c});
  normalize();
}

PuiseuxSeries::PuiseuxSeries(long c) : PuiseuxSeries(BigComplex(c)) {}

PuiseuxSeries PuiseuxSeries::monomial(const BigComplex& c, const Rational& exponent) {
  PuiseuxSeries r;
  r.ram_ = denominator64(exponent);
  if (!c.is_zero()) r.terms_.push_back({rational_units(exponent, r.ram_), c});
  r.normalize();
  return r;
}

PuiseuxSeries PuiseuxSeries::from_terms(std::int64_t ramification, std::vector<Term> terms, std::int64_t trunc_units) {
  if (ramification < 1) throw DomainError("ramification must be positive");
  PuiseuxSeries r;
  r.ram_ = ramification;
  r.terms_ = std::move(terms);
  r.trunc_ = trunc_units;
  r.normalize();
  return r;
}

PuiseuxSeries PuiseuxSeries::big_o(const Rational& order) {
  PuiseuxSeries r;
  r.ram_ = denominator64(order);
  r.trunc_ = rational_units(order, r.ram_);
  return r;
}

void PuiseuxSeries::normalize() {
  std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.k < b.k; });
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (auto& t : terms_) {
    if (t.k >= trunc_) break;
    if (!out.empty() && out.back().k == t.k) {
      out.back().c += t.c;
    } else {
      out.push_back(std::move(t));
    }
  }
  std::erase_if(out, [](const Term& t) { return t.c.is_zero() || t.c.negligible(); });
  terms_ = std::move(out);
}

Valuation PuiseuxSeries::precision() const {
  if (trunc_ == kExact) return Valuation::infinity();
  return Valuation(Rational(trunc_, ram_));
}

Valuation PuiseuxSeries::ord() const {
  if (terms_.empty()) return Valuation::infinity();
  return Valuation(Rational(terms_.front().k, ram_));
}

std::optional<std::int64_t> PuiseuxSeries::ord_units() const {
  if (terms_.empty()) return std::nullopt;
  return terms_.front().k;
}

BigComplex PuiseuxSeries::coeff_units(std::int64_t k) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), k, [](const Term& t, std::int64_t v) { return t.k < v; });
  if (it != terms_.end() && it->k == k) return it->c;
  return BigComplex(0);
}

BigComplex PuiseuxSeries::coeff(const Rational& exponent) const {
  Rational u = exponent * ram_;
  if (boost::multiprecision::denominator(u) != 1) return BigComplex(0);
  return coeff_units(to_int64(boost::multiprecision::numerator(u)));
}

BigComplex PuiseuxSeries::constant_term() const { return coeff_units(0); }

const BigComplex& PuiseuxSeries::leading_coefficient() const {
  if (terms_.empty()) throw DomainError("zero series has no leading coefficient");
  return terms_.front().c;
}

std::int64_t PuiseuxSeries::minimal_ramification() const {
  std::int64_t g = trunc_ == kExact ? 0 : trunc_;
  for (const auto& t : terms_) g = std::gcd(g, t.k);
  if (g == 0) return 1;
  g = std::gcd(g, ram_);
  return ram_ / g;
}

PuiseuxSeries PuiseuxSeries::with_ramification(std::int64_t ramification) const {
  if (ramification == ram_) return *this;
  if (ramification % ram_ == 0) return reembed(*this, ramification / ram_);
  const std::int64_t m = minimal_ramification();
  if (ramification % m != 0) throw DomainError("series not representable at the requested ramification");
  PuiseuxSeries r = compact();
  return reembed(r, ramification / r.ram_);
}

PuiseuxSeries PuiseuxSeries::compact() const {
  const std::int64_t m = minimal_ramification();
  if (m == ram_) return *this;
  const std::int64_t f = ram_ / m;
  PuiseuxSeries r;
  r.ram_ = m;
  r.trunc_ = trunc_ == kExact ? kExact : trunc_ / f;
  r.terms_ = terms_;
  for (auto& t : r.terms_) t.k /= f;
  return r;
}

PuiseuxSeries PuiseuxSeries::truncated(const Rational& order) const {
  std::int64_t L = lcm_ramification(ram_, denominator64(order));
  PuiseuxSeries r = with_ramification(L);
  return r.truncated_units(rational_units(order, L));
}

PuiseuxSeries PuiseuxSeries::truncated_units(std::int64_t t) const {
  PuiseuxSeries r = *this;
  if (t < r.trunc_) {
    r.trunc_ = t;
    r.normalize();
  }
  return r;
}

PuiseuxSeries PuiseuxSeries::shifted(const Rational& e) const {
  std::int64_t L = lcm_ramification(ram_, denominator64(e));
  PuiseuxSeries r = with_ramification(L);
  std::int64_t s = rational_units(e, L);
  for (auto& t : r.terms_) t.k += s;
  r.trunc_ = sat_add(r.trunc_, s);
  return r;
}

PuiseuxSeries PuiseuxSeries::scaled(const BigComplex& s) const {
  PuiseuxSeries r = *this;
  for (auto& t : r.terms_) t.c *= s;
  r.normalize();
  return r;
}

PuiseuxSeries PuiseuxSeries::conj() const {
  PuiseuxSeries r = *this;
  for (auto& t : r.terms_) t.c = t.c.conj();
  return r;
}

PuiseuxSeries PuiseuxSeries::operator-() const {
  PuiseuxSeries r = *this;
  for (auto& t : r.terms_) t.c = -t.c;
  return r;
}

PuiseuxSeries add_impl(const PuiseuxSeries& a, const PuiseuxSeries& b, bool subtract) {
  const std::int64_t L = lcm_ramification(a.ram_, b.ram_);
  const PuiseuxSeries& aa = a.ram_ == L ? a : a.with_ramification(L);
  PuiseuxSeries bb_store;
  const PuiseuxSeries* bp = &b;
  if (b.ram_ != L) {
    bb_store = b.with_ramification(L);
    bp = &bb_store;
  }
  const PuiseuxSeries& bb = *bp;
  PuiseuxSeries r;
  r.ram_ = L;
  r.trunc_ = std::min(aa.trunc_, bb.trunc_);
  r.terms_.reserve(aa.terms_.size() + bb.terms_.size());
  std::size_t i = 0, j = 0;
  while (i < aa.terms_.size() || j < bb.terms_.size()) {
    if (j == bb.terms_.size() || (i < aa.terms_.size() && aa.terms_[i].k < bb.terms_[j].k)) {
      r.terms_.push_back(aa.terms_[i++]);
    } else if (i == aa.terms_.size() || bb.terms_[j].k < aa.terms_[i].k) {
      r.terms_.push_back({bb.terms_[j].k, subtract ? -bb.terms_[j].c : bb.terms_[j].c});
      ++j;
    } else {
      BigComplex c = aa.terms_[i].c;
      if (subtract) c -= bb.terms_[j].c; else c += bb.terms_[j].c;
      r.terms_.push_back({aa.terms_[i].k, std::move(c)});
      ++i;
      ++j;
    }
  }
  r.normalize();
  return r;
}

PuiseuxSeries& PuiseuxSeries::operator+=(const PuiseuxSeries& o) { return *this = add_impl(*this, o, false); }
PuiseuxSeries& PuiseuxSeries::operator-=(const PuiseuxSeries& o) { return *this = add_impl(*this, o, true); }
PuiseuxSeries& PuiseuxSeries::operator*=(const PuiseuxSeries& o) { return *this = series_mul(*this, o); }
PuiseuxSeries operator*(const PuiseuxSeries& a, const PuiseuxSeries& b) { return series_mul(a, b); }

PuiseuxSeries series_add(const PuiseuxSeries& a, const PuiseuxSeries& b) { return a + b; }

namespace {

// Lower bound on the order, in units: the first known term or the truncation.
std::int64_t val_units(const PuiseuxSeries& f) {
  auto o = f.ord_units();
  return o ? std::min(*o, f.trunc_units()) : f.trunc_units();
}

struct MpfrTemp {
  mpfr_t v;
  MpfrTemp() { mpfr_init2(v, static_cast<mpfr_prec_t>(working_bits())); }
  ~MpfrTemp() { mpfr_clear(v); }
  MpfrTemp(const MpfrTemp&) = delete;
  MpfrTemp& operator=(const MpfrTemp&) = delete;
};

}  // namespace

PuiseuxSeries series_mul(const PuiseuxSeries& a0, const PuiseuxSeries& b0) {
  const std::int64_t L = lcm_ramification(a0.ramification(), b0.ramification());
  const PuiseuxSeries a = a0.with_ramification(L);
  const PuiseuxSeries b = b0.with_ramification(L);
  const std::int64_t T = std::min(sat_add(a.trunc_units(), val_units(b)), sat_add(b.trunc_units(), val_units(a)));
  if (a.is_zero() || b.is_zero()) {
    PuiseuxSeries z;
    if (T != kExact) z = PuiseuxSeries::from_terms(L, {}, T);
    else z = PuiseuxSeries::from_terms(L, {});
    return z;
  }
  const auto& at = a.terms();
  const auto& bt = b.terms();
  const std::int64_t lo = at.front().k + bt.front().k;
  std::int64_t hi = at.back().k + bt.back().k + 1;
  if (T != kExact) hi = std::min(hi, T);
  if (hi <= lo) return PuiseuxSeries::from_terms(L, {}, T);
  const auto width = static_cast<std::size_t>(hi - lo);
  std::vector<BigComplex> acc(width);
  std::vector<bool> touched(width, false);
  MpfrTemp tmp;
  for (const auto& x : at) {
    if (x.k + bt.front().k >= hi) break;
    const bool xr = x.c.imag() == 0;
    for (const auto& y : bt) {
      const std::int64_t k = x.k + y.k;
      if (k >= hi) break;
      auto& c = acc[static_cast<std::size_t>(k - lo)];
      touched[static_cast<std::size_t>(k - lo)] = true;
      auto* cre = c.real().backend().data();
      auto* cim = c.imag().backend().data();
      const auto* xre = x.c.real().backend().data();
      const auto* xim = x.c.imag().backend().data();
      const auto* yre = y.c.real().backend().data();
      const auto* yim = y.c.imag().backend().data();
      if (xr && y.c.imag() == 0) {
        mpfr_fma(cre, xre, yre, cre, MPFR_RNDN);
        continue;
      }
      mpfr_fma(cre, xre, yre, cre, MPFR_RNDN);
      mpfr_mul(tmp.v, xim, yim, MPFR_RNDN);
      mpfr_sub(cre, cre, tmp.v, MPFR_RNDN);
      mpfr_fma(cim, xre, yim, cim, MPFR_RNDN);
      mpfr_fma(cim, xim, yre, cim, MPFR_RNDN);
    }
  }
  std::vector<PuiseuxSeries::Term> terms;
  terms.reserve(width);
  for (std::size_t i = 0; i < width; ++i)
    if (touched[i]) terms.push_back({lo + static_cast<std::int64_t>(i), std::move(acc[i])});
  return PuiseuxSeries::from_terms(L, std::move(terms), T);
}

PuiseuxSeries series_inv(const PuiseuxSeries& f, const Rational& order) {
  if (f.is_zero()) throw ZeroDivision("inverse of a numerically zero series");
  const std::int64_t L = lcm_ramification(f.ramification(), denominator64(order));
  const PuiseuxSeries g = f.with_ramification(L);
  const std::int64_t v = *g.ord_units();
  const BigComplex& c = g.leading_coefficient();
  const BigComplex cinv = BigComplex(1) / c;
  // An exact monomial inverts exactly.
  if (g.is_exact() && g.terms().size() == 1)
    return PuiseuxSeries::from_terms(L, {{-v, cinv}});
  std::int64_t T = rational_units(order, L);
  if (!g.is_exact()) T = std::min(T, g.trunc_units() - 2 * v);
  if (T <= -v) return PuiseuxSeries::from_terms(L, {}, T);
  const auto n = static_cast<std::size_t>(T + v);
  // Relative coefficients h_i = g_{v+i}.
  std::vector<BigComplex> h(n);
  for (const auto& t : g.terms()) {
    auto i = static_cast<std::size_t>(t.k - v);
    if (i < n) h[i] = t.c;
  }
  std::vector<BigComplex> r(n);
  r[0] = cinv;
  std::vector<std::size_t> nz;
  for (std::size_t i = 1; i < n; ++i)
    if (!h[i].is_zero()) nz.push_back(i);
  for (std::size_t j = 1; j < n; ++j) {
    BigComplex s;
    for (std::size_t i : nz) {
      if (i > j) break;
      s += h[i] * r[j - i];
    }
    r[j] = -(s * cinv);
  }
  std::vector<PuiseuxSeries::Term> terms;
  terms.reserve(n);
  for (std::size_t j = 0; j < n; ++j) terms.push_back({static_cast<std::int64_t>(j) - v, std::move(r[j])});
  return PuiseuxSeries::from_terms(L, std::move(terms), T);
}

PuiseuxSeries sigma_apply(const PuiseuxSeries& f, const Rational& q, const Alpha& alpha) {
  if (q == 0 || f.is_zero()) return f;
  if (alpha.is_exact() && *alpha.exact() == 1) return f;
  return sigma_with_multiplier(f, alpha.pow(q / f.ramification()));
}

PuiseuxSeries sigma_with_multiplier(const PuiseuxSeries& f, const BigComplex& base) {
  if (f.is_zero()) return f;
  const BigComplex base_inv = BigComplex(1) / base;
  // Terms are sorted; consecutive exponents reuse the previous power.
  std::int64_t cur_k = 0;
  BigComplex cur(1);
  bool have = false;
  return f.map_terms([&](std::int64_t k, const BigComplex& c) {
    if (!have || k - cur_k > 8 || k < cur_k) {
      cur = k >= 0 ? pow_int(base, k) : pow_int(base_inv, -k);
      cur_k = k;
      have = true;
    }
    while (cur_k < k) {
      cur *= base;
      ++cur_k;
    }
    return c * cur;
  });
}

PuiseuxSeries reembed(const PuiseuxSeries& f, std::int64_t k) {
  if (k < 1) throw DomainError("re-embedding factor must be positive");
  if (k == 1) return f;
  std::vector<PuiseuxSeries::Term> terms = f.terms();
  for (auto& t : terms) t.k = checked_mul(t.k, k);
  return PuiseuxSeries::from_terms(checked_mul(f.ramification(), k), std::move(terms),
                                   f.is_exact() ? kExact : checked_mul(f.trunc_units(), k));
}

PuiseuxSeries uniformize(const PuiseuxSeries& f, std::int64_t n) {
  if (n < 1) throw DomainError("uniformizer index must be positive");
  // exponent k/L becomes k n / L.
  const std::int64_t L = f.ramification();
  const std::int64_t g = std::gcd(L, n);
  std::vector<PuiseuxSeries::Term> terms = f.terms();
  for (auto& t : terms) t.k = checked_mul(t.k, n / g);
  return PuiseuxSeries::from_terms(L / g, std::move(terms), f.is_exact() ? kExact : checked_mul(f.trunc_units(), n / g));
}

PuiseuxSeries deuniformize(const PuiseuxSeries& f, std::int64_t n) {
  if (n < 1) throw DomainError("uniformizer index must be positive");
  std::vector<PuiseuxSeries::Term> terms = f.terms();
  return PuiseuxSeries::from_terms(checked_mul(f.ramification(), n), std::move(terms), f.trunc_units());
}

BigReal max_coefficient_deviation(const PuiseuxSeries& a0, const PuiseuxSeries& b0, const Valuation& upto) {
  const std::int64_t L = lcm_ramification(a0.ramification(), b0.ramification());
  const PuiseuxSeries a = a0.with_ramification(L);
  const PuiseuxSeries b = b0.with_ramification(L);
  std::int64_t limit = kExact;
  if (!upto.is_infinite()) {
    Rational u = upto.value() * L;
    limit = to_int64(rational_ceil(u));
  }
  BigReal worst(0);
  std::size_t i = 0, j = 0;
  const auto& at = a.terms();
  const auto& bt = b.terms();
  while (i < at.size() || j < bt.size()) {
    std::int64_t k;
    BigReal d;
    if (j == bt.size() || (i < at.size() && at[i].k < bt[j].k)) {
      k = at[i].k;
      d = at[i++].c.abs();
    } else if (i == at.size() || bt[j].k < at[i].k) {
      k = bt[j].k;
      d = bt[j++].c.abs();
    } else {
      k = at[i].k;
      d = (at[i++].c - bt[j++].c).abs();
    }
    if (k >= limit) break;
    if (d > worst) worst = d;
  }
  return worst;
}

BigReal max_coefficient_modulus(const PuiseuxSeries& a) {
  BigReal worst(0);
  for (const auto& t : a.terms()) {
    BigReal m = t.c.abs();
    if (m > worst) worst = m;
  }
  return worst;
}

PuiseuxSeries delta_apply(const SkewContext& ctx, const PuiseuxSeries& f) {
  if (!ctx.has_delta()) return PuiseuxSeries();
  return ctx.a * (sigma_apply(f, Rational(1), ctx.alpha) - f);
}

}  // namespace skewnp
