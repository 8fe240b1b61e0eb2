#include "skewnp/rings.hpp"

#include <algorithm>
#include <sstream>

#include "skewnp/errors.hpp"

namespace skewnp {

PuiseuxRing::PuiseuxRing(SkewContext ctx) : ctx_(std::move(ctx)), alpha_eff_(ctx_.alpha.pow(Rational(1, ctx_.L))) {
  if (ctx_.L < 1) throw DomainError("ramification must be positive");
}

bool PuiseuxRing::is_one(const Elem& e) const {
  const auto& t = e.terms();
  return t.size() == 1 && t.front().k == 0 && t.front().c == BigComplex(1);
}

PuiseuxRing::Elem PuiseuxRing::sigma(const Elem& e) const {
  if (e.is_zero()) return e;
  if (ctx_.alpha.is_exact() && *ctx_.alpha.exact() == 1) return e;
  const std::int64_t r = e.ramification();
  if (r == ctx_.L) return sigma_with_multiplier(e, alpha_eff_);
  if (ctx_.L % r == 0) return sigma_with_multiplier(e, pow_int(alpha_eff_, ctx_.L / r));
  return sigma_apply(e, Rational(1), ctx_.alpha);
}

PuiseuxRing::Elem PuiseuxRing::sigma_pow(const Elem& e, long q) const {
  if (q == 0 || e.is_zero()) return e;
  if (ctx_.alpha.is_exact() && *ctx_.alpha.exact() == 1) return e;
  const std::int64_t r = e.ramification();
  if (ctx_.L % r == 0) return sigma_with_multiplier(e, pow_int(alpha_eff_, q * (ctx_.L / r)));
  return sigma_apply(e, Rational(q), ctx_.alpha);
}

PuiseuxRing::Elem PuiseuxRing::delta(const Elem& e) const {
  if (!ctx_.has_delta() || e.is_zero()) return Elem();
  return ctx_.a * (sigma(e) - e);
}

std::optional<std::int64_t> PuiseuxRing::ord_units(const Elem& e) const {
  if (e.is_zero()) return std::nullopt;
  return to_int64(rational_ceil(e.ord().value() * ctx_.L));
}

std::optional<std::int64_t> PuiseuxRing::precision_units(const Elem& e) const {
  if (e.is_exact()) return std::nullopt;
  return to_int64(rational_floor(e.precision().value() * ctx_.L));
}

BigComplex PuiseuxRing::residue(const Elem& e) const {
  if (!e.is_zero() && e.ord() < Valuation(0)) throw DomainError("residue of a coefficient with negative order");
  if (!e.is_exact() && e.trunc_units() <= 0) throw PrecisionExhausted("residue of a series known only below order 0");
  return e.constant_term();
}

std::pair<PuiseuxRing::Elem, PuiseuxRing::Elem> PuiseuxRing::phi_t(long n) const {
  if (n == 0) return {Elem(), Elem(1)};
  const BigComplex l = pow_int(alpha_eff_, -n);
  Elem c0 = ctx_.has_delta() ? ctx_.a.scaled(l - BigComplex(1)) : Elem();
  return {std::move(c0), Elem(l)};
}

TMap PuiseuxRing::tmap() const { return TMap{alpha_eff_, ctx_.a.constant_term(), alpha_eff_is_one()}; }

TwistCheck PuiseuxRing::twist_check(const ResiduePoly& g, const ResiduePoly& h, const std::optional<BigReal>& tol) const {
  return twist_coprime_check_affine(g, h, tmap(), tol ? *tol : default_orbit_tol());
}

bool PuiseuxRing::same(const PuiseuxRing& o) const {
  // The ramification only fixes the uniformizer, not the ring.
  if (this == &o) return true;
  if (ctx_.alpha.is_exact() != o.ctx_.alpha.is_exact()) return false;
  if (ctx_.alpha.is_exact() ? *ctx_.alpha.exact() != *o.ctx_.alpha.exact() : !(ctx_.alpha.value() == o.ctx_.alpha.value()))
    return false;
  // Truncation tails on a come from how it was computed; compare known terms.
  return max_coefficient_deviation(ctx_.a, o.ctx_.a, min(ctx_.a.precision(), o.ctx_.a.precision())) == 0;
}

std::string PuiseuxRing::describe() const {
  std::ostringstream os;
  os << "F[t,sigma";
  if (ctx_.has_delta()) os << ",delta_a";
  os << "] alpha=" << ctx_.alpha.str() << " L=" << ctx_.L;
  return os.str();
}

// --- C[[x, rho]] -----------------------------------------------------------

SkewSeries::SkewSeries(const BigComplex& c) : u_{c} { normalize(); }

SkewSeries::SkewSeries(std::vector<BigComplex> u, std::int64_t trunc) : u_(std::move(u)), trunc_(trunc) {
  if (trunc_ < 0) throw DomainError("truncation of a power series must be non-negative");
  normalize();
}

void SkewSeries::normalize() {
  if (trunc_ != kExact && static_cast<std::int64_t>(u_.size()) > trunc_) u_.resize(static_cast<std::size_t>(trunc_));
  for (auto& c : u_)
    if (c.negligible()) c = BigComplex(0);
  while (!u_.empty() && u_.back().is_zero()) u_.pop_back();
}

BigComplex SkewSeries::coeff(std::int64_t k) const {
  if (k < 0 || k >= static_cast<std::int64_t>(u_.size())) return BigComplex(0);
  return u_[static_cast<std::size_t>(k)];
}

std::optional<std::int64_t> SkewSeries::ord() const {
  for (std::size_t k = 0; k < u_.size(); ++k)
    if (!u_[k].is_zero()) return static_cast<std::int64_t>(k);
  return std::nullopt;
}

SkewSeries SkewSeries::operator-() const {
  SkewSeries r = *this;
  for (auto& c : r.u_) c = -c;
  return r;
}

SkewSeries operator+(const SkewSeries& a, const SkewSeries& b) {
  std::vector<BigComplex> r(std::max(a.u_.size(), b.u_.size()));
  for (std::size_t k = 0; k < r.size(); ++k) r[k] = a.coeff(static_cast<std::int64_t>(k)) + b.coeff(static_cast<std::int64_t>(k));
  return SkewSeries(std::move(r), std::min(a.trunc_, b.trunc_));
}

SkewSeries operator-(const SkewSeries& a, const SkewSeries& b) { return a + (-b); }

namespace {

std::int64_t val_or_trunc(const SkewSeries& s) {
  auto o = s.ord();
  return o ? std::min(*o, s.trunc()) : s.trunc();
}

std::int64_t sat_add(std::int64_t a, std::int64_t b) { return (a == kExact || b == kExact) ? kExact : a + b; }

}  // namespace

SkewSeries operator*(const SkewSeries& a, const SkewSeries& b) {
  const std::int64_t T = std::min(sat_add(a.trunc_, val_or_trunc(b)), sat_add(b.trunc_, val_or_trunc(a)));
  if (a.u_.empty() || b.u_.empty()) return SkewSeries({}, T == kExact ? kExact : std::max<std::int64_t>(T, 0));
  std::size_t n = a.u_.size() + b.u_.size() - 1;
  if (T != kExact) n = std::min(n, static_cast<std::size_t>(std::max<std::int64_t>(T, 0)));
  std::vector<BigComplex> r(n);
  for (std::size_t i = 0; i < a.u_.size() && i < n; ++i) {
    if (a.u_[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.u_.size() && i + j < n; ++j) {
      if (b.u_[j].is_zero()) continue;
      r[i + j] += a.u_[i] * (i % 2 == 1 ? b.u_[j].conj() : b.u_[j]);
    }
  }
  return SkewSeries(std::move(r), T);
}

SkewSeries SkewSeries::conj_pow(long n) const {
  if (n % 2 == 0) return *this;
  SkewSeries r = *this;
  for (auto& c : r.u_) c = c.conj();
  return r;
}

SkewSeries SkewSeries::shifted(long n) const {
  if (n == 0) return *this;
  std::vector<BigComplex> r;
  if (n > 0) {
    r.assign(static_cast<std::size_t>(n), BigComplex(0));
    r.insert(r.end(), u_.begin(), u_.end());
  } else {
    const auto m = static_cast<std::size_t>(-n);
    for (std::size_t k = 0; k < std::min(m, u_.size()); ++k)
      if (!u_[k].is_zero()) throw DomainError("series is not divisible by the requested power of x");
    if (m < u_.size()) r.assign(u_.begin() + static_cast<long>(m), u_.end());
  }
  std::int64_t t = trunc_ == kExact ? kExact : trunc_ + n;
  if (t != kExact && t < 0) throw PrecisionExhausted("shift beyond the known precision");
  return SkewSeries(std::move(r), t);
}

SkewSeries SkewSeries::truncated(std::int64_t n) const {
  if (n >= trunc_) return *this;
  return SkewSeries(u_, std::max<std::int64_t>(n, 0));
}

bool SkewSeriesRing::is_one(const Elem& e) const {
  return e.coeffs().size() == 1 && e.coeffs().front() == BigComplex(1);
}

Valuation SkewSeriesRing::ord(const Elem& e) const {
  auto o = e.ord();
  if (!o) return Valuation::infinity();
  return Valuation(Rational(*o));
}

SkewSeriesRing::Elem SkewSeriesRing::uniformizer_pow(long n) const {
  if (n < 0) throw DomainError("negative powers of x are outside C[[x,rho]]");
  std::vector<BigComplex> u(static_cast<std::size_t>(n) + 1);
  u.back() = BigComplex(1);
  return Elem(std::move(u));
}

ResiduePoly SkewSeriesRing::twist_residue(const ResiduePoly& p, long n) const {
  if (n % 2 == 0) return p;
  std::vector<BigComplex> c = p.coeffs();
  for (auto& x : c) x = x.conj();
  return ResiduePoly(std::move(c));
}

TwistCheck SkewSeriesRing::twist_check(const ResiduePoly& g, const ResiduePoly& h, const std::optional<BigReal>& tol) const {
  return twist_coprime_check_periodic(
      g, h, kTwistPeriod, [this](const ResiduePoly& p, long n) { return twist_residue(p, n); }, tol);
}

BigReal SkewSeriesRing::deviation(const Elem& a, const Elem& b, const Valuation& upto) const {
  std::size_t n = std::max(a.coeffs().size(), b.coeffs().size());
  if (!upto.is_infinite()) n = std::min(n, static_cast<std::size_t>(std::max<long>(0, rational_ceil(upto.value()).convert_to<long>())));
  BigReal worst(0);
  for (std::size_t k = 0; k < n; ++k) {
    BigReal d = (a.coeff(static_cast<std::int64_t>(k)) - b.coeff(static_cast<std::int64_t>(k))).abs();
    if (d > worst) worst = d;
  }
  return worst;
}

}  // namespace skewnp
