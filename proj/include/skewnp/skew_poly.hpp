#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "skewnp/errors.hpp"
#include "skewnp/puiseux.hpp"
#include "skewnp/residue.hpp"

namespace skewnp {

// Polynomial sum c_i t^i over a coefficient ring with the multiplication
// rule t c = sigma(c) t + delta(c). Coefficients sit on the left of t.
//
// The ring type supplies zero(), one(), sigma(), delta(), has_delta(),
// is_zero() and same(); the reduction, twist and uniformizer operations
// are used only by the algorithms that need them.
template <class Ring>
class SkewPoly {
public:
  using Elem = typename Ring::Elem;

  SkewPoly() = default;
  SkewPoly(std::shared_ptr<const Ring> ring, std::vector<Elem> coeffs) : ring_(std::move(ring)), c_(std::move(coeffs)) {
    trim();
  }

  static SkewPoly zero(std::shared_ptr<const Ring> ring) { return SkewPoly(std::move(ring), {}); }
  static SkewPoly constant(std::shared_ptr<const Ring> ring, Elem c) { return SkewPoly(std::move(ring), {std::move(c)}); }
  static SkewPoly one(std::shared_ptr<const Ring> ring) {
    auto e = ring->one();
    return constant(std::move(ring), std::move(e));
  }
  static SkewPoly t_power(std::shared_ptr<const Ring> ring, int n) {
    std::vector<Elem> c(static_cast<std::size_t>(n) + 1, ring->zero());
    c.back() = ring->one();
    return SkewPoly(std::move(ring), std::move(c));
  }
  // t - c
  static SkewPoly linear(std::shared_ptr<const Ring> ring, const Elem& c) {
    auto one = ring->one();
    return SkewPoly(std::move(ring), {-c, std::move(one)});
  }

  const Ring& ring() const { return *ring_; }
  const std::shared_ptr<const Ring>& ring_ptr() const { return ring_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<Elem>& coeffs() const { return c_; }
  std::vector<Elem>& mutable_coeffs() { return c_; }
  Elem coeff(int i) const {
    if (i < 0 || i > degree()) return ring_->zero();
    return c_[static_cast<std::size_t>(i)];
  }
  const Elem& leading() const {
    if (c_.empty()) throw DomainError("zero polynomial has no leading coefficient");
    return c_.back();
  }
  bool is_monic() const { return !c_.empty() && ring_->is_one(c_.back()); }

  SkewPoly operator-() const {
    SkewPoly r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
  }
  friend SkewPoly operator+(const SkewPoly& a, const SkewPoly& b) { return combine(a, b, false); }
  friend SkewPoly operator-(const SkewPoly& a, const SkewPoly& b) { return combine(a, b, true); }
  friend SkewPoly operator*(const SkewPoly& a, const SkewPoly& b) { return poly_mul(a, b); }

  void trim() {
    while (!c_.empty() && ring_->is_zero(c_.back())) c_.pop_back();
  }

private:
  static SkewPoly combine(const SkewPoly& a, const SkewPoly& b, bool subtract) {
    check_same(a, b);
    const auto& ring = a.ring_ ? a.ring_ : b.ring_;
    std::vector<Elem> r(std::max(a.c_.size(), b.c_.size()), ring->zero());
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i < a.c_.size()) r[i] = a.c_[i];
      if (i < b.c_.size()) r[i] = subtract ? r[i] - b.c_[i] : r[i] + b.c_[i];
    }
    return SkewPoly(ring, std::move(r));
  }

  std::shared_ptr<const Ring> ring_;
  std::vector<Elem> c_;

  template <class R>
  friend void check_same(const SkewPoly<R>& a, const SkewPoly<R>& b);
};

template <class Ring>
void check_same(const SkewPoly<Ring>& a, const SkewPoly<Ring>& b) {
  if (a.ring_ == b.ring_) return;
  if (!a.ring_ || !b.ring_ || !a.ring_->same(*b.ring_))
    throw ContextMismatch("polynomials belong to different skew polynomial rings");
}

// c f
template <class Ring>
SkewPoly<Ring> left_scalar(const typename Ring::Elem& c, const SkewPoly<Ring>& f) {
  std::vector<typename Ring::Elem> r = f.coeffs();
  for (auto& x : r) x = c * x;
  return SkewPoly<Ring>(f.ring_ptr(), std::move(r));
}

// t f, by t c = sigma(c) t + delta(c).
template <class Ring>
SkewPoly<Ring> times_t(const SkewPoly<Ring>& f) {
  const Ring& R = f.ring();
  const auto& c = f.coeffs();
  std::vector<typename Ring::Elem> r(c.size() + 1, R.zero());
  for (std::size_t j = 0; j < c.size(); ++j) {
    r[j + 1] = r[j + 1] + R.sigma(c[j]);
    if (R.has_delta()) r[j] = r[j] + R.delta(c[j]);
  }
  return SkewPoly<Ring>(f.ring_ptr(), std::move(r));
}

template <class Ring>
SkewPoly<Ring> poly_mul(const SkewPoly<Ring>& f, const SkewPoly<Ring>& g) {
  check_same(f, g);
  const auto& ring = f.ring_ptr() ? f.ring_ptr() : g.ring_ptr();
  if (f.is_zero() || g.is_zero()) return SkewPoly<Ring>::zero(ring);
  std::vector<typename Ring::Elem> acc(static_cast<std::size_t>(f.degree() + g.degree()) + 1, ring->zero());
  SkewPoly<Ring> T = g;  // t^i g
  for (int i = 0; i <= f.degree(); ++i) {
    const auto& fi = f.coeffs()[static_cast<std::size_t>(i)];
    if (!ring->is_zero(fi))
      for (int j = 0; j <= T.degree(); ++j)
        acc[static_cast<std::size_t>(j)] = acc[static_cast<std::size_t>(j)] + fi * T.coeffs()[static_cast<std::size_t>(j)];
    if (i < f.degree()) T = times_t(T);
  }
  return SkewPoly<Ring>(ring, std::move(acc));
}

// f = q p + r with deg r < deg p, for monic p.
namespace detail {

// Untrimmed quotient and remainder coefficients, so that a remainder known
// only modulo a power of x keeps its precision.
template <class Ring>
std::pair<std::vector<typename Ring::Elem>, std::vector<typename Ring::Elem>> left_divmod_coeffs(
    const SkewPoly<Ring>& f, const SkewPoly<Ring>& p) {
  check_same(f, p);
  if (!p.is_monic()) throw DomainError("left division requires a monic divisor");
  const auto& ring = p.ring_ptr();
  const int m = p.degree();
  std::vector<typename Ring::Elem> r = f.coeffs();
  if (f.degree() < m) {
    r.resize(static_cast<std::size_t>(m), ring->zero());
    return {{}, std::move(r)};
  }
  // Powers t^j p for j = 0 .. deg f - m.
  std::vector<SkewPoly<Ring>> tp{p};
  for (int j = 1; j <= f.degree() - m; ++j) tp.push_back(times_t(tp.back()));
  std::vector<typename Ring::Elem> q(static_cast<std::size_t>(f.degree() - m) + 1, ring->zero());
  for (int k = f.degree(); k >= m; --k) {
    typename Ring::Elem c = r[static_cast<std::size_t>(k)];
    r[static_cast<std::size_t>(k)] = ring->zero();
    q[static_cast<std::size_t>(k - m)] = c;
    const auto& P = tp[static_cast<std::size_t>(k - m)];
    for (int i = 0; i < k; ++i) r[static_cast<std::size_t>(i)] = r[static_cast<std::size_t>(i)] - c * P.coeffs()[static_cast<std::size_t>(i)];
  }
  r.resize(static_cast<std::size_t>(m));
  return {std::move(q), std::move(r)};
}

}  // namespace detail

template <class Ring>
std::pair<SkewPoly<Ring>, SkewPoly<Ring>> left_divmod(const SkewPoly<Ring>& f, const SkewPoly<Ring>& p) {
  auto [q, r] = detail::left_divmod_coeffs(f, p);
  return {SkewPoly<Ring>(p.ring_ptr(), std::move(q)), SkewPoly<Ring>(p.ring_ptr(), std::move(r))};
}

// Remainder of left division by t - a.
template <class Ring>
typename Ring::Elem evaluate(const SkewPoly<Ring>& f, const typename Ring::Elem& a) {
  if (f.is_zero()) return f.ring().zero();
  return detail::left_divmod_coeffs(f, SkewPoly<Ring>::linear(f.ring_ptr(), a)).second.front();
}

// sum f_i N_i(a) with N_0 = 1, N_(i+1) = sigma(N_i) a + delta(N_i); for
// delta = 0 this is f_0 + f_1 a + f_2 sigma(a) a + ...
template <class Ring>
typename Ring::Elem evaluate_closed_form(const SkewPoly<Ring>& f, const typename Ring::Elem& a) {
  const Ring& R = f.ring();
  auto acc = R.zero();
  auto N = R.one();
  for (int i = 0; i <= f.degree(); ++i) {
    acc = acc + f.coeffs()[static_cast<std::size_t>(i)] * N;
    if (i < f.degree()) {
      auto next = R.sigma(N) * a;
      if (R.has_delta()) next = next + R.delta(N);
      N = std::move(next);
    }
  }
  return acc;
}

// sum f_i X^i evaluated in the ring of X; the coefficients embed unchanged.
template <class Ring>
SkewPoly<Ring> substitute(const SkewPoly<Ring>& f, const SkewPoly<Ring>& X) {
  const auto& ring = X.ring_ptr();
  if (f.is_zero()) return SkewPoly<Ring>::zero(ring);
  SkewPoly<Ring> acc = SkewPoly<Ring>::constant(ring, f.leading());
  for (int i = f.degree() - 1; i >= 0; --i)
    acc = poly_mul(acc, X) + SkewPoly<Ring>::constant(ring, f.coeffs()[static_cast<std::size_t>(i)]);
  return acc;
}

template <class Ring>
ResiduePoly reduce_residue(const SkewPoly<Ring>& f) {
  std::vector<BigComplex> c;
  c.reserve(f.coeffs().size());
  for (const auto& x : f.coeffs()) c.push_back(f.ring().residue(x));
  return ResiduePoly(std::move(c));
}

// Coefficient-wise lift of a residue polynomial.
template <class Ring>
SkewPoly<Ring> lift_residue(std::shared_ptr<const Ring> ring, const ResiduePoly& p) {
  std::vector<typename Ring::Elem> c;
  for (const auto& x : p.coeffs()) c.push_back(ring->lift(x));
  return SkewPoly<Ring>(std::move(ring), std::move(c));
}

// phi^n(f), where phi(p) pi = pi p for the uniformizer pi.
template <class Ring>
SkewPoly<Ring> phi_pow(const SkewPoly<Ring>& f, long n) {
  const auto& ring = f.ring_ptr();
  if (n == 0 || f.is_zero()) return f;
  auto [c0, c1] = ring->phi_t(n);
  const SkewPoly<Ring> X(ring, {c0, c1});
  SkewPoly<Ring> acc = SkewPoly<Ring>::constant(ring, ring->phi(f.leading(), n));
  for (int i = f.degree() - 1; i >= 0; --i)
    acc = poly_mul(acc, X) + SkewPoly<Ring>::constant(ring, ring->phi(f.coeffs()[static_cast<std::size_t>(i)], n));
  return acc;
}

// f^phi with f^phi x = x f.
template <class Ring>
SkewPoly<Ring> conj_by_x(const SkewPoly<Ring>& f) {
  return phi_pow(f, f.ring().uniformizers_per_x());
}

template <class Ring>
Valuation ord_poly(const SkewPoly<Ring>& f) {
  Valuation v = Valuation::infinity();
  for (const auto& c : f.coeffs()) v = min(v, f.ring().ord(c));
  return v;
}

// pi^n f
template <class Ring>
SkewPoly<Ring> left_mul_uniformizer(const SkewPoly<Ring>& f, long n) {
  std::vector<typename Ring::Elem> c = f.coeffs();
  for (auto& x : c) x = f.ring().left_mul_uniformizer(x, n);
  return SkewPoly<Ring>(f.ring_ptr(), std::move(c));
}

// pi^(-n) f, exact when every coefficient has order at least n.
template <class Ring>
SkewPoly<Ring> left_div_uniformizer(const SkewPoly<Ring>& f, long n) {
  std::vector<typename Ring::Elem> c = f.coeffs();
  for (auto& x : c) x = f.ring().left_div_uniformizer(x, n);
  return SkewPoly<Ring>(f.ring_ptr(), std::move(c));
}

// Coefficients known below pi^n only.
template <class Ring>
SkewPoly<Ring> truncate_poly(const SkewPoly<Ring>& f, long n) {
  std::vector<typename Ring::Elem> c = f.coeffs();
  for (auto& x : c) x = f.ring().truncate_units(x, n);
  return SkewPoly<Ring>(f.ring_ptr(), std::move(c));
}

// Largest coefficient deviation below order `upto` (x units).
template <class Ring>
BigReal poly_deviation(const SkewPoly<Ring>& a, const SkewPoly<Ring>& b, const Valuation& upto) {
  const auto& R = a.ring_ptr() ? a.ring() : b.ring();
  BigReal worst(0);
  const int n = std::max(a.degree(), b.degree());
  for (int i = 0; i <= n; ++i) {
    BigReal d = R.deviation(a.coeff(i), b.coeff(i), upto);
    if (d > worst) worst = d;
  }
  return worst;
}

}  // namespace skewnp
