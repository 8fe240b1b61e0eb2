#include "skewnp/scalar.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "skewnp/errors.hpp"

namespace skewnp {

namespace {

unsigned& bits_storage() {
  static unsigned bits = 0;
  return bits;
}

BigReal& threshold_storage() {
  static BigReal thr;
  return thr;
}

void ensure_initialized() {
  if (bits_storage() == 0) set_working_bits(128);
}

}  // namespace

namespace {
[[maybe_unused]] const bool kDefaultPrecisionSet = (ensure_initialized(), true);
}  // namespace

void set_working_bits(unsigned bits) {
  if (bits < 32) throw DomainError("working precision must be at least 32 bits");
  bits_storage() = bits;
  auto digits10 = static_cast<unsigned>(std::ceil(bits * std::log10(2.0)));
  BigReal::default_precision(digits10);
  threshold_storage() = pow2(-static_cast<long>(bits / 2));
}

unsigned working_bits() {
  ensure_initialized();
  return bits_storage();
}

const BigReal& zero_threshold() {
  ensure_initialized();
  return threshold_storage();
}

void set_zero_threshold(const BigReal& threshold) {
  ensure_initialized();
  threshold_storage() = threshold;
}

BigReal pow2(long e) {
  BigReal r(1);
  mpfr_mul_2si(r.backend().data(), r.backend().data(), e, MPFR_RNDN);
  return r;
}

BigReal to_real(const Rational& q) {
  ensure_initialized();
  BigReal r;
  mpfr_set_q(r.backend().data(), q.backend().data(), MPFR_RNDN);
  return r;
}

Rational numerator_over(const BigInt& num, const BigInt& den) { return Rational(num, den); }

BigInt rational_floor(const Rational& q) {
  BigInt n = boost::multiprecision::numerator(q);
  BigInt d = boost::multiprecision::denominator(q);
  BigInt r;
  mpz_fdiv_q(r.backend().data(), n.backend().data(), d.backend().data());
  return r;
}

BigInt rational_ceil(const Rational& q) {
  BigInt n = boost::multiprecision::numerator(q);
  BigInt d = boost::multiprecision::denominator(q);
  BigInt r;
  mpz_cdiv_q(r.backend().data(), n.backend().data(), d.backend().data());
  return r;
}

std::int64_t to_int64(const BigInt& v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
    throw DomainError("integer out of 64-bit range");
  return v.convert_to<std::int64_t>();
}

BigComplex::BigComplex(const Rational& re, const Rational& im) : re_(to_real(re)), im_(to_real(im)) {}

BigComplex& BigComplex::operator+=(const BigComplex& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

BigComplex& BigComplex::operator-=(const BigComplex& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

BigComplex& BigComplex::operator*=(const BigComplex& o) {
  if (im_ == 0 && o.im_ == 0) {
    re_ *= o.re_;
    return *this;
  }
  BigReal r = re_ * o.re_ - im_ * o.im_;
  BigReal i = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(r);
  im_ = std::move(i);
  return *this;
}

BigComplex& BigComplex::operator*=(const BigReal& s) {
  re_ *= s;
  im_ *= s;
  return *this;
}

BigComplex& BigComplex::operator/=(const BigComplex& o) {
  if (o.is_zero()) throw ZeroDivision("complex division by zero");
  if (o.im_ == 0) {
    re_ /= o.re_;
    im_ /= o.re_;
    return *this;
  }
  BigReal den = o.norm();
  BigReal r = (re_ * o.re_ + im_ * o.im_) / den;
  BigReal i = (im_ * o.re_ - re_ * o.im_) / den;
  re_ = std::move(r);
  im_ = std::move(i);
  return *this;
}

BigReal BigComplex::abs() const {
  BigReal r;
  mpfr_hypot(r.backend().data(), re_.backend().data(), im_.backend().data(), MPFR_RNDN);
  return r;
}

BigReal BigComplex::arg() const {
  BigReal r;
  mpfr_atan2(r.backend().data(), im_.backend().data(), re_.backend().data(), MPFR_RNDN);
  return r;
}

BigReal BigComplex::max_abs_part() const {
  BigReal a = boost::multiprecision::abs(re_);
  BigReal b = boost::multiprecision::abs(im_);
  return a < b ? b : a;
}

bool BigComplex::negligible() const {
  const BigReal& thr = zero_threshold();
  return boost::multiprecision::abs(re_) < thr && boost::multiprecision::abs(im_) < thr;
}

bool BigComplex::is_real(const BigReal& tol) const { return boost::multiprecision::abs(im_) <= tol; }

BigComplex imaginary_unit() { return BigComplex(BigReal(0), BigReal(1)); }

BigComplex cexp(const BigComplex& z) {
  BigReal m = boost::multiprecision::exp(z.real());
  return BigComplex(m * boost::multiprecision::cos(z.imag()), m * boost::multiprecision::sin(z.imag()));
}

BigComplex pow_int(const BigComplex& z, std::int64_t n) {
  if (n < 0) return BigComplex(1) / pow_int(z, -n);
  BigComplex result(1);
  BigComplex base = z;
  auto e = static_cast<std::uint64_t>(n);
  while (e) {
    if (e & 1u) result *= base;
    e >>= 1u;
    if (e) base *= base;
  }
  return result;
}

BigComplex pow_rational(const BigComplex& z, const Rational& q) {
  if (z.is_zero()) {
    if (q > 0) return BigComplex(0);
    throw DomainError("zero raised to a non-positive power");
  }
  BigReal qr = to_real(q);
  BigReal mod = boost::multiprecision::pow(z.abs(), qr);
  BigReal ang = z.arg() * qr;
  return BigComplex(mod * boost::multiprecision::cos(ang), mod * boost::multiprecision::sin(ang));
}

BigReal abs_diff(const BigComplex& a, const BigComplex& b) { return (a - b).abs(); }

// --- Alpha ---------------------------------------------------------------

Alpha Alpha::from_rational(const Rational& value) {
  if (value <= 0) throw DomainError("alpha must be a positive real number");
  Alpha a;
  a.exact_ = value;
  a.value_ = BigComplex(value);
  return a;
}

Alpha Alpha::from_real(const BigReal& value) {
  if (value <= 0) throw DomainError("alpha must be a positive real number");
  Alpha a;
  a.value_ = BigComplex(value);
  return a;
}

Alpha Alpha::from_complex(const BigComplex& value, bool allow_complex) {
  if (value.is_zero()) throw DomainError("alpha must be non-zero");
  if (value.imag() == 0 && value.real() > 0) return from_real(value.real());
  if (!allow_complex)
    throw DomainError("non-real or negative alpha requires the complex diagnostic mode");
  Alpha a;
  a.value_ = value;
  a.allow_complex_ = true;
  return a;
}

bool Alpha::is_positive_real() const { return value_.imag() == 0 && value_.real() > 0; }

bool Alpha::is_one() const {
  if (exact_) return *exact_ == 1;
  return (value_ - BigComplex(1)).abs() < pow2(-static_cast<long>(working_bits() / 4));
}

namespace {

BigReal real_root(const BigReal& v, unsigned long n) {
  BigReal r;
  mpfr_rootn_ui(r.backend().data(), v.backend().data(), n, MPFR_RNDN);
  return r;
}

constexpr long kSmallExponent = 4096;

}  // namespace

BigComplex Alpha::pow(const Rational& q) const {
  if (q == 0) return BigComplex(1);
  const BigInt m = boost::multiprecision::numerator(q);
  const BigInt n = boost::multiprecision::denominator(q);
  const bool small = boost::multiprecision::abs(m) <= kSmallExponent && n <= kSmallExponent;
  if (is_positive_real()) {
    if (exact_ && small) {
      auto mi = m.convert_to<long>();
      auto ni = n.convert_to<unsigned long>();
      Rational base = *exact_;
      Rational p(1);
      Rational b = mi < 0 ? Rational(1) / base : base;
      for (long k = 0; k < std::labs(mi); ++k) p *= b;
      BigReal v = to_real(p);
      return BigComplex(ni == 1 ? v : real_root(v, ni));
    }
    if (small) {
      auto mi = m.convert_to<long>();
      auto ni = n.convert_to<unsigned long>();
      BigReal v = pow_int(value_, mi).real();
      return BigComplex(ni == 1 ? v : real_root(v, ni));
    }
    return BigComplex(boost::multiprecision::exp(to_real(q) * boost::multiprecision::log(value_.real())));
  }
  // Polar-form convention: root of the modulus, angle divided.
  BigReal modulus = value_.abs();
  BigReal mod_pow;
  if (small) {
    auto mi = m.convert_to<long>();
    auto ni = n.convert_to<unsigned long>();
    BigReal v = pow_int(BigComplex(modulus), mi).real();
    mod_pow = ni == 1 ? v : real_root(v, ni);
  } else {
    mod_pow = boost::multiprecision::exp(to_real(q) * boost::multiprecision::log(modulus));
  }
  BigReal ang = value_.arg() * to_real(q);
  return BigComplex(mod_pow * boost::multiprecision::cos(ang), mod_pow * boost::multiprecision::sin(ang));
}

std::string Alpha::str() const {
  if (exact_) return exact_->str();
  std::ostringstream os;
  os << value_.real().str(20);
  if (value_.imag() != 0) os << (value_.imag() < 0 ? "-" : "+") << boost::multiprecision::abs(value_.imag()).str(20) << "i";
  return os.str();
}

BigComplex alpha_pow(const Alpha& alpha, const Rational& q) { return alpha.pow(q); }

Alpha alpha_root(const Alpha& alpha, std::int64_t n) {
  if (n <= 0) throw DomainError("root index must be positive");
  if (n == 1) return alpha;
  if (alpha.exact()) {
    // Exact when numerator and denominator are perfect n-th powers.
    const Rational& v = *alpha.exact();
    BigInt num = boost::multiprecision::numerator(v);
    BigInt den = boost::multiprecision::denominator(v);
    BigInt rn, rd;
    mpz_root(rn.backend().data(), num.backend().data(), static_cast<unsigned long>(n));
    mpz_root(rd.backend().data(), den.backend().data(), static_cast<unsigned long>(n));
    if (boost::multiprecision::pow(rn, static_cast<unsigned>(n)) == num &&
        boost::multiprecision::pow(rd, static_cast<unsigned>(n)) == den)
      return Alpha::from_rational(Rational(rn, rd));
  }
  BigComplex v = alpha.pow(Rational(1, n));
  if (alpha.is_positive_real()) return Alpha::from_real(v.real());
  return Alpha::from_complex(v, true);
}

}  // namespace skewnp
