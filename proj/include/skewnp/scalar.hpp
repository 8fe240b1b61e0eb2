#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

namespace skewnp {

using BigInt = boost::multiprecision::number<boost::multiprecision::gmp_int, boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational, boost::multiprecision::et_off>;
using BigReal =
    boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>, boost::multiprecision::et_off>;

// Working precision of every BigReal created afterwards. Changing it resets
// the zero threshold to its default 2^(-bits/2).
void set_working_bits(unsigned bits);
unsigned working_bits();

// Coefficients whose real and imaginary parts are both below this magnitude
// are dropped when series are normalized.
const BigReal& zero_threshold();
void set_zero_threshold(const BigReal& threshold);

// Overrides the zero threshold until destroyed.
class ZeroThresholdScope {
public:
  explicit ZeroThresholdScope(const BigReal& threshold) : saved_(zero_threshold()) { set_zero_threshold(threshold); }
  ~ZeroThresholdScope() { set_zero_threshold(saved_); }
  ZeroThresholdScope(const ZeroThresholdScope&) = delete;
  ZeroThresholdScope& operator=(const ZeroThresholdScope&) = delete;

private:
  BigReal saved_;
};

// Sets the working precision (and default threshold) until destroyed.
class WorkingBitsScope {
public:
  explicit WorkingBitsScope(unsigned bits) : bits_(working_bits()), threshold_(zero_threshold()) {
    if (bits != 0) set_working_bits(bits);
  }
  ~WorkingBitsScope() {
    set_working_bits(bits_);
    set_zero_threshold(threshold_);
  }
  WorkingBitsScope(const WorkingBitsScope&) = delete;
  WorkingBitsScope& operator=(const WorkingBitsScope&) = delete;

private:
  unsigned bits_;
  BigReal threshold_;
};

BigReal pow2(long e);
BigReal to_real(const Rational& q);

Rational numerator_over(const BigInt& num, const BigInt& den);
BigInt rational_floor(const Rational& q);
BigInt rational_ceil(const Rational& q);
std::int64_t to_int64(const BigInt& v);

class BigComplex {
public:
  BigComplex() : re_(0), im_(0) {}
  BigComplex(long v) : re_(v), im_(0) {}  // NOLINT: implicit small-integer literal
  BigComplex(BigReal re, BigReal im) : re_(std::move(re)), im_(std::move(im)) {}
  explicit BigComplex(BigReal re) : re_(std::move(re)), im_(0) {}
  explicit BigComplex(const Rational& re, const Rational& im = Rational(0));

  const BigReal& real() const { return re_; }
  const BigReal& imag() const { return im_; }
  BigReal& real() { return re_; }
  BigReal& imag() { return im_; }

  BigComplex& operator+=(const BigComplex& o);
  BigComplex& operator-=(const BigComplex& o);
  BigComplex& operator*=(const BigComplex& o);
  BigComplex& operator/=(const BigComplex& o);
  BigComplex& operator*=(const BigReal& s);

  friend BigComplex operator+(BigComplex a, const BigComplex& b) { return a += b; }
  friend BigComplex operator-(BigComplex a, const BigComplex& b) { return a -= b; }
  friend BigComplex operator*(BigComplex a, const BigComplex& b) { return a *= b; }
  friend BigComplex operator/(BigComplex a, const BigComplex& b) { return a /= b; }
  friend BigComplex operator*(BigComplex a, const BigReal& s) { return a *= s; }
  friend BigComplex operator*(const BigReal& s, BigComplex a) { return a *= s; }
  BigComplex operator-() const { return BigComplex(-re_, -im_); }

  friend bool operator==(const BigComplex& a, const BigComplex& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

  BigComplex conj() const { return BigComplex(re_, -im_); }
  BigReal norm() const { return re_ * re_ + im_ * im_; }
  BigReal abs() const;
  BigReal arg() const;
  BigReal max_abs_part() const;
  bool is_zero() const { return re_ == 0 && im_ == 0; }
  // Both parts below zero_threshold().
  bool negligible() const;
  bool is_real(const BigReal& tol) const;

private:
  BigReal re_;
  BigReal im_;
};

BigComplex imaginary_unit();
BigComplex cexp(const BigComplex& z);
BigComplex pow_int(const BigComplex& z, std::int64_t n);
// Principal branch z^q = exp(q log z), z != 0.
BigComplex pow_rational(const BigComplex& z, const Rational& q);
BigReal abs_diff(const BigComplex& a, const BigComplex& b);

// Exact Gaussian rationals; used where bit-exact ring laws are checked.
struct GaussianRational {
  Rational re{0};
  Rational im{0};

  GaussianRational() = default;
  GaussianRational(long v) : re(v) {}  // NOLINT
  GaussianRational(Rational r, Rational i = Rational(0)) : re(std::move(r)), im(std::move(i)) {}

  friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  GaussianRational operator-() const { return {-re, -im}; }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) = default;
  bool is_zero() const { return re == 0 && im == 0; }
  GaussianRational conj() const { return {re, -im}; }
  BigComplex to_complex() const { return BigComplex(re, im); }
};

// The multiplier alpha of sigma(x) = alpha x.
class Alpha {
public:
  static Alpha from_rational(const Rational& value);
  static Alpha from_real(const BigReal& value);
  // Non-real values require allow_complex (diagnostic mode).
  static Alpha from_complex(const BigComplex& value, bool allow_complex);

  bool is_exact() const { return exact_.has_value(); }
  const std::optional<Rational>& exact() const { return exact_; }
  const BigComplex& value() const { return value_; }
  bool allow_complex() const { return allow_complex_; }
  bool is_positive_real() const;
  // Exact test when rational, else |alpha - 1| < 2^(-P/4).
  bool is_one() const;

  // alpha^q; principal real root for positive alpha, polar-form root
  // sqrt[k](r) e^(i theta / k) otherwise.
  BigComplex pow(const Rational& q) const;

  std::string str() const;

private:
  Alpha() = default;
  std::optional<Rational> exact_;
  BigComplex value_;
  bool allow_complex_ = false;
};

BigComplex alpha_pow(const Alpha& alpha, const Rational& q);

// The alpha of sigma^(1/n): alpha^(1/n), exact when the root is rational.
Alpha alpha_root(const Alpha& alpha, std::int64_t n);

}  // namespace skewnp
