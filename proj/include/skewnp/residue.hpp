#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "skewnp/scalar.hpp"

namespace skewnp {

// Dense polynomial over BigComplex, coefficient i of t^i. Trailing exact
// zeros are trimmed, so the zero polynomial has no coefficients.
class ResiduePoly {
public:
  ResiduePoly() = default;
  explicit ResiduePoly(std::vector<BigComplex> coeffs);
  static ResiduePoly constant(const BigComplex& c) { return ResiduePoly({c}); }
  static ResiduePoly t_power(int n);
  // prod (t - r) over the given roots.
  static ResiduePoly from_roots(const std::vector<BigComplex>& roots);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<BigComplex>& coeffs() const { return c_; }
  BigComplex coeff(int i) const;
  const BigComplex& leading() const;

  BigComplex operator()(const BigComplex& z) const;
  ResiduePoly derivative() const;
  ResiduePoly monic() const;
  // Drop trailing coefficients of modulus <= tol.
  ResiduePoly trimmed(const BigReal& tol) const;
  BigReal norm_inf() const;

  friend ResiduePoly operator+(const ResiduePoly& a, const ResiduePoly& b);
  friend ResiduePoly operator-(const ResiduePoly& a, const ResiduePoly& b);
  friend ResiduePoly operator*(const ResiduePoly& a, const ResiduePoly& b);
  friend ResiduePoly operator*(const BigComplex& s, const ResiduePoly& a);

  std::string str() const;

private:
  void trim();
  std::vector<BigComplex> c_;
};

// Quotient and remainder; tol clears the remainder's top coefficients.
std::pair<ResiduePoly, ResiduePoly> divmod(const ResiduePoly& a, const ResiduePoly& b, const BigReal& tol = BigReal(0));
// p(l t + m).
ResiduePoly substitute_affine(const ResiduePoly& p, const BigComplex& l, const BigComplex& m);
BigReal max_coefficient_deviation(const ResiduePoly& a, const ResiduePoly& b);

struct RootCluster {
  BigComplex root;
  int multiplicity = 1;
};

struct RootsResult {
  std::vector<RootCluster> clusters;
  BigReal max_residual;  // max |p(root)| over clusters
  int iterations = 0;

  int total_multiplicity() const;
  std::vector<BigComplex> flat() const;
};

// Durand-Kerner from the fixed start (0.4+0.9i)^k, then clustering at
// tol_cluster and Newton polish of each cluster on p^(m-1).
RootsResult roots(const ResiduePoly& p, const std::optional<BigReal>& tol_cluster = std::nullopt,
                  int max_iter = 512);

struct GcdResult {
  ResiduePoly g;  // monic gcd; exactly 1 when coprime
  ResiduePoly a;
  ResiduePoly b;  // a p + b q = g
  BigReal condition;
  bool coprime() const { return g.degree() == 0; }
};

GcdResult ext_gcd(const ResiduePoly& p, const ResiduePoly& q, const std::optional<BigReal>& tol = std::nullopt);

// T(w) = w / alpha_eff + a0 (1/alpha_eff - 1).
struct TMap {
  BigComplex alpha_eff;
  BigComplex a0;
  // Numerically equal to one; then T is the identity.
  bool alpha_is_one = false;

  BigComplex apply(const BigComplex& w, long n = 1) const;
  // (lambda, mu) with T^n(w) = lambda w + mu.
  std::pair<BigComplex, BigComplex> affine(long n) const;
};

// p(T^n(t)): c is a root of the result iff T^n(c) is a root of p.
ResiduePoly twist_residue(const ResiduePoly& p, long n, const TMap& T);

struct OrbitMember {
  BigComplex root;
  long exponent;  // root = T^exponent(base)
};

struct OrbitPartition {
  BigComplex base;
  std::vector<OrbitMember> members;
  std::vector<BigComplex> outsiders;
  int j() const { return static_cast<int>(members.size()); }
};

// If (c + a0) = alpha_eff^(-n) (c1 + a0) for an integer n >= 0, returns n.
std::optional<long> orbit_exponent(const BigComplex& c, const BigComplex& c1, const TMap& T, const BigReal& tol);

OrbitPartition orbit_partition(const std::vector<BigComplex>& roots, const BigComplex& c1, const TMap& T,
                               const BigReal& tol);

struct CoprimeForAllN {};
struct FailsAt {
  long n;
  ResiduePoly twisted_h;  // the residue of h twisted n times
};
using TwistCheck = std::variant<CoprimeForAllN, FailsAt>;

// Smallest n >= 1 with a root c of g and a root c' of h such that c' = T^n(c),
// decided for all n at once.
TwistCheck twist_coprime_check_affine(const ResiduePoly& g, const ResiduePoly& h, const TMap& T, const BigReal& tol);

// The twist is periodic with the given period; checks n = 1..period by gcd.
template <class Twist>
TwistCheck twist_coprime_check_periodic(const ResiduePoly& g, const ResiduePoly& h, long period, Twist&& twist,
                                        const std::optional<BigReal>& tol = std::nullopt) {
  for (long n = 1; n <= period; ++n) {
    ResiduePoly th = twist(h, n);
    if (!ext_gcd(g, th, tol).coprime()) return FailsAt{n, th};
  }
  return CoprimeForAllN{};
}

struct DeltaMember {
  std::vector<long> exponents;
};
struct DeltaNonMember {};
struct DeltaUnknown {};
using DeltaResult = std::variant<DeltaMember, DeltaNonMember, DeltaUnknown>;

// Is c in {a0 (d / (alpha^(-n_1) + ... + alpha^(-n_d)) - 1)}? Exponents are
// searched up to depth.
DeltaResult delta_set_member(const BigComplex& c, const BigComplex& a0, const BigReal& alpha, int d, int depth,
                             const std::optional<BigReal>& tol = std::nullopt);

// Default tolerances at the current working precision.
BigReal default_cluster_tol();
BigReal default_orbit_tol();

}  // namespace skewnp
