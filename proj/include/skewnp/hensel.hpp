#pragma once

#include <optional>
#include <sstream>
#include <variant>
#include <vector>

#include "skewnp/errors.hpp"
#include "skewnp/residue.hpp"
#include "skewnp/skew_poly.hpp"

namespace skewnp {

// g-bar and the residue of h^(phi^n) share a root.
class TwistCoprimeFailure : public MathObstruction {
public:
  TwistCoprimeFailure(long n, ResiduePoly witness)
      : MathObstruction("twist coprimality fails at n = " + std::to_string(n)), n_(n), witness_(std::move(witness)) {}
  long n() const { return n_; }
  // The residue of h twisted n times.
  const ResiduePoly& witness() const { return witness_; }

private:
  long n_;
  ResiduePoly witness_;
};

struct HenselOptions {
  // Also assert p_n x^n h_(n-1) = p_n h_(n-1)^(phi^n) x^n at each step.
  bool check_key_congruence = false;
  std::optional<BigReal> tol;
};

struct HenselStep {
  long n;
  long defect_order;  // ord of f - g_n h_n in uniformizer units (capped at N)
  ResiduePoly p_bar;
  ResiduePoly q_bar;
};

template <class Ring>
struct HenselResult {
  SkewPoly<Ring> g_hat;
  SkewPoly<Ring> h_hat;
  long achieved;  // f - g_hat h_hat has order >= achieved, in uniformizer units
  std::vector<HenselStep> steps;
};

namespace detail {

template <class Ring>
long poly_ord_units(const SkewPoly<Ring>& f, long cap) {
  long best = cap;
  for (const auto& c : f.coeffs()) {
    auto o = f.ring().ord_units(c);
    if (o && *o < best) best = static_cast<long>(*o);
  }
  return best;
}

template <class Ring>
void require_precision(const SkewPoly<Ring>& f, long N, const char* name) {
  for (const auto& c : f.coeffs()) {
    auto p = f.ring().precision_units(c);
    if (p && *p < N) {
      std::ostringstream os;
      os << name << " is known only to order " << *p << " < " << N << " uniformizer units";
      throw PrecisionExhausted(os.str());
    }
  }
}

}  // namespace detail

template <class Ring>
TwistCheck twist_coprime_check(const SkewPoly<Ring>& g, const SkewPoly<Ring>& h,
                               const std::optional<BigReal>& tol = std::nullopt) {
  return g.ring().twist_check(reduce_residue(g).monic(), reduce_residue(h).monic(), tol);
}

// Lifts f-bar = g-bar h-bar to f = g_hat h_hat modulo pi^N.
template <class Ring>
HenselResult<Ring> hensel_lift(const SkewPoly<Ring>& f, const SkewPoly<Ring>& g, const SkewPoly<Ring>& h, long N,
                               const HenselOptions& opt = {}) {
  check_same(f, g);
  check_same(f, h);
  const auto& ring = f.ring_ptr();
  const Ring& R = *ring;
  if (!f.is_monic() || !g.is_monic() || !h.is_monic()) throw DomainError("Hensel lifting needs monic f, g, h");
  const int d = f.degree();
  const int m = g.degree();
  if (m + h.degree() != d || m < 1 || h.degree() < 1) throw DomainError("deg g + deg h must equal deg f");
  for (const auto* p : {&f, &g, &h})
    if (ord_poly(*p) < Valuation(0)) throw DomainError("Hensel lifting needs integral coefficients");
  if (N < 1) throw DomainError("target order must be positive");
  const BigReal tol = opt.tol ? *opt.tol : pow2(-static_cast<long>(working_bits() / 2));

  const ResiduePoly fb = reduce_residue(f);
  const ResiduePoly gb = reduce_residue(g);
  const ResiduePoly hb = reduce_residue(h);
  if (max_coefficient_deviation(fb, gb * hb) > tol * std::max(BigReal(1), fb.norm_inf()))
    throw DomainError("residue of f is not the product of the residues of g and h");
  const TwistCheck pre = R.twist_check(gb, hb);
  if (auto fail = std::get_if<FailsAt>(&pre)) throw TwistCoprimeFailure(fail->n, fail->twisted_h);

  detail::require_precision(f, N, "f");
  detail::require_precision(g, N, "g");
  detail::require_precision(h, N, "h");
  const SkewPoly<Ring> F = truncate_poly(f, N);
  SkewPoly<Ring> G = truncate_poly(g, N);
  SkewPoly<Ring> H = truncate_poly(h, N);
  const auto piN = [&](long n) { return SkewPoly<Ring>::constant(ring, R.uniformizer_pow(n)); };

  HenselResult<Ring> out;
  SkewPoly<Ring> D = truncate_poly(F - poly_mul(G, H), N);
  for (long n = 1; n < N; ++n) {
    const long dord = detail::poly_ord_units(D, N);
    if (dord < n) {
      std::ostringstream os;
      os << "Hensel invariant violated: ord(f - g h) = " << dord << " < " << n;
      throw InternalError(os.str());
    }
    if (dord >= N) break;
    // Residue of f_n = (f - g h) x^(-n) = x^(-n) phi^n(f - g h).
    const ResiduePoly fn = R.twist_residue(reduce_residue(left_div_uniformizer(truncate_poly(D, n + 1), n)), n);
    const ResiduePoly hn = R.twist_residue(hb, n);
    const GcdResult bez = ext_gcd(gb, hn);
    if (!bez.coprime()) throw TwistCoprimeFailure(n, hn);
    auto [qb, pb] = divmod(bez.b * fn, gb);
    ResiduePoly qn = bez.a * fn + qb * hn;
    // deg q_n < d - m keeps h monic; the top is rounding noise.
    {
      std::vector<BigComplex> c = qn.coeffs();
      if (static_cast<int>(c.size()) > d - m) c.resize(static_cast<std::size_t>(d - m));
      qn = ResiduePoly(std::move(c));
    }
    const SkewPoly<Ring> P = poly_mul(lift_residue(ring, pb), piN(n));
    const SkewPoly<Ring> Q = poly_mul(lift_residue(ring, qn), piN(n));
    if (opt.check_key_congruence && !pb.is_zero()) {
      const SkewPoly<Ring> p = lift_residue(ring, pb);
      const SkewPoly<Ring> lhs = truncate_poly(poly_mul(P, H), N);
      const SkewPoly<Ring> rhs = truncate_poly(poly_mul(poly_mul(p, phi_pow(H, n)), piN(n)), N);
      const BigReal dev = poly_deviation(lhs, rhs, Valuation::infinity());
      if (dev > tol * std::max(BigReal(1), poly_deviation(lhs, SkewPoly<Ring>::zero(ring), Valuation::infinity()))) {
        std::ostringstream os;
        os << "key congruence failed at step " << n << ", deviation " << dev.str(6);
        throw InternalError(os.str());
      }
    }
    // (G + P)(H + Q) = G H + P H + (G + P) Q, and P, Q have monomial
    // coefficients, so the defect is updated without a full product.
    G = truncate_poly(G + P, N);
    G.mutable_coeffs().back() = R.one();
    D = truncate_poly(D - poly_mul(P, H) - poly_mul(G, Q), N);
    H = truncate_poly(H + Q, N);
    H.mutable_coeffs().back() = R.one();
    out.steps.push_back({n, detail::poly_ord_units(D, N), pb, qn});
  }
  out.achieved = detail::poly_ord_units(D, N);
  if (out.achieved < N) {
    std::ostringstream os;
    os << "Hensel lift reached order " << out.achieved << " < " << N;
    throw InternalError(os.str());
  }
  out.g_hat = std::move(G);
  out.h_hat = std::move(H);
  return out;
}

}  // namespace skewnp
