#include "skewnp/factorizer.hpp"

#include <algorithm>
#include <sstream>

#include "skewnp/errors.hpp"

namespace skewnp {

namespace {

bool lower_coeffs_zero(const PuiseuxPoly& f) {
  for (int i = 0; i < f.degree(); ++i)
    if (!f.coeffs()[static_cast<std::size_t>(i)].is_zero()) return false;
  return true;
}

std::int64_t coefficient_ramification(const PuiseuxPoly& f) {
  std::int64_t L = f.ring().L();
  for (const auto& c : f.coeffs()) L = lcm_ramification(L, c.compact().ramification());
  return L;
}

Valuation poly_precision(const PuiseuxPoly& f) {
  Valuation p = Valuation::infinity();
  for (const auto& c : f.coeffs()) p = min(p, c.precision());
  return p;
}

BigReal poly_scale(const PuiseuxPoly& f) {
  BigReal s(1);
  for (const auto& c : f.coeffs()) s = std::max(s, max_coefficient_modulus(c));
  return s;
}

std::int64_t ceil64(const Rational& q) { return to_int64(rational_ceil(q)); }

// Zero of t^d + (terms known only as O(.)): any c with ord c >= min p_i / (d - i).
PuiseuxSeries vanishing_zero(const PuiseuxPoly& f) {
  const int d = f.degree();
  Valuation bound = Valuation::infinity();
  for (int i = 0; i < d; ++i) {
    const Valuation p = f.coeffs()[static_cast<std::size_t>(i)].precision();
    if (!p.is_infinite()) bound = min(bound, Valuation(p.value() / (d - i)));
  }
  if (bound.is_infinite()) return PuiseuxSeries();
  return PuiseuxSeries::big_o(bound.value());
}

bool alpha_is_positive(const Alpha& a) { return a.is_positive_real(); }

BigReal widened(const BigReal& v) {
  BigReal w(v);
  w.precision(BigReal::default_precision());
  return w;
}

// Arithmetic keeps the wider operand's precision, so inputs are brought up to
// the working precision before a retry can gain anything.
PuiseuxPoly widened(const PuiseuxPoly& f) {
  std::vector<PuiseuxSeries> cs;
  for (const auto& c : f.coeffs()) {
    std::vector<PuiseuxSeries::Term> ts;
    for (const auto& t : c.terms()) ts.push_back({t.k, BigComplex(widened(t.c.real()), widened(t.c.imag()))});
    cs.push_back(PuiseuxSeries::from_terms(c.ramification(), std::move(ts), c.trunc_units()));
  }
  return PuiseuxPoly(f.ring_ptr(), std::move(cs));
}

struct Driver {
  Driver(const FactorConfig& c, Rational w) : cfg(c), work_order(std::move(w)) {}

  const FactorConfig& cfg;
  Rational work_order;
  int classical_steps = 0;
  bool partial = false;
  std::int64_t max_L = 1;
  std::vector<IsoRecord> trail;
  std::vector<std::string> notes;

  PuiseuxPoly find_right_factor(const PuiseuxPoly& f);
  void factor_monic(const PuiseuxPoly& f, std::vector<PuiseuxSeries>& out);
};

PuiseuxPoly Driver::find_right_factor(const PuiseuxPoly& f) {
  const int d = f.degree();
  const auto& ring = f.ring_ptr();
  if (lower_coeffs_zero(f)) return PuiseuxPoly::linear(ring, vanishing_zero(f));

  const Rational r = *newton_slope(f);
  NormalizedScaled ns = normalize_scaled(scale_iso(f, r), r);
  trail.push_back(IsoRecord::scale(r));
  trail.push_back(IsoRecord::unit_normalize(ns.unit, -r * d));
  PuiseuxPoly F = std::move(ns.poly);

  PuiseuxSeries b;
  const PuiseuxSeries& top = F.coeffs()[static_cast<std::size_t>(d - 1)];
  if (!top.is_zero() && top.ord() == Valuation(0)) {
    b = trace_solve(top, d, f.ring().alpha());
    F = shift_iso(F, b);
    PuiseuxSeries& killed = F.mutable_coeffs()[static_cast<std::size_t>(d - 1)];
    const BigReal left = max_coefficient_modulus(killed);
    if (left > pow2(-static_cast<long>(working_bits() / 4)) * poly_scale(F)) {
      std::ostringstream os;
      os << "shift left a t^(d-1) coefficient of size " << left.str(6);
      throw InternalError(os.str());
    }
    killed = killed.is_exact() ? PuiseuxSeries() : PuiseuxSeries::big_o(killed.precision().value());
    trail.push_back(IsoRecord::shift(b));
  }

  const std::int64_t L = lcm_ramification(coefficient_ramification(F), b.compact().ramification());
  if (L > cfg.max_ramification) {
    std::ostringstream os;
    os << "ramification " << L << " exceeds the cap " << cfg.max_ramification;
    throw BudgetExceeded(os.str());
  }
  max_L = std::max(max_L, L);
  if (L != F.ring().L()) {
    F = rehome(F, PuiseuxRing::make(F.ring().alpha(), L, F.ring().a()));
    trail.push_back(IsoRecord::reembed(L));
  }

  // Pulling back multiplies coefficient i of the factor by x^(r (i - k)).
  Rational need = work_order + 1;
  if (r > 0) need += r * d;
  long N = static_cast<long>(ceil64(need * L));
  const Valuation avail = poly_precision(F);
  if (!avail.is_infinite()) N = std::min<long>(N, static_cast<long>(to_int64(rational_floor(avail.value() * L))));
  if (N < 1) throw PrecisionExhausted("not enough precision left for a Hensel lift");

  PuiseuxPoly M;
  const StepResult step = factor_step(F, N, cfg);
  if (const auto* s = std::get_if<StepSplit>(&step)) {
    M = s->h;
  } else if (std::holds_alternative<StepLinear>(step)) {
    M = PuiseuxPoly::linear(F.ring_ptr(), vanishing_zero(F));
  } else {
    if (++classical_steps > cfg.max_classical_iterations) {
      partial = true;
      notes.push_back("classical iteration budget exhausted; remaining block kept as t^d");
      M = PuiseuxPoly::linear(F.ring_ptr(), vanishing_zero(F));
    } else {
      // alpha = 1 makes every delta_a vanish.
      const auto plain = PuiseuxRing::make(F.ring().alpha(), L);
      try {
        M = rehome(find_right_factor(rehome(F, plain)), F.ring_ptr());
      } catch (const BudgetExceeded& e) {
        partial = true;
        notes.push_back(e.what());
        M = PuiseuxPoly::linear(F.ring_ptr(), vanishing_zero(F));
      }
    }
  }

  if (!b.is_zero()) M = shift_iso(M, -b);
  M = normalize_scaled(scale_iso(M, -r), -r).poly;
  return rehome(M, ring);
}

void Driver::factor_monic(const PuiseuxPoly& f, std::vector<PuiseuxSeries>& out) {
  const int d = f.degree();
  if (d <= 0) return;
  if (d == 1) {
    out.push_back(-f.coeffs()[0]);
    return;
  }
  if (lower_coeffs_zero(f)) {
    const PuiseuxSeries z = vanishing_zero(f);
    for (int i = 0; i < d; ++i) out.push_back(z);
    return;
  }
  PuiseuxPoly M = find_right_factor(f);
  if (M.degree() < 1 || M.degree() >= d) throw InternalError("right factor has degree outside 1..d-1");
  auto [Q, R] = left_divmod(f, M);
  BigReal rem(0);
  for (const auto& c : R.coeffs()) rem = std::max(rem, max_coefficient_modulus(c));
  if (rem > pow2(-static_cast<long>(working_bits() / 4)) * poly_scale(f)) {
    std::ostringstream os;
    os << "right factor leaves a remainder of size " << rem.str(6);
    throw InternalError(os.str());
  }
  Q.mutable_coeffs().back() = PuiseuxSeries(1);
  std::vector<PuiseuxSeries> right;
  factor_monic(M, right);
  factor_monic(Q, out);
  out.insert(out.end(), right.begin(), right.end());
}

// Roots ordered so the first is extremal in |c + a0|; its T-orbit then holds
// only copies of itself.
std::vector<BigComplex> candidate_order(const RootsResult& rr, const TMap& T) {
  std::vector<BigComplex> c;
  for (const auto& cl : rr.clusters) c.push_back(cl.root);
  const BigReal ae = T.alpha_eff.abs();
  const bool shrink = ae > 1;
  std::stable_sort(c.begin(), c.end(), [&](const BigComplex& x, const BigComplex& y) {
    const BigReal mx = (x + T.a0).abs(), my = (y + T.a0).abs();
    if (mx != my) return shrink ? mx < my : mx > my;
    if (x.real() != y.real()) return x.real() > y.real();
    return x.imag() > y.imag();
  });
  return c;
}

}  // namespace

PuiseuxPoly rehome(const PuiseuxPoly& f, const PuiseuxRingPtr& ring) {
  const PuiseuxRing& src = f.ring();
  if (!src.same(*ring)) {
    const bool alpha_one = src.alpha_eff_is_one() && ring->alpha_eff_is_one();
    if (!alpha_one) throw ContextMismatch("cannot move a polynomial between different skew rings");
  }
  return PuiseuxPoly(ring, f.coeffs());
}

PuiseuxPoly Factorization::product(const PuiseuxRingPtr& ring) const {
  PuiseuxPoly p = PuiseuxPoly::constant(ring, leading_unit);
  for (const auto& c : factors) p = poly_mul(p, PuiseuxPoly::linear(ring, c));
  return p;
}

StepResult factor_step(const PuiseuxPoly& f, long hensel_units, const FactorConfig& cfg) {
  const PuiseuxRing& R = f.ring();
  const int d = f.degree();
  if (d < 2) throw DomainError("factor_step needs degree >= 2");
  if (!f.is_monic()) throw DomainError("factor_step needs a monic polynomial");
  if (lower_coeffs_zero(f)) return StepLinear{};
  Valuation low = Valuation::infinity();
  for (int i = 0; i < d; ++i) low = min(low, f.coeffs()[static_cast<std::size_t>(i)].ord());
  if (low < Valuation(0)) throw DomainError("factor_step needs integral coefficients");
  const auto& ring = f.ring_ptr();

  if (low == Valuation(0)) {
    const ResiduePoly fb = reduce_residue(f);
    const RootsResult rr = roots(fb, cfg.root_tol);
    const std::vector<BigComplex> flat = rr.flat();
    const TMap T = R.tmap();
    const BigReal otol = cfg.orbit_tol ? *cfg.orbit_tol : default_orbit_tol();
    std::ostringstream tried;
    for (const BigComplex& c1 : candidate_order(rr, T)) {
      const OrbitPartition part = orbit_partition(flat, c1, T, otol);
      tried << " c1=" << c1.real().str(8) << "+" << c1.imag().str(8) << "i:j=" << part.j();
      if (part.j() < 1 || part.j() >= d) continue;
      std::vector<BigComplex> members;
      for (const auto& m : part.members) members.push_back(m.root);
      const PuiseuxPoly g = lift_residue(ring, ResiduePoly::from_roots(members));
      const PuiseuxPoly h = lift_residue(ring, ResiduePoly::from_roots(part.outsiders));
      try {
        HenselResult<PuiseuxRing> hr = hensel_lift(f, g, h, hensel_units);
        return StepSplit{std::move(hr.g_hat), std::move(hr.h_hat), "residue-split", hr.achieved};
      } catch (const TwistCoprimeFailure& e) {
        tried << "(twist fails at n=" << e.n() << ")";
      }
    }
    throw InternalError("no residue root splits " + fb.str() + ";" + tried.str());
  }
  if (R.alpha_eff_is_one()) return StepClassicalLoop{};
  const PuiseuxPoly g = PuiseuxPoly::t_power(ring, d - 1);
  const PuiseuxPoly h = PuiseuxPoly::t_power(ring, 1);
  HenselResult<PuiseuxRing> hr = hensel_lift(f, g, h, hensel_units);
  return StepSplit{std::move(hr.g_hat), std::move(hr.h_hat), "terminal-linear", hr.achieved};
}

Factorization newton_puiseux_factor(const PuiseuxPoly& f, const FactorConfig& cfg) {
  WorkingBitsScope outer(cfg.bits);
  const unsigned base_bits = working_bits();
  if (f.is_zero()) throw DomainError("cannot factor the zero polynomial");
  if (!alpha_is_positive(f.ring().alpha())) throw DomainError("factorization needs a positive real alpha");
  if (cfg.target_order <= 0 || cfg.max_ramification < 1 || cfg.max_classical_iterations < 1)
    throw DomainError("factor configuration values must be positive");

  const Rational T = cfg.target_order;
  const BigReal residual_tol = cfg.residual_tol ? *cfg.residual_tol : pow2(-static_cast<long>(base_bits / 2 + 16));
  Rational extra = std::max(Rational(4), T / 2);
  std::string last_failure;
  bool internal = false;
  unsigned work_bits = base_bits;
  for (int attempt = 0; attempt <= cfg.max_precision_retries; ++attempt) {
    // Numerical failures widen the scalars, a missed order widens the margin.
    if (attempt > 0) {
      if (internal) work_bits *= 2;
      else extra *= 2;
    }
    WorkingBitsScope bits(work_bits);
    std::optional<ZeroThresholdScope> threshold;
    if (cfg.zero_threshold) threshold.emplace(*cfg.zero_threshold);
    Driver drv(cfg, T + extra);
    Factorization fac;
    const PuiseuxPoly fw = widened(f);
    try {
      PuiseuxPoly g = fw;
      const PuiseuxSeries& lead = fw.leading();
      if (!fw.is_monic()) {
        fac.leading_unit = lead;
        PuiseuxSeries inv = series_inv(lead, drv.work_order + extra);
        g = left_scalar(inv, fw);
        g.mutable_coeffs().back() = PuiseuxSeries(1);
        drv.trail.push_back(IsoRecord::unit_normalize(lead, lead.ord().value()));
      }
      drv.factor_monic(g, fac.factors);
    } catch (const PrecisionExhausted& e) {
      last_failure = e.what();
      internal = false;
      continue;
    } catch (const InternalError& e) {
      last_failure = e.what();
      internal = true;
      continue;
    }
    fac.iso_trail = std::move(drv.trail);
    fac.partial = drv.partial;
    fac.notes = std::move(drv.notes);
    fac.bits = work_bits;
    fac.ramification = coefficient_ramification(f);
    for (const auto& c : fac.factors) fac.ramification = lcm_ramification(fac.ramification, c.compact().ramification());
    const VerifyReport rep = verify_factorization(f, fac, BigReal(0), Valuation(T));
    fac.residual = rep.deviation;
    fac.precision = min(poly_precision(fac.product(f.ring_ptr())), poly_precision(f));
    if (fac.partial) return fac;
    std::ostringstream os;
    if (rep.compared_to < Valuation(T) || rep.zero_check < Valuation(T)) {
      os << "reached order " << rep.compared_to.str() << ", zero check " << rep.zero_check.str();
      internal = false;
    } else if (fac.residual > residual_tol) {
      // Factors with fast-growing coefficients cancel in the product.
      os << "residual " << fac.residual.str(6) << " above " << residual_tol.str(6);
      internal = true;
    } else {
      return fac;
    }
    last_failure = os.str();
  }
  if (internal) throw InternalError(last_failure);
  throw PrecisionExhausted("target order not reached: " + last_failure);
}

PuiseuxSeries sigma_zero(const PuiseuxPoly& f, const FactorConfig& cfg) {
  if (f.degree() < 1) throw DomainError("a constant polynomial has no sigma-zero");
  return newton_puiseux_factor(f, cfg).rightmost();
}

QuadraticZero sigma_zero_quadratic(const PuiseuxPoly& f, const FactorConfig& cfg, const std::optional<BigComplex>& g0) {
  WorkingBitsScope bits(cfg.bits);
  const PuiseuxRing& R = f.ring();
  if (f.degree() != 2 || !f.is_monic()) throw DomainError("quadratic oracle needs a monic quadratic");
  if (R.has_delta()) throw DomainError("quadratic oracle needs delta = 0");
  const PuiseuxSeries& f0 = f.coeffs()[0];
  const PuiseuxSeries& f1 = f.coeffs()[1];
  for (const auto* c : {&f0, &f1})
    if (!c->is_zero() && c->ord() < Valuation(0)) throw DomainError("quadratic oracle needs integral coefficients");
  const std::int64_t m = lcm_ramification(f0.compact().ramification(), f1.compact().ramification());
  const std::int64_t K = ceil64(cfg.target_order * m);
  const auto c0 = [&](const PuiseuxSeries& s, std::int64_t k) { return s.coeff(Rational(k, m)); };

  BigComplex z0;
  if (g0) {
    z0 = *g0;
  } else {
    const RootsResult rr = roots(ResiduePoly({c0(f0, 0), c0(f1, 0), BigComplex(1)}), cfg.root_tol);
    std::vector<BigComplex> cs;
    for (const auto& cl : rr.clusters) cs.push_back(cl.root);
    std::stable_sort(cs.begin(), cs.end(), [](const BigComplex& x, const BigComplex& y) {
      const BigReal ax = x.abs(), ay = y.abs();
      if (ax != ay) return ax > ay;
      if (x.real() != y.real()) return x.real() > y.real();
      return x.imag() > y.imag();
    });
    z0 = cs.front();
  }

  const BigReal tol = pow2(-static_cast<long>(working_bits() / 2));
  std::vector<BigComplex> g{z0};
  std::vector<BigComplex> ak{BigComplex(1)};
  for (std::int64_t k = 1; k < K; ++k) ak.push_back(R.alpha().pow(Rational(k, m)));
  for (std::int64_t k = 1; k < K; ++k) {
    BigComplex rest = c0(f0, k);
    for (std::int64_t i = 1; i < k; ++i) rest += ak[static_cast<std::size_t>(i)] * g[static_cast<std::size_t>(i)] * g[static_cast<std::size_t>(k - i)];
    for (std::int64_t i = 1; i <= k; ++i) rest += c0(f1, i) * g[static_cast<std::size_t>(k - i)];
    const BigComplex lambda = (ak[static_cast<std::size_t>(k)] + BigComplex(1)) * z0 + c0(f1, 0);
    if (lambda.abs() <= tol) {
      if (rest.abs() > tol) return QuadraticObstruction{Rational(k, m), rest};
      g.push_back(BigComplex(0));
      continue;
    }
    g.push_back(-rest / lambda);
  }
  std::vector<PuiseuxSeries::Term> terms;
  for (std::int64_t k = 0; k < K; ++k) terms.push_back({k, g[static_cast<std::size_t>(k)]});
  return PuiseuxSeries::from_terms(m, std::move(terms), K);
}

VerifyReport verify_factorization(const PuiseuxPoly& f, const Factorization& fac, const BigReal& tol,
                                  const Valuation& upto) {
  VerifyReport rep;
  WorkingBitsScope wide(std::max(working_bits(), fac.bits));
  ZeroThresholdScope raw(BigReal(0));
  const PuiseuxPoly p = fac.product(f.ring_ptr());
  rep.compared_to = min(min(poly_precision(p), poly_precision(f)), upto);
  const int n = std::max(p.degree(), f.degree());
  for (int i = 0; i <= n; ++i)
    rep.deviation = std::max(rep.deviation, max_coefficient_deviation(f.coeff(i), p.coeff(i), rep.compared_to));

  rep.zero_check = Valuation::infinity();
  if (!fac.factors.empty()) {
    const PuiseuxSeries e = evaluate(f, fac.rightmost());
    const BigReal cut = std::max(tol, pow2(-static_cast<long>(working_bits() / 2)));
    rep.zero_check = e.precision();
    for (const auto& t : e.terms()) {
      if (t.c.abs() > cut) {
        rep.zero_check = min(rep.zero_check, Valuation(Rational(t.k, e.ramification())));
        break;
      }
    }
  }
  rep.ok = rep.deviation <= tol;
  return rep;
}

}  // namespace skewnp
