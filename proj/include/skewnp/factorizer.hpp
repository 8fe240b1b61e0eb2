#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "skewnp/hensel.hpp"
#include "skewnp/rings.hpp"
#include "skewnp/structure_maps.hpp"

namespace skewnp {

struct FactorConfig {
  Rational target_order{20};
  std::int64_t max_ramification = 256;
  int max_classical_iterations = 64;
  // Scalar precision in bits; 0 keeps the current working precision.
  unsigned bits = 0;
  std::optional<BigReal> root_tol;
  std::optional<BigReal> orbit_tol;
  std::optional<BigReal> zero_threshold;
  // Largest accepted residual below the target order; 2^-(P/2 + 16) by default.
  std::optional<BigReal> residual_tol;
  // Retries: doubled bits after a numerical failure or a residual above
  // residual_tol, a doubled working margin after a missed order.
  int max_precision_retries = 4;
};

// f = unit * (t - c_1)(t - c_2)...(t - c_d)
struct Factorization {
  PuiseuxSeries leading_unit{1};
  std::vector<PuiseuxSeries> factors;
  // Largest coefficient deviation of the product from f below the target order.
  BigReal residual{0};
  // Known order of the product.
  Valuation precision;
  std::vector<IsoRecord> iso_trail;
  std::int64_t ramification = 1;
  // Scalar precision of the attempt that succeeded.
  unsigned bits = 0;
  // Set when the alpha = 1 loop ran out of budget; the last factors are
  // then truncated expansions.
  bool partial = false;
  std::vector<std::string> notes;

  const PuiseuxSeries& rightmost() const { return factors.back(); }
  // The product as a polynomial over the ring of f.
  PuiseuxPoly product(const PuiseuxRingPtr& ring) const;
};

struct StepSplit {
  PuiseuxPoly g;  // left factor
  PuiseuxPoly h;  // right factor
  std::string branch;
  long achieved = 0;
};
// f is t^d up to its known precision.
struct StepLinear {};
// alpha_eff = 1 and no residue split: rescale and repeat.
struct StepClassicalLoop {};
using StepResult = std::variant<StepSplit, StepLinear, StepClassicalLoop>;

// One splitting step on a monic integral f whose ring ramification holds
// every exponent. hensel_units is the lift target in uniformizer units.
StepResult factor_step(const PuiseuxPoly& f, long hensel_units, const FactorConfig& cfg = {});

Factorization newton_puiseux_factor(const PuiseuxPoly& f, const FactorConfig& cfg = {});

// The rightmost linear factor's zero: evaluate(f, z) = O(x^target).
PuiseuxSeries sigma_zero(const PuiseuxPoly& f, const FactorConfig& cfg = {});

// The linear coefficient of the unknown at exponent q vanishes while the
// forcing term does not.
struct QuadraticObstruction {
  Rational q;
  BigComplex forcing;
};
using QuadraticZero = std::variant<PuiseuxSeries, QuadraticObstruction>;

// Solves sigma(z) z + f_1 z + f_0 = 0 term by term at the ramification of the
// coefficients. g0 picks the residue root; the largest one by default.
QuadraticZero sigma_zero_quadratic(const PuiseuxPoly& f, const FactorConfig& cfg = {},
                                   const std::optional<BigComplex>& g0 = std::nullopt);

struct VerifyReport {
  BigReal deviation{0};
  // Exponent up to which the product and f were compared.
  Valuation compared_to;
  // Lower bound on ord evaluate(f, c_d).
  Valuation zero_check;
  bool ok = false;
};

// Compares below upto and below the shared truncation of f and the product,
// at no less than the precision the factors were computed at.
VerifyReport verify_factorization(const PuiseuxPoly& f, const Factorization& fac, const BigReal& tol,
                                  const Valuation& upto = Valuation::infinity());

// The same coefficients over another presentation of the same ring.
PuiseuxPoly rehome(const PuiseuxPoly& f, const PuiseuxRingPtr& ring);

}  // namespace skewnp
