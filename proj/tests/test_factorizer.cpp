#include "doctest.h"
#include "support.hpp"

using namespace skewnp;
using namespace skewnp::testing;

namespace {

FactorConfig at_order(long n) {
  FactorConfig cfg;
  cfg.target_order = Rational(n);
  return cfg;
}

BigReal largest_term(const PuiseuxSeries& s, const Rational& above) {
  BigReal m(0);
  for (const auto& t : s.terms())
    if (Rational(t.k, s.ramification()) > above && m < t.c.abs()) m = t.c.abs();
  return m;
}

}  // namespace

TEST_CASE("double root with a nontrivial automorphism") {
  const auto R = ring_for("2");
  const PuiseuxPoly f = poly("t^2 - 2*t + 1", R);
  const Factorization fac = newton_puiseux_factor(f, at_order(40));
  REQUIRE(fac.factors.size() == 2);
  for (const auto& c : fac.factors) {
    CHECK(abs_diff(c.constant_term(), BigComplex(1)) < bits(-100));
    CHECK(largest_term(c, Rational(0)) < bits(-100));
  }
  CHECK(fac.residual < bits(16 - static_cast<long>(working_bits())));

  const QuadraticZero q = sigma_zero_quadratic(f, at_order(40));
  REQUIRE(std::holds_alternative<PuiseuxSeries>(q));
  const PuiseuxSeries& z = std::get<PuiseuxSeries>(q);
  CHECK(max_coefficient_deviation(z, PuiseuxSeries(1), Valuation(40)) == 0);
}

TEST_CASE("quadratic example with alpha = 2") {
  const auto R = ring_for("2");
  const PuiseuxPoly f = poly("t^2 - (2+x)*t + (1+2*x)", R);
  const auto oracle = example_one_zero(Rational(2), 20);
  const PuiseuxSeries z = sigma_zero(f, at_order(20));
  for (int k = 0; k < 20; ++k)
    CHECK(abs_diff(z.coeff(Rational(k)), BigComplex(oracle[static_cast<std::size_t>(k)])) < bits(-96));
  CHECK(abs_diff(z.coeff(Rational(1)), BigComplex(-1)) < bits(-100));
  CHECK(abs_diff(z.coeff(Rational(2)), BigComplex(-1)) < bits(-100));

  const Factorization fac = newton_puiseux_factor(f, at_order(20));
  const VerifyReport rep = verify_factorization(f, fac, bits(-96));
  CHECK(rep.ok);
  CHECK(rep.deviation < bits(-96));
  CHECK(rep.compared_to >= Valuation(20));
  CHECK(rep.zero_check >= Valuation(20));
}

TEST_CASE("quadratic example with alpha = 1 needs ramification") {
  const auto R = ring_for("1");
  const PuiseuxPoly f = poly("t^2 - (2+x)*t + (1+2*x)", R);
  const Factorization fac = newton_puiseux_factor(f, at_order(10));
  CHECK(fac.ramification == 2);
  CHECK(fac.residual < bits(-90));
  CHECK_FALSE(fac.partial);
  const VerifyReport rep = verify_factorization(f, fac, bits(-90));
  CHECK(rep.ok);
  CHECK(rep.zero_check >= Valuation(10));
  // Commutative zeros: 1 + x/2 +- i sqrt(x - x^2/4).
  const BigComplex i = imaginary_unit();
  for (const auto& c : fac.factors) {
    CHECK(abs_diff(c.constant_term(), BigComplex(1)) < bits(-100));
    CHECK(abs_diff(c.coeff(Rational(1)), BigComplex(Rational(1, 2))) < bits(-100));
    const BigComplex s = c.coeff(Rational(1, 2));
    CHECK((abs_diff(s, i) < bits(-100) || abs_diff(s, -i) < bits(-100)));
  }
}

TEST_CASE("monomials and linear polynomials") {
  for (const char* alpha : {"3", "1", "1/2"}) {
    const auto R = ring_for(alpha);
    const Factorization fac = newton_puiseux_factor(poly("t^2", R), at_order(10));
    REQUIRE(fac.factors.size() == 2);
    for (const auto& c : fac.factors) CHECK(c.is_zero());
    CHECK(fac.residual == 0);

    const PuiseuxSeries z = sigma_zero(poly("t - x^(1/3)", R), at_order(10));
    CHECK(max_coefficient_deviation(z, parse_series("x^(1/3)"), Valuation::infinity()) == 0);
  }
  // A left unit is recorded rather than dropped.
  const auto R = ring_for("2");
  const PuiseuxPoly g = poly("3*t^2 - 6*t + 3", R);
  const Factorization fac = newton_puiseux_factor(g, at_order(10));
  CHECK(abs_diff(fac.leading_unit.constant_term(), BigComplex(3)) < bits(-110));
  CHECK(verify_factorization(g, fac, bits(-100)).ok);
}

TEST_CASE("classical Newton-Puiseux when alpha = 1") {
  const auto R = ring_for("1");
  Gen gen(61);
  for (int n = 0; n < 20; ++n) {
    const BigComplex c = gen.complex(4) + BigComplex(Rational(1, 7));
    const PuiseuxPoly f = PuiseuxPoly(R, {PuiseuxSeries(-c), PuiseuxSeries(), PuiseuxSeries(1)});
    const Factorization fac = newton_puiseux_factor(f, at_order(10));
    REQUIRE(fac.factors.size() == 2);
    const BigComplex r0 = fac.factors[0].constant_term(), r1 = fac.factors[1].constant_term();
    CHECK(abs_diff(r0 + r1, BigComplex(0)) < bits(-100));
    CHECK(abs_diff(r0 * r0, c) < bits(-100) * (1 + c.abs()));
  }
  const Factorization fx = newton_puiseux_factor(poly("t^2 - x", R), at_order(10));
  REQUIRE(fx.factors.size() == 2);
  CHECK(fx.ramification == 2);
  for (const auto& c : fx.factors) {
    CHECK(c.terms().size() == 1);
    CHECK(c.ord() == Valuation(Rational(1, 2)));
  }
  CHECK(abs_diff(fx.factors[0].coeff(Rational(1, 2)) + fx.factors[1].coeff(Rational(1, 2)), BigComplex(0)) < bits(-100));
}

TEST_CASE("splitting step dispatch") {
  // Residue roots 1, 1/2, 3 with alpha = 2 split into one orbit and the rest.
  const auto R = ring_for("2");
  const PuiseuxPoly f = poly("(t - 1)*(t - 1/2)*(t - 3) + x*t + x^2", R);
  const StepResult s = factor_step(f, 10);
  REQUIRE(std::holds_alternative<StepSplit>(s));
  const StepSplit& sp = std::get<StepSplit>(s);
  CHECK(sp.g.degree() + sp.h.degree() == 3);
  CHECK(sp.g.degree() >= 1);
  CHECK(sp.h.degree() >= 1);
  CHECK(close(sp.g * sp.h, f, Valuation(10)));

  CHECK(std::holds_alternative<StepClassicalLoop>(factor_step(poly("t^2 - x", ring_for("1")), 10)));
  CHECK(std::holds_alternative<StepLinear>(factor_step(poly("t^3", R), 10)));
  // Residue t^2 with delta_a, a(0) != 0: the orbit of 0 leaves 0.
  const auto Ra = ring_for("2", 1, "1");
  const PuiseuxPoly q = poly("t^2 - x", Ra);
  const StepResult term = factor_step(q, 10);
  REQUIRE(std::holds_alternative<StepSplit>(term));
  const StepSplit& ts = std::get<StepSplit>(term);
  CHECK(ts.branch == "terminal-linear");
  CHECK(ts.h.degree() == 1);
  CHECK(close(ts.g * ts.h, q, Valuation(10)));
}

TEST_CASE("obstruction for a non-real multiplier") {
  const auto R = PuiseuxRing::make(parse_alpha("i"));
  const QuadraticZero q = sigma_zero_quadratic(poly("t^2 - (1+x^2)", R), at_order(6));
  REQUIRE(std::holds_alternative<QuadraticObstruction>(q));
  CHECK(std::get<QuadraticObstruction>(q).q == 2);
}

TEST_CASE("general driver agrees with the quadratic recursion") {
  Gen gen(62);
  const char* alphas[] = {"2", "1/2", "3/2"};
  for (int n = 0; n < 60; ++n) {
    const auto R = ring_for(alphas[n % 3]);
    // Residue (t - 1)^2: higher-order perturbations of -2 and 1.
    const PuiseuxSeries f1 = PuiseuxSeries(-2) + gen.series(1, 1, 4, 2);
    const PuiseuxSeries f0 = PuiseuxSeries(1) + gen.series(1, 1, 4, 2);
    const PuiseuxPoly f(R, {f0, f1, PuiseuxSeries(1)});
    const QuadraticZero q = sigma_zero_quadratic(f, at_order(12), BigComplex(1));
    REQUIRE(std::holds_alternative<PuiseuxSeries>(q));
    const PuiseuxSeries z = sigma_zero(f, at_order(12));
    const PuiseuxSeries& w = std::get<PuiseuxSeries>(q);
    REQUIRE(max_coefficient_deviation(z, w, Valuation(12)) < bits(-80) * (1 + largest_term(w, Rational(-1))));
  }
}

TEST_CASE("verification of factorizations") {
  const auto R = ring_for("2");
  const PuiseuxPoly f = poly("t^2 - 2*t + 1", R);
  Factorization exact;
  exact.factors = {PuiseuxSeries(1), PuiseuxSeries(1)};
  const VerifyReport r0 = verify_factorization(f, exact, bits(-100));
  CHECK(r0.deviation == 0);
  CHECK(r0.ok);

  const PuiseuxPoly g = poly("t^2 - (2+x)*t + (1+2*x)", R);
  Factorization fac = newton_puiseux_factor(g, at_order(20));
  CHECK(verify_factorization(g, fac, bits(-96)).deviation < bits(-96));
  REQUIRE(fac.factors.size() == 2);
  std::swap(fac.factors[0], fac.factors[1]);
  const VerifyReport bad = verify_factorization(g, fac, bits(-96));
  CHECK(bad.deviation > bits(-20));
  CHECK_FALSE(bad.ok);
}

TEST_CASE("products of three linear factors are refactored") {
  Gen gen(63);
  const char* alphas[] = {"2", "3/2"};
  for (int n = 0; n < 50; ++n) {
    const auto R = ring_for(alphas[n % 2]);
    const PuiseuxPoly f = linear_product(R, {random_zero(gen), random_zero(gen), random_zero(gen)});
    const Factorization fac = newton_puiseux_factor(f, at_order(15));
    const VerifyReport rep = verify_factorization(f, fac, bits(-80), Valuation(15));
    INFO("case ", n, ": ", format_poly(f));
    REQUIRE(fac.factors.size() == 3);
    REQUIRE(rep.deviation < bits(-80));
    REQUIRE(fac.residual < bits(-80));
    REQUIRE(rep.compared_to == Valuation(15));
    REQUIRE(rep.zero_check >= Valuation(15));
  }
}
