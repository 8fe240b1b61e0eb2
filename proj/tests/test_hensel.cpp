#include "doctest.h"
#include "support.hpp"

using namespace skewnp;
using namespace skewnp::testing;

namespace {

PuiseuxPoly residue_lift(const PuiseuxRingPtr& R, const ResiduePoly& p) { return lift_residue(R, p); }

ResiduePoly from_roots(const std::vector<BigComplex>& r) { return ResiduePoly::from_roots(r); }

}  // namespace

TEST_CASE("lifting the quadratic example") {
  const auto R = ring_for("2");
  const PuiseuxPoly f = poly("t^2 - (2+x)*t + (1+2*x)", R);
  const PuiseuxPoly g = poly("t - 1", R);
  const auto oracle = example_one_zero(Rational(2), 20);
  CHECK(oracle[1] == -1);
  CHECK(oracle[2] == -1);

  for (long N : {8L, 20L}) {
    const auto res = hensel_lift(f, g, g, N);
    CHECK(res.achieved >= N);
    const PuiseuxSeries z = -res.h_hat.coeff(0);
    for (int k = 0; k < N; ++k)
      CHECK(abs_diff(z.coeff(Rational(k)), BigComplex(oracle[static_cast<std::size_t>(k)])) < bits(-96));
    CHECK(close(res.g_hat * res.h_hat, f, Valuation(N)));
    CHECK(poly_diff(res.g_hat * res.h_hat, f, Valuation(N)) < bits(-96));
    const PuiseuxSeries val = evaluate(f, z);
    CHECK(max_coefficient_deviation(val, PuiseuxSeries(), Valuation(N)) < bits(-96));
    for (const auto& s : res.steps) CHECK(s.defect_order >= s.n + 1);
  }
}

TEST_CASE("trivial automorphism breaks the twist condition") {
  const auto R = ring_for("1");
  const PuiseuxPoly f = poly("t^2 - (2+x)*t + (1+2*x)", R);
  const PuiseuxPoly g = poly("t - 1", R);
  try {
    hensel_lift(f, g, g, 8);
    FAIL("expected a twist failure");
  } catch (const TwistCoprimeFailure& e) {
    CHECK(e.n() == 1);
  }
}

TEST_CASE("skew power series example fails at n = 1") {
  const auto S = SkewSeriesRing::make();
  const BigComplex i = imaginary_unit();
  const SkewSeriesPoly f(S, {SkewSeries({BigComplex(1), BigComplex(1)}), SkewSeries(), SkewSeries(1)});
  const SkewSeriesPoly g(S, {SkewSeries(i), SkewSeries(1)});
  const SkewSeriesPoly h(S, {SkewSeries(-i), SkewSeries(1)});
  const TwistCheck tc = twist_coprime_check(g, h);
  REQUIRE(std::holds_alternative<FailsAt>(tc));
  CHECK(std::get<FailsAt>(tc).n == 1);
  try {
    hensel_lift(f, g, h, 6);
    FAIL("expected a twist failure");
  } catch (const TwistCoprimeFailure& e) {
    CHECK(e.n() == 1);
    // The residue of phi(h) is t + i.
    CHECK(max_coefficient_deviation(e.witness(), ResiduePoly({i, BigComplex(1)})) < bits(-110));
  }
}

TEST_CASE("random liftable instances keep the step invariant") {
  Gen gen(51);
  const char* alphas[] = {"2", "3/2", "1/2"};
  int done = 0;
  for (int attempt = 0; done < 25 && attempt < 200; ++attempt) {
    const auto R = ring_for(alphas[gen.integer(0, 2)], gen.integer(1, 2));
    const std::int64_t L = R->L();
    const int d = static_cast<int>(gen.integer(2, 6));
    const int m = static_cast<int>(gen.integer(1, d - 1));
    std::vector<BigComplex> rg, rh;
    for (int k = 0; k < m; ++k) rg.push_back(gen.complex(3));
    for (int k = m; k < d; ++k) rh.push_back(gen.complex(3));
    const ResiduePoly gb = from_roots(rg), hb = from_roots(rh);
    if (!std::holds_alternative<CoprimeForAllN>(R->twist_check(gb, hb))) continue;
    // f = g h + higher-order terms in the true factors.
    auto perturb = [&](const ResiduePoly& p) {
      PuiseuxPoly q = residue_lift(R, p);
      for (int i = 0; i < p.degree(); ++i) q.mutable_coeffs()[static_cast<std::size_t>(i)] += gen.series(L, 1, 3 * L, 2);
      return q;
    };
    const PuiseuxPoly f = perturb(gb) * perturb(hb);
    const long N = 6 * L;
    HenselOptions opt;
    opt.check_key_congruence = true;
    const auto res = hensel_lift(f, residue_lift(R, gb), residue_lift(R, hb), N, opt);
    ++done;
    REQUIRE(res.achieved >= N);
    REQUIRE(res.g_hat.degree() == m);
    REQUIRE(res.h_hat.degree() == d - m);
    REQUIRE(res.g_hat.is_monic());
    REQUIRE(res.h_hat.is_monic());
    REQUIRE(max_coefficient_deviation(reduce_residue(res.g_hat), gb) < bits(-100));
    REQUIRE(max_coefficient_deviation(reduce_residue(res.h_hat), hb) < bits(-100));
    for (const auto& s : res.steps) {
      REQUIRE(s.defect_order >= s.n + 1);
      REQUIRE(s.p_bar.degree() < m);
      REQUIRE(s.q_bar.degree() < d - m);
    }
    // Rounding grows with alpha^(-N) through the twisted residues.
    const BigReal cond = pow2(2 * N);
    REQUIRE(close(res.g_hat * res.h_hat, f, Valuation(Rational(N, L)), cond));
  }
  CHECK(done == 25);
}

TEST_CASE("identity automorphism reduces to classical coprimality") {
  const auto R = ring_for("1");
  Gen gen(52);
  for (int n = 0; n < 200; ++n) {
    std::vector<BigComplex> rg{gen.complex(2)}, rh{gen.complex(2), gen.complex(2)};
    if (gen.coin()) rh[0] = rg[0];
    const ResiduePoly gb = from_roots(rg), hb = from_roots(rh);
    const bool classical = ext_gcd(gb, hb).coprime();
    const TwistCheck tc = R->twist_check(gb, hb);
    REQUIRE(std::holds_alternative<CoprimeForAllN>(tc) == classical);
    if (!classical) REQUIRE(std::get<FailsAt>(tc).n == 1);
  }
  // (t - 1)(t - 2) + x lifts classically.
  const PuiseuxPoly f = poly("t^2 - 3*t + 2 + x", R);
  const auto res = hensel_lift(f, poly("t - 1", R), poly("t - 2", R), 10);
  CHECK(poly_diff(res.g_hat * res.h_hat, f, Valuation(10)) < bits(-96));
}

TEST_CASE("lifting rejects inputs it cannot handle") {
  const auto R = ring_for("2");
  const PuiseuxPoly f = poly("t^2 - (2+x)*t + (1+2*x) + O(x^5)", R);
  CHECK_THROWS_AS(hensel_lift(f, poly("t - 1", R), poly("t - 1", R), 8), PrecisionExhausted);
  CHECK_NOTHROW(hensel_lift(f, poly("t - 1", R), poly("t - 1", R), 5));
  CHECK_THROWS_AS(hensel_lift(poly("t^2 - 3*t + 2", R), poly("t - 1", R), poly("t - 1", R), 4), DomainError);
  CHECK_THROWS_AS(hensel_lift(poly("t^2 + x^(-1)", R), poly("t", R), poly("t", R), 4), DomainError);
}
