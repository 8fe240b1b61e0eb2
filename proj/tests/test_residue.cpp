#include "doctest.h"
#include "support.hpp"

using namespace skewnp;
using namespace skewnp::testing;

namespace {

ResiduePoly rp(std::initializer_list<long> c) {
  std::vector<BigComplex> v;
  for (long x : c) v.emplace_back(x);
  return ResiduePoly(std::move(v));
}

BigComplex cq(long n, long d = 1) { return BigComplex(Rational(n, d)); }
const BigReal& tight() {
  static const BigReal t = pow2(-static_cast<long>(working_bits()) + 16);
  return t;
}

}  // namespace

TEST_CASE("roots of small polynomials") {
  const RootsResult a = roots(rp({1, -2, 1}));
  REQUIRE(a.clusters.size() == 1);
  CHECK(a.clusters[0].multiplicity == 2);
  CHECK(abs_diff(a.clusters[0].root, BigComplex(1)) < tight());

  const RootsResult b = roots(rp({1, 0, 1}));
  REQUIRE(b.clusters.size() == 2);
  bool has_i = false, has_minus_i = false;
  for (const auto& c : b.clusters) {
    has_i = has_i || abs_diff(c.root, imaginary_unit()) < tight();
    has_minus_i = has_minus_i || abs_diff(c.root, -imaginary_unit()) < tight();
  }
  CHECK(has_i);
  CHECK(has_minus_i);

  const RootsResult c = roots(ResiduePoly::t_power(5));
  REQUIRE(c.clusters.size() == 1);
  CHECK(c.clusters[0].multiplicity == 5);
  CHECK(c.clusters[0].root.is_zero());
}

TEST_CASE("roots re-expand to the polynomial") {
  Gen gen(21);
  for (int n = 0; n < 200; ++n) {
    const int d = static_cast<int>(gen.integer(1, 7));
    std::vector<BigComplex> rs;
    for (int i = 0; i < d; ++i) {
      // Repeated roots are common in residues.
      if (i > 0 && gen.integer(0, 3) == 0) rs.push_back(rs.back());
      else rs.push_back(gen.complex(4));
    }
    const ResiduePoly p = ResiduePoly::from_roots(rs);
    const RootsResult r = roots(p);
    REQUIRE(r.total_multiplicity() == d);
    const ResiduePoly back = ResiduePoly::from_roots(r.flat());
    REQUIRE(max_coefficient_deviation(back, p) <= default_cluster_tol() * (1 + p.norm_inf()));
  }
}

TEST_CASE("extended gcd") {
  const GcdResult g = ext_gcd(rp({-1, 1}), rp({-2, 1}));
  REQUIRE(g.coprime());
  // (t-1) - (t-2) = 1
  CHECK(max_coefficient_deviation(g.a, ResiduePoly::constant(BigComplex(1))) < tight());
  CHECK(max_coefficient_deviation(g.b, ResiduePoly::constant(BigComplex(-1))) < tight());

  const ResiduePoly p = rp({2, -3, 1});
  CHECK(ext_gcd(p, p).g.degree() == 2);
  const ResiduePoly ti({imaginary_unit(), BigComplex(1)});
  CHECK_FALSE(ext_gcd(ti, ti).coprime());

  Gen gen(22);
  for (int n = 0; n < 200; ++n) {
    std::vector<BigComplex> r1, r2;
    for (int i = 0; i < gen.integer(1, 4); ++i) r1.push_back(gen.complex(6));
    for (int i = 0; i < gen.integer(1, 4); ++i) r2.push_back(gen.complex(6) + BigComplex(Rational(1, 13)));
    const ResiduePoly a = ResiduePoly::from_roots(r1), b = ResiduePoly::from_roots(r2);
    const GcdResult e = ext_gcd(a, b);
    REQUIRE(e.coprime());
    const ResiduePoly one = e.a * a + e.b * b;
    REQUIRE(max_coefficient_deviation(one, ResiduePoly::constant(BigComplex(1))) <=
            pow2(-static_cast<long>(working_bits() / 2)) * e.condition);
  }
}

TEST_CASE("twist of residues") {
  const TMap T{BigComplex(2), BigComplex(0), false};
  const ResiduePoly p = rp({-1, 1});
  CHECK(max_coefficient_deviation(twist_residue(p, 0, T), p) == 0);
  const ResiduePoly q = twist_residue(p, 1, T);
  CHECK(max_coefficient_deviation(q, ResiduePoly({BigComplex(-1), cq(1, 2)})) < tight());

  Gen gen(23);
  for (int n = 0; n < 200; ++n) {
    const TMap U{BigComplex(gen.integer(2, 5)), gen.real(3), false};
    std::vector<BigComplex> rs;
    for (int i = 0; i < gen.integer(1, 4); ++i) rs.push_back(gen.complex(3));
    const ResiduePoly f = ResiduePoly::from_roots(rs);
    const long m = gen.integer(0, 4), k = gen.integer(0, 4);
    const ResiduePoly lhs = twist_residue(twist_residue(f, m, U), k, U);
    const ResiduePoly rhs = twist_residue(f, m + k, U);
    REQUIRE(max_coefficient_deviation(lhs, rhs) <= tight() * (1 + rhs.norm_inf()));
  }
}

TEST_CASE("orbit partition examples") {
  const TMap T{BigComplex(2), BigComplex(0), false};
  const OrbitPartition p = orbit_partition({cq(1), cq(1, 2), cq(3)}, cq(1), T, default_orbit_tol());
  CHECK(p.j() == 2);
  REQUIRE(p.outsiders.size() == 1);
  CHECK(abs_diff(p.outsiders[0], cq(3)) < tight());

  const TMap id{BigComplex(1), BigComplex(0), true};
  CHECK(orbit_partition({cq(1), cq(1, 2), cq(3)}, cq(1), id, default_orbit_tol()).j() == 1);
  CHECK(orbit_partition({cq(1), cq(1)}, cq(1), T, default_orbit_tol()).j() == 2);
}

TEST_CASE("orbit membership agrees with explicit iteration of T") {
  // Exact iteration of T(w) = w/2 - a0/2 over Gaussian rationals.
  Gen gen(24);
  auto exact = [&] { return GaussianRational(gen.rational(4), gen.coin() ? gen.rational(4) : Rational(0)); };
  int members = 0;
  for (long a0 : {0L, 1L}) {
    const TMap T{BigComplex(2), BigComplex(a0), false};
    auto step = [&](const GaussianRational& w) {
      return GaussianRational((w.re - a0) / 2, w.im / 2);
    };
    for (int n = 0; n < 200; ++n) {
      const GaussianRational c1 = exact();
      // Half the candidates are built on the orbit so both outcomes occur.
      GaussianRational c = c1;
      if (gen.coin()) {
        for (long k = gen.integer(0, 20); k > 0; --k) c = step(c);
      } else {
        c = exact();
      }
      bool brute = false;
      GaussianRational w = c1;
      for (long k = 0; k <= 64 && !brute; ++k) {
        brute = w == c;
        w = step(w);
      }
      const bool closed = orbit_exponent(c.to_complex(), c1.to_complex(), T, default_orbit_tol()).has_value();
      REQUIRE(closed == brute);
      members += brute;
    }
  }
  CHECK(members > 100);
}

TEST_CASE("twist coprimality over all n") {
  const TMap T2{BigComplex(2), BigComplex(0), false};
  const TMap T1{BigComplex(1), BigComplex(0), true};
  const ResiduePoly g = rp({-1, 1});
  CHECK(std::holds_alternative<CoprimeForAllN>(twist_coprime_check_affine(g, g, T2, default_orbit_tol())));
  const TwistCheck fails = twist_coprime_check_affine(g, g, T1, default_orbit_tol());
  REQUIRE(std::holds_alternative<FailsAt>(fails));
  CHECK(std::get<FailsAt>(fails).n == 1);

  // g has root 2, h has root 1 = T(2): fails at n = 1; root 1/2 = T^2(2) fails at n = 2.
  const TwistCheck f1 = twist_coprime_check_affine(rp({-2, 1}), rp({-1, 1}), T2, default_orbit_tol());
  REQUIRE(std::holds_alternative<FailsAt>(f1));
  CHECK(std::get<FailsAt>(f1).n == 1);
  const TwistCheck f2 =
      twist_coprime_check_affine(rp({-2, 1}), ResiduePoly({cq(-1, 2), cq(1)}), T2, default_orbit_tol());
  REQUIRE(std::holds_alternative<FailsAt>(f2));
  CHECK(std::get<FailsAt>(f2).n == 2);
}

TEST_CASE("twist check agrees with gcd of explicit twists") {
  Gen gen(25);
  for (int n = 0; n < 200; ++n) {
    const Rational alphas[] = {Rational(2), Rational(3), Rational(3, 2), Rational(1, 2)};
    const TMap T{BigComplex(alphas[gen.integer(0, 3)]), BigComplex(gen.integer(0, 1)), false};
    std::vector<BigComplex> rg{gen.real(4)}, rh{gen.real(4)};
    if (gen.coin()) rh[0] = T.apply(rg[0], gen.integer(1, 6));
    const ResiduePoly g = ResiduePoly::from_roots(rg), h = ResiduePoly::from_roots(rh);
    const TwistCheck fast = twist_coprime_check_affine(g, h, T, default_orbit_tol());
    std::optional<long> slow;
    // Past a dozen twists alpha^k swamps the gcd tolerance.
    for (long k = 1; k <= 12 && !slow; ++k)
      if (!ext_gcd(g, twist_residue(h, k, T).monic()).coprime()) slow = k;
    if (slow) {
      REQUIRE(std::holds_alternative<FailsAt>(fast));
      REQUIRE(std::get<FailsAt>(fast).n == *slow);
    } else {
      REQUIRE(std::holds_alternative<CoprimeForAllN>(fast));
    }
  }
}

TEST_CASE("delta set diagnostics") {
  CHECK(std::holds_alternative<DeltaMember>(delta_set_member(BigComplex(0), BigComplex(1), BigReal(2), 3, 6)));
  CHECK(std::holds_alternative<DeltaNonMember>(delta_set_member(BigComplex(1), BigComplex(0), BigReal(2), 3, 6)));
  // c / a0 negative is outside the non-negative set for alpha > 1.
  CHECK(std::holds_alternative<DeltaNonMember>(delta_set_member(BigComplex(-1), BigComplex(1), BigReal(2), 2, 6)));
  // a0 (2 / (1 + 1/2) - 1) = 1/3 for a0 = 1, n = (0, 1).
  const DeltaResult m = delta_set_member(cq(1, 3), BigComplex(1), BigReal(2), 2, 6);
  REQUIRE(std::holds_alternative<DeltaMember>(m));
}

TEST_CASE("Gamma elements have the sign fixed by alpha") {
  // Gamma = { d / (alpha^(-n_1) + ... + alpha^(-n_d)) - 1 }.
  for (const char* a : {"2", "1/2", "1"}) {
    const BigReal al = to_real(parse_scalar(a).re);
    for (int d = 1; d <= 3; ++d) {
      std::vector<int> n(static_cast<std::size_t>(d), 0);
      for (;;) {
        BigReal s(0);
        for (int k : n) s += boost::multiprecision::pow(al, -k);
        const BigReal gamma = BigReal(d) / s - 1;
        if (al > 1) REQUIRE(gamma >= -tight());
        else if (al < 1) REQUIRE(gamma <= tight());
        else REQUIRE(boost::multiprecision::abs(gamma) <= tight());
        std::size_t i = 0;
        while (i < n.size() && ++n[i] > 6) n[i++] = 0;
        if (i == n.size()) break;
      }
    }
  }
}
