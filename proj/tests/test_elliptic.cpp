#include <sstream>

#include "doctest.h"
#include "isobound/elliptic.hpp"

using namespace isobound::elliptic;

namespace {

// slow oracle: Legendre-free point count on the full model for odd p
long ap_oracle(const WeierstrassCurve& E, unsigned long p) {
  WeierstrassCurve Em = minimal_at(E, p);
  long a1 = mpz_fdiv_ui(Em.a1.get_mpz_t(), p), a2 = mpz_fdiv_ui(Em.a2.get_mpz_t(), p);
  long a3 = mpz_fdiv_ui(Em.a3.get_mpz_t(), p), a4 = mpz_fdiv_ui(Em.a4.get_mpz_t(), p);
  long a6 = mpz_fdiv_ui(Em.a6.get_mpz_t(), p);
  long q = (long)p, n = 1;  // the point at infinity
  for (long x = 0; x < q; ++x)
    for (long y = 0; y < q; ++y) {
      long lhs = (y * y + a1 * x * y + a3 * y) % q;
      long rhs = (((x * x % q) * x % q) + a2 * x % q * x + a4 * x + a6) % q;
      if (lhs == rhs % q) ++n;
    }
  return q + 1 - n;
}

const WeierstrassCurve e11a1 = curve(0, -1, 1, -10, -20, "11a1");
const WeierstrassCurve e14a1 = curve(1, 0, 1, 4, -6, "14a1");
const WeierstrassCurve cube1 = curve(0, 0, 0, 0, 1);   // y^2 = x^3 + 1
const WeierstrassCurve congr = curve(0, 0, 0, -1, 0);  // y^2 = x^3 - x
const WeierstrassCurve nocm = curve(0, 0, 0, 1, 1);    // y^2 = x^3 + x + 1

}  // namespace

TEST_CASE("invariants") {
  CurveInvariants v = invariants(cube1);
  CHECK(v.disc == -432);
  CHECK(v.c4 == 0);
  CHECK(v.j == 0);
  CurveInvariants w = invariants(congr);
  CHECK(w.disc == 64);
  CHECK(w.j == 1728);
  CHECK_THROWS_AS(invariants(curve(0, 0, 0, 0, 0)), SingularCurve);
  CurveInvariants u = invariants(e11a1);
  mpz_class d;
  mpz_pow_ui(d.get_mpz_t(), mpz_class(11).get_mpz_t(), 5);
  CHECK(u.disc == -d);
}

TEST_CASE("trace of Frobenius basics") {
  CHECK(ap(e11a1, 3) == -1);
  CHECK(ap(e14a1, 3) == -2);
  CHECK(ap(cube1, 5) == 0);
  CHECK_THROWS_AS(ap(e11a1, 11), BadReduction);
  try {
    ap(e11a1, 11);
  } catch (const BadReduction& b) {
    CHECK(b.p == 11);
  }
  CHECK_THROWS_AS(ap(e11a1, 1000003, 1000000), CapExceeded);
}

TEST_CASE("ap agrees with the full-model point count and satisfies Hasse") {
  for (unsigned long p : {3ul, 5ul, 7ul, 13ul, 17ul, 97ul, 101ul, 997ul}) {
    for (const auto* E : {&e11a1, &e14a1, &nocm}) {
      if (!good_reduction_at(*E, p)) continue;
      long a = ap(*E, p);
      CHECK(a == ap_oracle(*E, p));
      CHECK((double)a * a <= 4.0 * p);
    }
  }
}

TEST_CASE("ap and radical are model independent") {
  // (x, y) -> (x/u^2, y/u^3) scaled models of 11a1: a_i' = u^i a_i
  for (long u : {2L, 3L, 6L}) {
    WeierstrassCurve big;
    big.a1 = e11a1.a1 * u;
    big.a2 = e11a1.a2 * u * u;
    big.a3 = e11a1.a3 * u * u * u;
    big.a4 = e11a1.a4 * u * u * u * u;
    big.a6 = e11a1.a6 * u * u * u * u * u * u;
    for (unsigned long p : {2ul, 3ul, 5ul, 7ul, 13ul}) CHECK(ap(big, p) == ap(e11a1, p));
    CHECK(bad_primes_radical(big) == 11);
  }
}

TEST_CASE("bad-prime radicals") {
  CHECK(bad_primes_radical(e11a1) == 11);
  CHECK(bad_primes_radical(congr) == 2);
  CHECK(bad_primes_radical(cube1) == 6);
  CHECK(bad_primes_radical(e14a1) == 14);
  WeierstrassCurve withN = e11a1;
  withN.conductor = 11;
  CHECK(bad_primes_radical(withN) == 11);
  // a conductor inconsistent with the discriminant is rejected
  withN.conductor = 12;
  CHECK_THROWS_AS(bad_primes_radical(withN), std::runtime_error);
}

TEST_CASE("mod-2 image classes follow the 2-division cubic") {
  Mod2Class a = mod2_image_class(congr);  // x^3 - x splits
  CHECK(a.image == Mod2Image::Trivial);
  CHECK_FALSE(a.absolutely_irreducible);
  Mod2Class b = mod2_image_class(curve(0, 0, 0, 0, -2));  // x^3 - 2
  CHECK(b.image == Mod2Image::Full);
  CHECK(b.absolutely_irreducible);
  CHECK_FALSE(b.cubic_disc_is_square);
  Mod2Class c = mod2_image_class(curve(0, 0, 0, -3, -1));  // x^3 - 3x - 1 cyclic
  CHECK(c.image == Mod2Image::OrderThree);
  CHECK(c.cubic_disc_is_square);
  CHECK_FALSE(c.absolutely_irreducible);
  Mod2Class d = mod2_image_class(nocm);  // x^3 + x + 1 irreducible, disc -31
  CHECK(d.image == Mod2Image::Full);
}

TEST_CASE("quadratic twist construction") {
  WeierstrassCurve tw = quadratic_twist(nocm, 2);
  CHECK(tw.a1 == 0);
  CHECK(tw.a2 == 0);
  CHECK(tw.a3 == 0);
  CHECK(tw.a4 == 4);
  CHECK(tw.a6 == 8);
  CHECK_THROWS_AS(quadratic_twist(nocm, 4), std::invalid_argument);   // not squarefree
  CHECK_THROWS_AS(quadratic_twist(nocm, 0), std::invalid_argument);
  // twist invariants scale as (d^2 c4, d^3 c6)
  CurveInvariants v0 = invariants(nocm), v2 = invariants(tw);
  mpq_class r4 = mpq_class(v2.c4) / mpq_class(v0.c4);
  mpq_class r6 = mpq_class(v2.c6) / mpq_class(v0.c6);
  r4.canonicalize();
  r6.canonicalize();
  mpq_class u2 = r6 / r4;  // = d u^2
  u2.canonicalize();
  CHECK(sgn(u2) > 0);
}

TEST_CASE("twisted traces follow the quadratic character") {
  for (long d : {-1L, 2L, -2L, 3L, -3L, 5L}) {
    WeierstrassCurve tw = quadratic_twist(e11a1, d);
    mpz_class alld = mpz_class(d) * invariants(e11a1).disc * invariants(tw).disc;
    mpz_class pz(2);
    while (true) {
      mpz_nextprime(pz.get_mpz_t(), pz.get_mpz_t());
      if (cmp(pz, 200) > 0) break;
      unsigned long p = pz.get_ui();
      if (mpz_divisible_ui_p(alld.get_mpz_t(), p)) continue;
      int chi = mpz_legendre(mpz_class(d).get_mpz_t(), pz.get_mpz_t());
      CHECK(ap(tw, p) == chi * ap(e11a1, p));
    }
  }
}

TEST_CASE("twist detection") {
  for (long d : {-1L, 2L, -3L, 5L, 13L}) {
    TwistCheck tc = is_quadratic_twist(e11a1, quadratic_twist(e11a1, d));
    CHECK(tc.decision == TwistDecision::Twist);
    CHECK(tc.d == d);
  }
  CHECK(is_quadratic_twist(e11a1, e14a1).decision == TwistDecision::NotTwist);
  // j = 0 pair that is a sextic but not a quadratic twist
  CHECK(is_quadratic_twist(cube1, curve(0, 0, 0, 0, 2)).decision == TwistDecision::NotTwist);
  // j = 0 honest quadratic twist
  TwistCheck t0 = is_quadratic_twist(cube1, quadratic_twist(cube1, -3));
  CHECK(t0.decision == TwistDecision::Twist);
  CHECK(t0.d == -3);
  // j = 1728 cases; the -1 twist is isomorphic to the curve itself
  CHECK(is_quadratic_twist(congr, quadratic_twist(congr, -2)).decision == TwistDecision::Twist);
  CHECK(is_quadratic_twist(congr, quadratic_twist(congr, -1)).decision == TwistDecision::Twist);
  CHECK(curves_isomorphic_q(congr, quadratic_twist(congr, -1)));
}

TEST_CASE("isomorphism over Q") {
  CHECK(curves_isomorphic_q(e11a1, e11a1));
  WeierstrassCurve big;
  big.a1 = e11a1.a1 * 5;
  big.a2 = e11a1.a2 * 25;
  big.a3 = e11a1.a3 * 125;
  big.a4 = e11a1.a4 * 625;
  big.a6 = e11a1.a6 * 15625;
  CHECK(curves_isomorphic_q(e11a1, big));
  CHECK_FALSE(curves_isomorphic_q(e11a1, e14a1));
  CHECK_FALSE(curves_isomorphic_q(e11a1, quadratic_twist(e11a1, -1)));
}

TEST_CASE("mod-2 isomorphism grades") {
  CHECK(mod2_isomorphic(e11a1, e11a1) == Mod2IsoGrade::Isomorphic);
  // twists have identical mod-2 representations: affine certificate
  for (long d : {-1L, 2L, -3L, 17L})
    CHECK(mod2_isomorphic(e11a1, quadratic_twist(e11a1, d)) == Mod2IsoGrade::Isomorphic);
  // split vs split
  CHECK(mod2_isomorphic(congr, curve(0, 0, 0, -4, 0)) == Mod2IsoGrade::Isomorphic);
  // image mismatch
  CHECK(mod2_isomorphic(congr, curve(0, 0, 0, 0, -2)) == Mod2IsoGrade::NotIsomorphic);
  // same Full image, different splitting fields (x^3 - 2 vs x^3 - 3)
  CHECK(mod2_isomorphic(curve(0, 0, 0, 0, -2), curve(0, 0, 0, 0, -3)) ==
        Mod2IsoGrade::NotIsomorphic);
  // pure-cubic certificate: x^3 - 2 vs x^3 - 16 share a splitting field
  CHECK(mod2_isomorphic(curve(0, 0, 0, 0, -2), curve(0, 0, 0, 0, -16)) ==
        Mod2IsoGrade::Isomorphic);
}

TEST_CASE("distinguishing primes") {
  auto r = distinguishing_prime(e11a1, e14a1, 1000);
  REQUIRE(r.has_value());
  CHECK(r->p == 3);
  CHECK(r->ap_E == -1);
  CHECK(r->ap_Eprime == -2);
  CHECK_FALSE(distinguishing_prime(e11a1, e11a1, 1000).has_value());
  auto s = distinguishing_prime(e11a1, quadratic_twist(e11a1, -1), 1000);
  REQUIRE(s.has_value());
  CHECK(s->ap_E == -s->ap_Eprime);
}

TEST_CASE("CM and exceptional-j membership") {
  CmFiniteJFlags f0 = cm_and_finite_j_check(cube1);  // j = 0
  CHECK(f0.is_cm_j);
  CHECK_FALSE(f0.in_rzb_finite_list);
  CmFiniteJFlags f1 = cm_and_finite_j_check(congr);  // j = 1728
  CHECK(f1.is_cm_j);
  CHECK_FALSE(f1.in_rzb_finite_list);
  CmFiniteJFlags f2 = cm_and_finite_j_check(nocm);  // j = 6912/31
  CHECK_FALSE(f2.is_cm_j);
  CHECK_FALSE(f2.in_rzb_finite_list);

  // generic-j model [1, 0, 0, -36/(j-1728), -1/(j-1728)] scaled by
  // u = j - 1728 into an integral curve; j = 2^11 sits on the finite list
  mpz_class u = 2048 - 1728;
  WeierstrassCurve ej;
  ej.a1 = u;
  ej.a4 = -36 * u * u * u;
  ej.a6 = -u * u * u * u * u;
  CHECK(invariants(ej).j == 2048);
  CmFiniteJFlags f3 = cm_and_finite_j_check(ej);
  CHECK_FALSE(f3.is_cm_j);
  CHECK(f3.in_rzb_finite_list);

  // same construction at j = -3375 (CM) and j = 257^3/2^8 (finite list)
  auto from_j = [](const mpq_class& j) {
    mpq_class t = j - 1728;
    mpz_class u2 = t.get_num() * t.get_den();
    WeierstrassCurve e;
    mpq_class a4 = -36 * u2 * u2 * u2 * u2 / t, a6 = -(u2 * u2 * u2 * u2 * u2 * u2) / t;
    a4.canonicalize();
    a6.canonicalize();
    e.a1 = u2;
    e.a4 = a4.get_num();
    e.a6 = a6.get_num();
    REQUIRE(a4.get_den() == 1);
    REQUIRE(a6.get_den() == 1);
    return e;
  };
  CmFiniteJFlags f4 = cm_and_finite_j_check(from_j(mpq_class(-3375)));
  CHECK(f4.is_cm_j);
  CHECK_FALSE(f4.in_rzb_finite_list);
  mpq_class j5(16974593, 256);
  j5.canonicalize();
  WeierstrassCurve e5 = from_j(j5);
  CHECK(invariants(e5).j == j5);
  CmFiniteJFlags f5 = cm_and_finite_j_check(e5);
  CHECK_FALSE(f5.is_cm_j);
  CHECK(f5.in_rzb_finite_list);
}

TEST_CASE("curve file parsing") {
  std::istringstream in("# sample\n11a1 0 -1 1 -10 -20 11\n14a1 1 0 1 4 -6\n");
  auto v = parse_curve_file(in);
  REQUIRE(v.size() == 2);
  CHECK(v[0].label == "11a1");
  REQUIRE(v[0].conductor.has_value());
  CHECK(*v[0].conductor == 11);
  CHECK_FALSE(v[1].conductor.has_value());
  std::istringstream bad("x 1 2 3\n");
  CHECK_THROWS_AS(parse_curve_file(bad), std::invalid_argument);
}

TEST_CASE("radical and squarefree helpers") {
  CHECK(radical_of(mpz_class(-161051)) == 11);
  CHECK(radical_of(mpz_class(1)) == 1);
  CHECK(squarefree_part(mpz_class(72)) == 2);
  CHECK(squarefree_part(mpz_class(-50)) == -2);
  mpz_class big = mpz_class("1000000007") * mpz_class("1000000009");
  CHECK(radical_of(big) == big);
}

TEST_CASE("minimal_at recovers minimality from blown-up models") {
  for (unsigned long p : {2ul, 3ul}) {
    WeierstrassCurve big;
    long u = (long)p;
    big.a1 = e14a1.a1 * u;
    big.a2 = e14a1.a2 * u * u;
    big.a3 = e14a1.a3 * u * u * u;
    big.a4 = e14a1.a4 * u * u * u * u;
    big.a6 = e14a1.a6 * u * u * u * u * u * u;
    WeierstrassCurve m = minimal_at(big, p);
    CHECK(invariants(m).disc == invariants(e14a1).disc);
  }
}
