#include "doctest.h"
#include "isobound/pipeline.hpp"
#include "oracle_values.hpp"

using namespace isobound;
using namespace isobound::pipeline;

TEST_CASE("case bounds at the pinned radicals") {
  PairCase m2d{PairCase::Mod2Distinct, ""};
  PairCase abi{PairCase::Mod2IsoAbsIrred, ""};
  PairCase twc{PairCase::QuadraticTwistNonCM, ""};
  PairCase gen{PairCase::Generic, ""};
  CHECK(isogeny_bound(m2d, mpz_class(154)).bound ==
        oracle().at("bound_mod2distinct_rad154").get<long>());
  CHECK(isogeny_bound(abi, mpz_class(154)).bound ==
        oracle().at("bound_mod2distinct_rad154").get<long>());
  CHECK(isogeny_bound(twc, mpz_class(154)).bound == oracle().at("bound_twist_rad154").get<long>());
  CHECK(isogeny_bound(gen, mpz_class(2)).bound == oracle().at("bound_generic_rad2").get<long>());
  CHECK(isogeny_bound(gen, mpz_class(154)).bound ==
        oracle().at("bound_generic_rad154").get<long>());
  CHECK(isogeny_bound(m2d, mpz_class(154)).formula_id == "(124 ln rad + 561)^2");
  CHECK(isogeny_bound(twc, mpz_class(154)).formula_id == "(223 ln rad + 1127)^2");
  CHECK(isogeny_bound(gen, mpz_class(154)).formula_id == "(482 ln rad + 2880)^2");
}

TEST_CASE("deviation order refines the bound through the collapsed table") {
  PairCase m2d{PairCase::Mod2Distinct, ""};
  PairCase gen{PairCase::Generic, ""};
  BoundReport dr = isogeny_bound(m2d, mpz_class(154), 24);
  CHECK(dr.bound == oracle().at("prop_delta24_rad154").get<long>());
  CHECK(dr.formula_id == "collapsed[n=48]");
  // 2*65 = 130 exceeds the table range, the envelope is kept
  BoundReport dr2 = isogeny_bound(m2d, mpz_class(154), 65);
  CHECK(dr2.bound == oracle().at("bound_mod2distinct_rad154").get<long>());
  CHECK(dr2.formula_id == "(124 ln rad + 561)^2");
  // collapsed n=128 beats the generic envelope
  BoundReport dr3 = isogeny_bound(gen, mpz_class(154), 64);
  CHECK(dr3.bound < oracle().at("bound_generic_rad154").get<long>());
  CHECK(dr3.formula_id == "collapsed[n=128]");
}

TEST_CASE("isogeny_bound validates its inputs") {
  PairCase m2d{PairCase::Mod2Distinct, ""};
  CHECK_THROWS_AS(isogeny_bound(m2d, mpz_class(77)), std::invalid_argument);   // odd radical
  CHECK_THROWS_AS(isogeny_bound(m2d, mpz_class(154), 0), std::invalid_argument);
}

TEST_CASE("adelic index constants at conductor 11") {
  auto e11 = elliptic::curve(0, -1, 1, -10, -20, "11a1");
  SerreReport sr = serre_bound(e11);
  CHECK(sr.rad2N == 22);
  CHECK(sr.c_e_bound_improved == oracle().at("serre_improved_N11").get<long>());
  CHECK(sr.c_e_bound_mw == oracle().at("serre_mw_N11").get<long>());
  CHECK_FALSE(sr.finite_j_shortcut);
  // CM curves carry no such constant
  CHECK_THROWS_AS(serre_bound(elliptic::curve(0, 0, 0, 0, 1, "36a1")), std::invalid_argument);
}

TEST_CASE("even pair radical") {
  CHECK(even_pair_radical(mpz_class(11), mpz_class(14)) == 154);
  CHECK(even_pair_radical(mpz_class(26), mpz_class(26)) == 26);
  CHECK(even_pair_radical(mpz_class(3), mpz_class(5)) == 30);
  CHECK(even_pair_radical(mpz_class(37), mpz_class(37)) == 74);
}

TEST_CASE("the classic pair end to end") {
  auto e11 = elliptic::curve(0, -1, 1, -10, -20, "11a1");
  auto e14 = elliptic::curve(1, 0, 1, 4, -6, "14a1");
  BoundReport rep = verify_pair(e11, e14);
  CHECK(rep.pair_case.kind == PairCase::Mod2Distinct);
  CHECK(rep.rad2NN == 154);
  CHECK(rep.bound == oracle().at("bound_mod2distinct_rad154").get<long>());
  CHECK(rep.outcome == VerifyOutcome::Verified);
  REQUIRE(rep.verified_prime.has_value());
  CHECK(rep.verified_prime->p == 3);
  CHECK(rep.verified_prime->ap_E == -1);
  CHECK(rep.verified_prime->ap_Eprime == -2);
}

TEST_CASE("a truncated self-pair search is reported honestly") {
  auto e11 = elliptic::curve(0, -1, 1, -10, -20, "11a1");
  BoundReport self = verify_pair(e11, e11, 50);
  CHECK(self.outcome == VerifyOutcome::IsogenousOrIndistinguishable);
  CHECK_FALSE(self.verified_prime.has_value());
}

TEST_CASE("verification corpus: classification is swap stable, all pairs verify") {
  REQUIRE(verification_corpus().size() >= 20);
  int ncase[4] = {0, 0, 0, 0};
  for (const auto& [A, B] : verification_corpus()) {
    INFO(A.label, " / ", B.label);
    PairCase c1 = classify_pair(A, B), c2 = classify_pair(B, A);
    CHECK(c1.kind == c2.kind);
    ++ncase[int(c1.kind)];
    BoundReport r = verify_pair(A, B);
    CHECK(r.outcome == VerifyOutcome::Verified);
    REQUIRE(r.verified_prime.has_value());
    CHECK(mpz_class(long(r.verified_prime->p)) <= r.bound);
    BoundReport rswap = verify_pair(B, A);
    CHECK(rswap.bound == r.bound);
    CHECK(rswap.rad2NN == r.rad2NN);
    REQUIRE(rswap.verified_prime.has_value());
    CHECK(rswap.verified_prime->p == r.verified_prime->p);
  }
  // every specialized case is exercised
  CHECK(ncase[0] >= 1);
  CHECK(ncase[1] >= 1);
  CHECK(ncase[2] >= 1);
  CHECK(ncase[3] >= 1);
}

TEST_CASE("case bounds are ordered across radicals") {
  PairCase m2d{PairCase::Mod2Distinct, ""};
  PairCase twc{PairCase::QuadraticTwistNonCM, ""};
  PairCase gen{PairCase::Generic, ""};
  for (long rad : {2L, 6L, 22L, 154L, 1002L, 39270L}) {
    mpz_class r(rad);
    mpz_class b1 = isogeny_bound(m2d, r).bound;
    mpz_class b2 = isogeny_bound(twc, r).bound;
    mpz_class b3 = isogeny_bound(gen, r).bound;
    CHECK(b1 <= b2);
    CHECK(b2 <= b3);
  }
}
