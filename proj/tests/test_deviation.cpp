#include <sstream>

#include "doctest.h"
#include "isobound/deviation.hpp"

using namespace isobound;
using deviation::RepPair;
using z2k::Mat2;

namespace {

Mat2 mk(unsigned k, long a, long b, long c, long d) {
  const long mod = 1l << k;
  auto r = [mod](long x) { return uint32_t(((x % mod) + mod) % mod); };
  return Mat2{k, {r(a), r(b), r(c), r(d)}};
}

}  // namespace

TEST_CASE("worked example: trivial vs sign of C2 mod 8") {
  const unsigned k = 3;
  groups::FiniteGroup C2 = groups::cyclic_group(2);
  const Mat2 I = Mat2::identity(k);
  const size_t e = C2.identity(), g = 1 - e;
  std::vector<std::pair<Mat2, Mat2>> im(2);
  im[e] = {I, I};
  im[g] = {I, I.neg()};
  RepPair rp = deviation::make_rep_pair(k, C2, im);

  deviation::ModuleBasis M = deviation::algebra_closure(rp);
  CHECK(M.rank() == 2);
  REQUIRE(M.rank_profile.size() == 3);
  CHECK(M.rank_profile[0] == 1);
  CHECK(M.rank_profile[1] == 1);
  CHECK(M.rank_profile[2] == 0);

  deviation::DeviationGroup D = deviation::deviation_group(rp);
  CHECK(D.delta.order() == 2);
  CHECK(D.proj[e] != D.proj[g]);
  REQUIRE(D.labels.size() == 2);
  CHECK(D.labels[0] != D.labels[1]);

  auto alpha = deviation::compute_alpha(rp);
  REQUIRE(alpha.has_value());
  CHECK(*alpha == 2);

  deviation::AlphaBeta ab = deviation::compute_beta(rp);
  REQUIRE(ab.alpha.has_value());
  CHECK(*ab.alpha == 2);
  REQUIRE(ab.beta.has_value());
  CHECK(*ab.beta == 1);
  REQUIRE(ab.conjugator.has_value());
  CHECK(ab.conjugator->k == 1);
  CHECK(ab.conjugator->invertible());

  deviation::PhiImage phi = deviation::phi_map(rp, ab);
  CHECK(phi.image.order() == 2);
  CHECK(phi.equal_determinants);
  CHECK(phi.trace_zero);
  CHECK(phi.values[e].a == 0);
  CHECK(phi.values[e].b == 9);
  CHECK(phi.values[g].a == 9);  // theta = I
  CHECK(phi.values[g].b == 9);  // rho1 = I

  deviation::DistinguishingClass C = deviation::distinguishing_class(rp);
  CHECK(C.where == deviation::ClassHome::Delta);  // residual not absolutely irreducible
  CHECK(C.alpha == 2);
  REQUIRE(C.delta_class.size() == 1);
  CHECK(C.delta_class[0] == D.proj[g]);
}

TEST_CASE("diagonal pair generates the full matrix algebra and no deviation") {
  const unsigned k = 3;
  const Mat2 A = mk(k, 0, -1, 1, -1), B = mk(k, 0, 1, 1, 0);
  RepPair rp = deviation::from_generator_pairs(k, {{A, A}, {B, B}});
  CHECK(rp.G.order() == 6);

  deviation::ModuleBasis M = deviation::algebra_closure(rp);
  CHECK(M.rank() == 4);
  CHECK(M.rank_profile[0] == 4);

  deviation::DeviationGroup D = deviation::deviation_group(rp);
  CHECK(D.delta.order() == 6);
  CHECK_FALSE(D.delta.is_abelian());

  CHECK_FALSE(deviation::compute_alpha(rp).has_value());
  deviation::AlphaBeta ab = deviation::compute_beta(rp);
  CHECK_FALSE(ab.alpha.has_value());
  CHECK_FALSE(ab.beta.has_value());
  REQUIRE(ab.conjugator.has_value());
  CHECK(ab.conjugator->k == k);
  CHECK_THROWS_AS(deviation::phi_map(rp, ab), deviation::NothingToDeviate);
  CHECK_THROWS_AS(deviation::distinguishing_class(rp), deviation::TracesEqualError);
}

TEST_CASE("exact conjugate stays conjugate at working precision") {
  const unsigned k = 4;
  const Mat2 A = mk(k, 0, -1, 1, -1), B = mk(k, 0, 1, 1, 0);
  const Mat2 P = mk(k, 1, 1, 0, 1), Pi = P.inverse();
  RepPair rp =
      deviation::from_generator_pairs(k, {{A, Pi.mul(A).mul(P)}, {B, Pi.mul(B).mul(P)}});
  CHECK(rp.G.order() == 6);
  deviation::AlphaBeta ab = deviation::compute_beta(rp);
  CHECK_FALSE(ab.alpha.has_value());  // conjugation preserves traces exactly
  CHECK_FALSE(ab.beta.has_value());
  CHECK(ab.conjugator.has_value());
}

TEST_CASE("determinant sign twist keeps traces of the trace-zero part") {
  const unsigned k = 3;
  const Mat2 A = mk(k, 0, -1, 1, -1), B = mk(k, 0, 1, 1, 0);
  // det A = 1, det B = -1; twist by the character cutting out <A>
  RepPair rp = deviation::from_generator_pairs(k, {{A, A}, {B, B.neg()}});
  CHECK(rp.G.order() == 6);
  CHECK_FALSE(deviation::compute_alpha(rp).has_value());
  deviation::AlphaBeta ab = deviation::compute_beta(rp);
  CHECK_FALSE(ab.beta.has_value());
  CHECK(ab.conjugator.has_value());
}

TEST_CASE("residually distinct pair has beta 0 and no conjugator") {
  const unsigned k = 3;
  groups::FiniteGroup C2 = groups::cyclic_group(2);
  const size_t e = C2.identity(), g = 1 - e;
  std::vector<std::pair<Mat2, Mat2>> im(2);
  im[e] = {Mat2::identity(k), Mat2::identity(k)};
  im[g] = {mk(k, 0, 1, 1, 0), mk(k, -1, 0, 0, -1)};
  RepPair rp = deviation::make_rep_pair(k, C2, im);
  auto alpha = deviation::compute_alpha(rp);
  REQUIRE(alpha.has_value());
  CHECK(*alpha == 1);  // tr(-I) - tr(swap) = -2
  deviation::AlphaBeta ab = deviation::compute_beta(rp);
  REQUIRE(ab.beta.has_value());
  CHECK(*ab.beta == 0);
  CHECK_FALSE(ab.conjugator.has_value());
  CHECK_THROWS_AS(deviation::phi_map(rp, ab), std::invalid_argument);
  // the distinguishing class still lives in delta
  deviation::DistinguishingClass C = deviation::distinguishing_class(rp);
  CHECK(C.where == deviation::ClassHome::Delta);
  CHECK(C.alpha == 1);
  CHECK(C.delta_class.size() == 1);
}

TEST_CASE("perturbed lift with absolutely irreducible residual lands in phi") {
  const unsigned k = 3;
  const Mat2 A = mk(k, 0, -1, 1, -1), B = mk(k, 0, 1, 1, 0);
  const Mat2 A2 = A.mul(Mat2::identity(k).add(mk(k, 0, 1, 0, 0).scale(4)));
  RepPair rp = deviation::from_generator_pairs(k, {{A, A2}, {B, B}});
  auto alpha = deviation::compute_alpha(rp);
  REQUIRE(alpha.has_value());
  deviation::DistinguishingClass C = deviation::distinguishing_class(rp);
  CHECK(C.where == deviation::ClassHome::Phi);
  CHECK(C.alpha == *alpha);
  CHECK_FALSE(C.phi_class.empty());
  deviation::AlphaBeta ab = deviation::compute_beta(rp);
  REQUIRE(ab.beta.has_value());
  CHECK(*ab.beta == *alpha);
}

TEST_CASE("determinant expansion identity") {
  for (uint32_t a = 0; a < 4; ++a)
    for (uint32_t b = 0; b < 4; ++b)
      for (uint32_t c = 0; c < 4; ++c)
        for (uint32_t d = 0; d < 4; ++d) CHECK(deviation::det_expansion_check(Mat2{2, {a, b, c, d}}));
  for (long t = 0; t < 100; ++t)
    CHECK(deviation::det_expansion_check(mk(5, 7 * t + 1, 3 * t, 5 * t + 2, t)));
  CHECK_THROWS_AS(deviation::det_expansion_check(Mat2{1, {1, 0, 0, 1}}), std::invalid_argument);
}

TEST_CASE("rep pair validation") {
  const unsigned k = 3;
  groups::FiniteGroup C2 = groups::cyclic_group(2);
  const size_t e = C2.identity(), g = 1 - e;
  std::vector<std::pair<Mat2, Mat2>> im(2);
  im[e] = {Mat2::identity(k), Mat2::identity(k)};
  // order-3 image of an involution is not a homomorphism
  im[g] = {mk(k, 0, -1, 1, -1), mk(k, 0, -1, 1, -1)};
  CHECK_THROWS_AS(deviation::make_rep_pair(k, C2, im), std::invalid_argument);
  im[g] = {mk(k, 2, 0, 0, 2), mk(k, 2, 0, 0, 2)};  // singular
  CHECK_THROWS_AS(deviation::make_rep_pair(k, C2, im), std::invalid_argument);
  im[g] = {mk(2, -1, 0, 0, -1), mk(2, -1, 0, 0, -1)};  // modulus mismatch
  CHECK_THROWS_AS(deviation::make_rep_pair(k, C2, im), std::invalid_argument);
  CHECK_THROWS_AS(deviation::make_rep_pair(7, C2, im), std::invalid_argument);
}

TEST_CASE("twist analysis over GL2(Z/4)") {
  const std::vector<Mat2> g4 = groups::gl2_generators(2);
  groups::FiniteGroup gl24 =
      groups::close_group(std::vector<groups::GroupElement>(g4.begin(), g4.end()));
  REQUIRE(gl24.order() == 96);
  std::vector<size_t> H;
  for (size_t i = 0; i < 96; ++i)
    if (std::get<Mat2>(gl24.element(i)).det() == 1) H.push_back(i);
  REQUIRE(H.size() == 48);
  deviation::TwistDeviationReport rep = deviation::twist_deviation_analysis(gl24, H);
  CHECK(rep.delta_order_bound <= 64);
  // residual image is everything, so the problematic check does not apply
  CHECK_FALSE(rep.problematic_quotient_found.has_value());

  // trivial character: diagonal graph, delta is the residual image
  std::vector<size_t> all(96);
  for (size_t i = 0; i < 96; ++i) all[i] = i;
  deviation::TwistDeviationReport rep2 = deviation::twist_deviation_analysis(gl24, all);
  CHECK(rep2.delta_order == 6);
  CHECK(rep2.delta_order_bound == 6);  // no quotient has an element of order > 3
  CHECK_FALSE(rep2.problematic_quotient_found.has_value());

  // H must be all of rho or index 2
  std::vector<size_t> bad = H;
  bad.pop_back();
  CHECK_THROWS_AS(deviation::twist_deviation_analysis(gl24, bad), std::invalid_argument);
}

TEST_CASE("twist analysis on a reducible group reports a real flag") {
  std::vector<groups::GroupElement> gens = {mk(2, 1, 1, 0, 1), mk(2, 3, 0, 0, 1),
                                            mk(2, 1, 0, 0, 3)};
  groups::FiniteGroup borel = groups::close_group(gens);
  REQUIRE(borel.order() == 16);
  std::vector<size_t> all(borel.order());
  for (size_t i = 0; i < all.size(); ++i) all[i] = i;
  deviation::TwistDeviationReport rep = deviation::twist_deviation_analysis(borel, all);
  REQUIRE(rep.problematic_quotient_found.has_value());
  CHECK_FALSE(*rep.problematic_quotient_found);

  std::vector<size_t> H;
  for (size_t i = 0; i < borel.order(); ++i)
    if (std::get<Mat2>(borel.element(i)).det() == 1) H.push_back(i);
  REQUIRE(2 * H.size() == borel.order());
  deviation::TwistDeviationReport rep2 = deviation::twist_deviation_analysis(borel, H);
  REQUIRE(rep2.problematic_quotient_found.has_value());
  CHECK_FALSE(*rep2.problematic_quotient_found);
}

TEST_CASE("rep pair file round trip") {
  const unsigned k = 3;
  const Mat2 A = mk(k, 0, -1, 1, -1), B = mk(k, 0, 1, 1, 0);
  RepPair rp = deviation::from_generator_pairs(k, {{A, A}, {B, B.neg()}});
  std::stringstream ss;
  deviation::write_rep_pair(ss, rp);
  RepPair back = deviation::parse_rep_pair(ss);
  CHECK(back.k == rp.k);
  CHECK(back.G.order() == rp.G.order());
  CHECK(back.images == rp.images);

  std::stringstream bad1("modulus 2^3\ngroup 2\n1 0 0 1 1 0 0 1\n1 0 0 1 1 0 0 1\n");
  CHECK_THROWS_AS(deviation::parse_rep_pair(bad1), std::runtime_error);  // duplicates
  std::stringstream bad2("modulus 2^3\ngroup 2\n1 0 0 1 1 0 0 1\n0 7 1 7 0 7 1 7\n");
  CHECK_THROWS_AS(deviation::parse_rep_pair(bad2), std::runtime_error);  // not closed
  std::stringstream bad3("modulus 9\ngroup 1\n1 0 0 1 1 0 0 1\n");
  CHECK_THROWS_AS(deviation::parse_rep_pair(bad3), std::runtime_error);

  std::stringstream ok("modulus 2^3\n group 2 # comment\n1 0 0 1 1 0 0 1\n1 0 0 1 -1 0 0 -1\n");
  RepPair c2 = deviation::parse_rep_pair(ok);
  CHECK(c2.G.order() == 2);
  auto a2 = deviation::compute_alpha(c2);
  REQUIRE(a2.has_value());
  CHECK(*a2 == 2);
}

TEST_CASE("generated corpus invariant battery") {
  std::vector<RepPair> corpus = deviation::generate_corpus();
  REQUIRE(corpus.size() >= 100);
  size_t eqdet_pairs = 0, alpha_finite = 0;
  for (const RepPair& rp : corpus) {
    CHECK(rp.k >= 3);
    CHECK(rp.k <= 5);
    CHECK(rp.G.order() >= 1);
    CHECK(rp.G.order() <= 1024);
    deviation::AlphaBeta ab = deviation::compute_beta(rp);  // asserts beta <= alpha
    const unsigned ae = ab.alpha ? *ab.alpha : rp.k;
    const unsigned be = ab.beta ? *ab.beta : rp.k;
    CHECK(be <= ae);
    // conjugate-type pairs with a nonzero beta: alpha and beta coincide
    if (ab.alpha && ab.beta && *ab.beta >= 1) CHECK(ae == be);
    deviation::DeviationGroup D = deviation::deviation_group(rp);
    CHECK(groups::order_list_check(D.delta.order()));
    bool eqdet = true;
    for (const auto& p : rp.images) eqdet = eqdet && p.first.det() == p.second.det();
    if (eqdet && ab.beta && *ab.beta >= 1 && ab.conjugator) {
      ++eqdet_pairs;
      deviation::PhiImage phi = deviation::phi_map(rp, ab);
      CHECK(phi.trace_zero);
      CHECK(phi.image.order() <= 48);
    }
    if (ab.alpha) {
      ++alpha_finite;
      // corpus pairs share a full residual image, so finite alpha lands in phi
      deviation::DistinguishingClass C = deviation::distinguishing_class(rp);
      CHECK(C.where == deviation::ClassHome::Phi);
    }
  }
  CHECK(eqdet_pairs >= 10);
  CHECK(alpha_finite >= 10);

  // determinism
  std::vector<RepPair> again = deviation::generate_corpus();
  REQUIRE(again.size() == corpus.size());
  for (size_t i = 0; i < corpus.size(); ++i) {
    CHECK(corpus[i].k == again[i].k);
    CHECK(corpus[i].images == again[i].images);
  }

  // cap respected
  CHECK(deviation::generate_corpus(7).size() == 7);
}

TEST_CASE("infinite trace agreement forces conjugacy at full precision") {
  // the contrapositive of beta <= alpha, checked across the corpus: a pair
  // whose traces agree at every level must itself be conjugate at every level
  std::vector<RepPair> corpus = deviation::generate_corpus();
  for (const RepPair& rp : corpus) {
    deviation::AlphaBeta ab = deviation::compute_beta(rp);
    if (!ab.alpha.has_value()) CHECK_FALSE(ab.beta.has_value());
  }
}
