#include "isobound/pipeline.hpp"

#include <stdexcept>

#include "isobound/chebotarev.hpp"
#include "isobound/interval.hpp"

namespace isobound::pipeline {

namespace {

struct CaseConstants {
  long a, c;
  const char* id;
};

CaseConstants constants_for(PairCase::Kind kind) {
  switch (kind) {
    case PairCase::Mod2Distinct:
    case PairCase::Mod2IsoAbsIrred:
      return {124, 561, "(124 ln rad + 561)^2"};
    case PairCase::QuadraticTwistNonCM:
      return {223, 1127, "(223 ln rad + 1127)^2"};
    case PairCase::Generic:
      return {482, 2880, "(482 ln rad + 2880)^2"};
  }
  throw std::logic_error("pipeline: bad case kind");
}

// the enclosure must pin down floor(x) exactly; at kPrec bits these linear
// expressions are far narrower than 1
mpz_class certified_floor(const Interval& x) {
  const mpz_class lo = x.floor_lower();
  if (x.ceil_upper() - lo != 1)
    throw std::logic_error("pipeline: interval too wide to certify a floor");
  return lo;
}

}  // namespace

const char* case_name(PairCase::Kind kind) {
  switch (kind) {
    case PairCase::Mod2Distinct: return "Mod2Distinct";
    case PairCase::Mod2IsoAbsIrred: return "Mod2IsoAbsIrred";
    case PairCase::QuadraticTwistNonCM: return "QuadraticTwistNonCM";
    case PairCase::Generic: return "Generic";
  }
  throw std::logic_error("pipeline: bad case kind");
}

PairCase classify_pair(const elliptic::WeierstrassCurve& E,
                       const elliptic::WeierstrassCurve& Ep,
                       unsigned long prime_cap) {
  using elliptic::Mod2IsoGrade;
  const Mod2IsoGrade grade = elliptic::mod2_isomorphic(E, Ep, prime_cap);
  if (grade == Mod2IsoGrade::NotIsomorphic)
    return {PairCase::Mod2Distinct, "mod-2 representations provably non-isomorphic"};

  const bool heuristic = grade == Mod2IsoGrade::HeuristicIsomorphic;
  if (elliptic::mod2_image_class(E).absolutely_irreducible &&
      elliptic::mod2_image_class(Ep).absolutely_irreducible)
    return {PairCase::Mod2IsoAbsIrred,
            heuristic ? "both mod-2 images absolutely irreducible; isomorphy heuristic "
                        "(local factorization agreement up to the prime cap)"
                      : "both mod-2 images absolutely irreducible; isomorphy rigorous"};

  const elliptic::TwistCheck tw = elliptic::is_quadratic_twist(E, Ep);
  if (tw.decision == elliptic::TwistDecision::Twist &&
      !elliptic::cm_and_finite_j_check(E).is_cm_j &&
      !elliptic::cm_and_finite_j_check(Ep).is_cm_j)
    return {PairCase::QuadraticTwistNonCM,
            "quadratic twist by d = " + tw.d.get_str() + ", both curves non-CM"};

  return {PairCase::Generic, "no specialized case applies"};
}

BoundReport isogeny_bound(const PairCase& pair_case, const mpz_class& rad2NN,
                          std::optional<long> delta_order) {
  if (rad2NN < 2 || rad2NN % 2 != 0)
    throw std::invalid_argument("isogeny_bound: rad2NN must be even and >= 2");
  if (delta_order && *delta_order < 1)
    throw std::invalid_argument("isogeny_bound: delta_order must be positive");

  const CaseConstants cc = constants_for(pair_case.kind);
  const Interval lograd = Interval(rad2NN).log();

  BoundReport rep;
  rep.pair_case = pair_case;
  rep.rad2NN = rad2NN;
  rep.bound = cheb::eval_bound(
      cheb::BoundTriple(mpq_class(cc.a), mpq_class(0), mpq_class(cc.c)), lograd, 2);
  rep.formula_id = cc.id;

  // a known small deviation group gives a sharper route through the
  // collapsed table as long as 2*|delta| stays within its degree range
  if (delta_order && 2 * *delta_order <= 128) {
    const int n_upper = int(2 * *delta_order);
    const mpz_class alt = cheb::collapsed_bound(n_upper, rad2NN, cheb::builtin_table());
    if (alt < rep.bound) {
      rep.bound = alt;
      rep.formula_id = "collapsed[n=" + std::to_string(n_upper) + "]";
    }
  }
  return rep;
}

SerreReport serre_bound(const elliptic::WeierstrassCurve& E) {
  const elliptic::CmFiniteJFlags flags = elliptic::cm_and_finite_j_check(E);
  if (flags.is_cm_j)
    throw std::invalid_argument(
        "serre_bound: the curve has complex multiplication (its j-invariant is a CM "
        "value); the adelic index bounds assume a non-CM curve");

  mpz_class rad = elliptic::bad_primes_radical(E);
  if (rad % 2 != 0) rad *= 2;
  const Interval lograd = Interval(rad).log();

  SerreReport rep;
  rep.rad2N = rad;
  rep.c_e_bound_improved = certified_floor(Interval(446L) * lograd + Interval(2254L));
  rep.c_e_bound_mw = certified_floor(Interval(964L) * lograd + Interval(5760L));
  rep.finite_j_shortcut = flags.in_rzb_finite_list;
  if (rep.c_e_bound_improved > rep.c_e_bound_mw)
    throw std::logic_error("serre_bound: bound ordering violated");
  return rep;
}

mpz_class even_pair_radical(const mpz_class& radE, const mpz_class& radEp) {
  if (radE < 1 || radEp < 1)
    throw std::invalid_argument("even_pair_radical: radicals must be positive");
  mpz_class g, rad;
  mpz_gcd(g.get_mpz_t(), radE.get_mpz_t(), radEp.get_mpz_t());
  rad = radE / g * radEp;  // lcm: the radical of the product of squarefree inputs
  if (rad % 2 != 0) rad *= 2;
  return rad;
}

BoundReport verify_pair(const elliptic::WeierstrassCurve& E,
                        const elliptic::WeierstrassCurve& Ep,
                        std::optional<long> cap_override) {
  if (cap_override && *cap_override < 1)
    throw std::invalid_argument("verify_pair: cap must be positive");

  const mpz_class rad =
      even_pair_radical(elliptic::bad_primes_radical(E), elliptic::bad_primes_radical(Ep));
  BoundReport rep = isogeny_bound(classify_pair(E, Ep), rad);

  mpz_class cap = rep.bound;
  if (cap > elliptic::kApCap) cap = elliptic::kApCap;
  if (cap_override && mpz_class(*cap_override) < cap) cap = *cap_override;
  const bool truncated = cap < rep.bound;

  const std::optional<elliptic::TraceRecord> rec =
      elliptic::distinguishing_prime(E, Ep, cap.get_si());
  if (rec) {
    if (mpz_class(long(rec->p)) > rep.bound)
      throw std::logic_error("verify_pair: found prime exceeds the bound");
    rep.verified_prime = rec;
    rep.outcome = VerifyOutcome::Verified;
  } else {
    rep.outcome = truncated ? VerifyOutcome::IsogenousOrIndistinguishable
                            : VerifyOutcome::Falsified;
  }
  return rep;
}

const std::vector<CorpusPair>& verification_corpus() {
  static const std::vector<CorpusPair> corpus = [] {
    using elliptic::WeierstrassCurve;
    const auto C = [](long a1, long a2, long a3, long a4, long a6, const char* label) {
      return elliptic::curve(a1, a2, a3, a4, a6, label);
    };
    const auto tw = [](const WeierstrassCurve& E, long d, const char* label) {
      WeierstrassCurve T = elliptic::quadratic_twist(E, mpz_class(d));
      T.label = label;
      return T;
    };
    const WeierstrassCurve e11 = C(0, -1, 1, -10, -20, "11a1"), e14 = C(1, 0, 1, 4, -6, "14a1"),
                           e15 = C(1, 1, 1, -10, -10, "15a1"), e17 = C(1, -1, 1, -1, -14, "17a1"),
                           e19 = C(0, 1, 1, -9, -15, "19a1"), e20 = C(0, 1, 0, 4, 4, "20a1"),
                           e21 = C(1, 0, 0, -4, -1, "21a1"), e24 = C(0, -1, 0, -4, 4, "24a1"),
                           e26a = C(1, 0, 1, -5, -8, "26a1"), e26b = C(1, -1, 1, -3, 3, "26b1"),
                           e27 = C(0, 0, 1, 0, -7, "27a1"), e30 = C(1, 0, 1, 1, 2, "30a1"),
                           e33 = C(1, 1, 0, -11, 0, "33a1"), e34 = C(1, 0, 0, -3, 1, "34a1"),
                           e36 = C(0, 0, 0, 0, 1, "36a1"), e37a = C(0, 0, 1, -1, 0, "37a1"),
                           e37b = C(0, 1, 1, -23, -50, "37b1"), e43 = C(0, 1, 1, 0, 0, "43a1"),
                           e53 = C(1, -1, 1, 0, 0, "53a1"), e57 = C(0, -1, 1, -2, 2, "57a1"),
                           e58 = C(1, -1, 0, -1, 1, "58a1"), e61 = C(1, 0, 0, -2, 1, "61a1"),
                           e65 = C(1, 0, 0, -1, 0, "65a1"), e77 = C(0, 0, 1, 2, 0, "77a1"),
                           e79 = C(1, 1, 1, -2, 0, "79a1"), e83 = C(1, 1, 1, 1, 0, "83a1"),
                           e89 = C(1, 1, 1, -1, 0, "89a1"), e91 = C(0, 0, 1, 1, 0, "91a1"),
                           e101 = C(0, 1, 1, -1, -1, "101a1"), mx = C(0, 0, 0, -1, 0, "x3-x"),
                           m2 = C(0, 0, 0, 0, -2, "x3-2");
    return std::vector<CorpusPair>{
        {e11, e14},  {e11, e15},  {e14, e15},   {e17, e19},
        {e20, e21},  {e24, e26a}, {e26a, e26b}, {e30, e33},
        {e34, e37a}, {e37a, e37b}, {e43, e53},  {e57, e58},
        {e61, e65},  {e77, e79},  {e83, e89},   {e91, e101},
        {e15, e21},  {e21, e24},  {e27, e36},   {mx, m2},
        {m2, tw(m2, 5, "x3-2.t5")},
        {e15, tw(e15, 5, "15a1.t5")},
        {e11, tw(e11, -1, "11a1.t-1")},
        {e14, tw(e14, 5, "14a1.t5")},
    };
  }();
  return corpus;
}

}  // namespace isobound::pipeline
