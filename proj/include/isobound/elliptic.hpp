/* Elliptic curves over Q with exact integer arithmetic: Weierstrass
   invariants, local minimalization, naive point counts, bad-prime radicals,
   mod-2 Galois image classification via the 2-division cubic, quadratic
   twists, and the distinguishing-prime search. No Tate's algorithm and no
   point counting beyond the naive cap; conductor exponents are out of scope
   since only radicals enter the bounds. */
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace isobound::elliptic {

struct SingularCurve : std::domain_error {
  using std::domain_error::domain_error;
};
struct BadReduction : std::domain_error {
  unsigned long p;
  explicit BadReduction(unsigned long p_)
      : std::domain_error("bad reduction at " + std::to_string(p_)), p(p_) {}
};
struct CapExceeded : std::domain_error {
  using std::domain_error::domain_error;
};
struct NeedFactorization : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct WeierstrassCurve {
  mpz_class a1, a2, a3, a4, a6;
  std::string label;
  std::optional<mpz_class> conductor;
};

// [a1, a2, a3, a4, a6] shorthand
WeierstrassCurve curve(long a1, long a2, long a3, long a4, long a6,
                       std::string label = "");

struct CurveInvariants {
  mpz_class b2, b4, b6, b8, c4, c6, disc;
  mpq_class j;  // canonical form, j = c4^3 / disc
};

// throws SingularCurve when disc = 0
CurveInvariants invariants(const WeierstrassCurve& E);

enum class Mod2Image { Trivial, OrderTwo, OrderThree, Full };

struct Mod2Class {
  Mod2Image image = Mod2Image::Trivial;
  bool absolutely_irreducible = false;
  bool cubic_disc_is_square = false;
};

/* Galois group of the 2-division cubic X^3 + b2 X^2 + 8 b4 X + 16 b6 (the
   monic form of 4x^3 + b2 x^2 + 2 b4 x + b6 under X = 4x): three integer
   roots -> Trivial, one -> OrderTwo, none + square discriminant ->
   OrderThree, none + non-square -> Full. */
Mod2Class mod2_image_class(const WeierstrassCurve& E);

inline constexpr long kApCap = 10'000'000;

/* a_p = p + 1 - #E(F_p) on the model minimalized at p. Counting is naive:
   full-model enumeration at p = 2, 3 and a quadratic-character sum at p >= 5.
   Throws BadReduction when p divides the locally minimal discriminant and
   CapExceeded when p > cap. */
long ap(const WeierstrassCurve& E, unsigned long p, long cap = kApCap);

// true iff E has good reduction at p (p prime)
bool good_reduction_at(const WeierstrassCurve& E, unsigned long p);

/* Product of the primes of bad reduction, i.e. rad(disc of the minimal
   model). A supplied conductor short-circuits the factorization of the
   discriminant; its primes are verified to be genuinely bad, and when the
   discriminant is also factorable the two computations are cross-checked.
   Throws NeedFactorization past desk scale. */
mpz_class bad_primes_radical(const WeierstrassCurve& E);

// d must be squarefree and nonzero; result is an integral short model with
// (c4, c6) = (d^2 c4, d^3 c6) up to the usual u-scaling
WeierstrassCurve quadratic_twist(const WeierstrassCurve& E, const mpz_class& d);

enum class Mod2IsoGrade { Isomorphic, NotIsomorphic, HeuristicIsomorphic };

/* Decides whether the mod-2 representations are isomorphic. NotIsomorphic is
   always rigorous (image class mismatch, discriminant square-class mismatch,
   or differing 2-division-cubic factorization type at a good odd prime <=
   prime_cap). Isomorphic is rigorous when both cubics split, both cut the
   same quadratic field, or the root sets are related by a rational affine
   map (which covers all quadratic twist pairs); otherwise the agreement of
   all local factorization types up to prime_cap is reported as
   HeuristicIsomorphic. */
Mod2IsoGrade mod2_isomorphic(const WeierstrassCurve& E, const WeierstrassCurve& Ep,
                             unsigned long prime_cap = 1000);

struct TraceRecord {
  unsigned long p = 0;
  long ap_E = 0;
  long ap_Eprime = 0;
};

// smallest prime p <= cap of good reduction for both curves with differing
// traces; nullopt if none below the cap
std::optional<TraceRecord> distinguishing_prime(const WeierstrassCurve& E,
                                                const WeierstrassCurve& Ep, long cap);

struct CmFiniteJFlags {
  bool is_cm_j = false;
  bool in_rzb_finite_list = false;
};

// j-invariant membership in the 13 rational CM values and in the eight
// exceptional j-values with nonsplit 2-adic level structure
CmFiniteJFlags cm_and_finite_j_check(const WeierstrassCurve& E);

enum class TwistDecision { Twist, NotTwist, Inconclusive };

struct TwistCheck {
  TwistDecision decision = TwistDecision::Inconclusive;
  mpz_class d;  // the squarefree twisting integer when decision = Twist
};

/* Decides whether Ep is a quadratic twist of E over Q. For j not in
   {0, 1728} the twist class is forced by (c4, c6) ratios and verified by an
   exact isomorphism test; j = 0 and j = 1728 reduce to rational cube/square
   tests. The decision is always rigorous; Inconclusive is reserved for
   future partial-information inputs and is not produced here. */
TwistCheck is_quadratic_twist(const WeierstrassCurve& E, const WeierstrassCurve& Ep);

// isomorphism over Q via (c4, c6) matching up to u^4, u^6
bool curves_isomorphic_q(const WeierstrassCurve& E, const WeierstrassCurve& Ep);

// model minimalized at the single prime p (identity on already-minimal input)
WeierstrassCurve minimal_at(const WeierstrassCurve& E, unsigned long p);

// rad(|n|): product of distinct primes. Throws NeedFactorization when a
// composite cofactor beyond 64 bits survives trial division.
mpz_class radical_of(const mpz_class& n);

// squarefree part: n / (largest square divisor), sign preserved
mpz_class squarefree_part(const mpz_class& n);

// lines `label a1 a2 a3 a4 a6 [conductor]`, # comments allowed
std::vector<WeierstrassCurve> parse_curve_file(std::istream& in);

}  // namespace isobound::elliptic
