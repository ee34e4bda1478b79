#pragma once

/* End-to-end plumbing for curve pairs: decide which hypothesis class a pair
   (E, E') lands in, evaluate the matching isogeny-distinguishing prime bound
   at rad(2 N_E N_E'), and optionally hunt for an actual prime below the
   bound where the traces differ.  Also exposes the single-curve adelic
   index bounds (two linear-in-log flavors) and a small built-in pair corpus
   used by the verification suite. */

#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "isobound/elliptic.hpp"

namespace isobound::pipeline {

struct PairCase {
  enum Kind { Mod2Distinct, Mod2IsoAbsIrred, QuadraticTwistNonCM, Generic };
  Kind kind = Generic;
  std::string evidence;  // which test fired and whether it was rigorous
};

const char* case_name(PairCase::Kind kind);

enum class VerifyOutcome {
  BoundOnly,                     // no search performed
  Verified,                      // distinguishing prime found within the bound
  Falsified,                     // full bound searched, no prime (not expected)
  IsogenousOrIndistinguishable,  // search cut off before the bound was exhausted
};

struct BoundReport {
  PairCase pair_case;
  mpz_class rad2NN;  // even radical rad(2 N_E N_E')
  mpz_class bound;
  std::string formula_id;
  std::optional<elliptic::TraceRecord> verified_prime;
  VerifyOutcome outcome = VerifyOutcome::BoundOnly;
};

struct SerreReport {
  mpz_class rad2N;
  mpz_class c_e_bound_mw;
  mpz_class c_e_bound_improved;  // <= c_e_bound_mw always
  bool finite_j_shortcut = false;
};

/* Case selection, in order of preference (smaller constants first):
   mod-2 representations provably distinct -> Mod2Distinct; isomorphic (or
   locally indistinguishable) with both images absolutely irreducible ->
   Mod2IsoAbsIrred; quadratic twists with both curves non-CM ->
   QuadraticTwistNonCM; anything else -> Generic.  Symmetric in (E, Ep). */
PairCase classify_pair(const elliptic::WeierstrassCurve& E,
                       const elliptic::WeierstrassCurve& Ep,
                       unsigned long prime_cap = 1000);

/* Evaluates the case's (a ln rad + c)^2 envelope at rad2NN (which must be
   even and >= 2) with interval arithmetic, ceiling direction.  When the
   deviation group order is known and 2*delta_order stays within the built-in
   collapsed table (<= 128), the table route is evaluated too and the smaller
   bound wins; formula_id records which one did. */
BoundReport isogeny_bound(const PairCase& pair_case, const mpz_class& rad2NN,
                          std::optional<long> delta_order = std::nullopt);

/* Adelic index bounds floor(446 ln rad(2N) + 2254) and
   floor(964 ln rad(2N) + 5760) for a non-CM curve; CM input is rejected.
   finite_j_shortcut flags the handful of exceptional j-invariants whose
   index constant is at most 2 regardless of the conductor. */
SerreReport serre_bound(const elliptic::WeierstrassCurve& E);

/* rad(2 * radE * radEp) for squarefree positive inputs. */
mpz_class even_pair_radical(const mpz_class& radE, const mpz_class& radEp);

/* Full pipeline: radicals, classification, bound, then a distinguishing
   prime search up to min(bound, cap_override, elliptic::kApCap).  Outcome
   is Verified on a hit, Falsified when the whole bound range was searched
   dry, and IsogenousOrIndistinguishable when the search was truncated by a
   cap before reaching the bound. */
BoundReport verify_pair(const elliptic::WeierstrassCurve& E,
                        const elliptic::WeierstrassCurve& Ep,
                        std::optional<long> cap_override = std::nullopt);

struct CorpusPair {
  elliptic::WeierstrassCurve first, second;
};

// built-in non-isogenous small-conductor pairs, >= 20, covering all four cases
const std::vector<CorpusPair>& verification_corpus();

}  // namespace isobound::pipeline
