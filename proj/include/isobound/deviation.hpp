/* Paired 2-adic representations of a finite group at working precision 2^k:
   the algebra generated by the image pairs, the deviation group delta(G) in
   the units of M/2M, the trace invariant alpha, the conjugation invariant
   beta with a witness conjugator, the phi map into M2(F2) x| GL2(F2), the
   distinguishing conjugacy class, and the index-2 twist analysis. All
   arithmetic is exact mod 2^k; alpha/beta at the working modulus are
   reported as "equal/conjugate at full precision" rather than infinite. */
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "isobound/groups.hpp"
#include "isobound/zmod2k.hpp"

namespace isobound::deviation {

// beta is at full working precision: there is no difference to factor
struct NothingToDeviate : std::domain_error {
  using std::domain_error::domain_error;
};
// all trace differences vanish mod 2^k: no distinguishing class exists here
struct TracesEqualError : std::domain_error {
  using std::domain_error::domain_error;
};
// an internally verified identity failed (wrong beta, broken conjugator, ...)
struct InternalError : std::logic_error {
  using std::logic_error::logic_error;
};

/* Two representations G -> GL2(Z/2^k) stored as the image pair per element.
   Both maps are verified to be homomorphisms on the full multiplication
   table and every image is invertible mod 2. */
struct RepPair {
  unsigned k = 3;  // modulus exponent, 2 <= k <= 6
  groups::FiniteGroup G;
  std::vector<std::pair<z2k::Mat2, z2k::Mat2>> images;  // by element index
};

// validates and assembles; throws std::invalid_argument on any violation
RepPair make_rep_pair(unsigned k, groups::FiniteGroup G,
                      std::vector<std::pair<z2k::Mat2, z2k::Mat2>> images);

// closes the subgroup of GL2(Z/2^k)^2 generated by the pairs (guard 1024)
// and uses it as the abstract group with the two projections
RepPair from_generator_pairs(unsigned k,
                             const std::vector<std::pair<z2k::Mat2, z2k::Mat2>>& gens);

/* The smallest Z/2^k-submodule of (Z/2^k)^8 containing every image pair and
   closed under the coordinatewise matrix-pair product, in Howell canonical
   form. rank_profile[j] counts basis rows with pivot 2^j. */
struct ModuleBasis {
  unsigned k = 1;
  z2k::HowellBasis basis;  // width 8
  std::vector<unsigned> rank_profile;

  size_t rank() const { return basis.rank(); }
};

ModuleBasis algebra_closure(const RepPair& rp);

/* Image of G in (M/2M)^x. Elements are labeled by the mod-2 coordinate
   vector of any representative in the Howell basis of M; the projection is
   verified to be a homomorphism. */
struct DeviationGroup {
  groups::FiniteGroup delta;
  std::vector<std::vector<uint8_t>> labels;  // per delta element, F2 coords
  std::vector<size_t> proj;                  // G index -> delta index
};

DeviationGroup deviation_group(const RepPair& rp);

// min over g of v2(tr rho1(g) - tr rho2(g)); nullopt when every difference
// vanishes mod 2^k (traces equal at working precision)
std::optional<unsigned> compute_alpha(const RepPair& rp);

struct AlphaBeta {
  unsigned k = 3;
  std::optional<unsigned> alpha;  // nullopt: traces equal mod 2^k
  std::optional<unsigned> beta;   // nullopt: conjugate mod 2^k
  // witness P with rho1(g) P = P rho2(g) at level beta (at level k when beta
  // is nullopt); invertible mod 2. Absent only when even beta = 1 fails.
  std::optional<z2k::Mat2> conjugator;
};

/* Largest m <= k such that the intertwiner module {P : rho1 P = P rho2 mod
   2^m} contains a matrix invertible mod 2, solved per level by Howell left
   kernels over generators; unit detection scans the F2-span of the kernel
   basis reductions. Asserts beta <= alpha. */
AlphaBeta compute_beta(const RepPair& rp);

/* phi(g) = (theta_g rho1(g)^{-1} mod 2, rho1(g) mod 2) where theta_g =
   (P rho2(g) P^{-1} - rho1(g)) / 2^beta. The homomorphism law under the
   semidirect product is checked exhaustively; with equal determinants every
   first component is trace zero and the image order is at most 48. */
struct PhiImage {
  groups::FiniteGroup image;           // subgroup of M2(F2) x| GL2(F2)
  std::vector<groups::SDPair> values;  // per G element
  std::vector<size_t> proj;            // G index -> image element index
  bool trace_zero = false;
  bool equal_determinants = false;
};

PhiImage phi_map(const RepPair& rp, const AlphaBeta& ab);

enum class ClassHome { Delta, Phi };

/* Elements whose normalized trace difference 2^{-alpha}(tr rho2 - tr rho1)
   is odd. Always realized inside delta(G); additionally inside phi(G) via
   (A,B) -> tr(AB) when the residual representation is absolutely
   irreducible. Verified nonempty, closed under conjugation, and sound:
   every group element mapping into the class has differing traces. */
struct DistinguishingClass {
  ClassHome where = ClassHome::Delta;
  unsigned alpha = 0;
  std::vector<size_t> delta_class;  // delta element indices
  std::vector<size_t> phi_class;    // phi image indices; filled when Phi
};

DistinguishingClass distinguishing_class(const RepPair& rp);

// det(I + 2A) = 1 + 2 tr(A) mod 4; k >= 2
bool det_expansion_check(const z2k::Mat2& A);

/* Index-2 twist analysis: theta(x) = x on H and -x off H; the graph pairs
   (x, theta(x)) feed the deviation machinery. delta_order_bound is the least
   quotient order of delta still containing an element of order > 3 (delta's
   own order if none exists). problematic_quotient_found reports whether
   delta has a quotient of order 96, 128, or 192 with no smaller quotient
   containing an element of order > 3; nullopt when the mod-2 reduction of
   rho is absolutely irreducible and the check is not applicable. */
struct TwistDeviationReport {
  size_t delta_order = 0;
  size_t delta_order_bound = 0;
  std::optional<bool> problematic_quotient_found;
};

// rho: group of Mat2 mod 2^k (2 <= k <= 6); H: sorted element indices of an
// index-2 subgroup, or all of rho for the trivial character
TwistDeviationReport twist_deviation_analysis(const groups::FiniteGroup& rho,
                                              const std::vector<size_t>& H);

/* Deterministic validation corpus: pairs built over k in {3, 4, 5} from
   small matrix groups with full mod-2 image, combined with exact conjugates,
   determinant-character sign twists, and perturbed generator lifts closed as
   pair groups. At least 100 pairs; capped. */
std::vector<RepPair> generate_corpus(size_t max_pairs = 10'000);

/* File format: `modulus 2^<k>` header, `group <order>` header, then one line
   of 8 integers per element (rho1 row-major, rho2 row-major); # comments.
   Group structure is regenerated by product-matching over the listed pairs. */
RepPair parse_rep_pair(std::istream& in);
void write_rep_pair(std::ostream& out, const RepPair& rp);

}  // namespace isobound::deviation
