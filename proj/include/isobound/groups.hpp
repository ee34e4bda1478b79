/* Finite group engine over explicit element universes: permutations on up to
   16 points, invertible 2x2 matrices mod 2^k, and semidirect pairs (A,B) in
   M2(F2) x| GL2(F2) with product (A,B)(C,D) = (A + B C B^-1, BD). Groups are
   built by generator closure or from multiplication tables; queries cover
   conjugacy classes, normal subgroups, quotients, homomorphism/isomorphism
   search, and the divisor list bounding deviation-group orders. */
#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "isobound/zmod2k.hpp"

namespace isobound::groups {

struct SizeGuardExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotNormal : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Permutation of {0..n-1}, n <= 16, stored as the image tuple.
struct Perm {
  std::vector<uint8_t> img;

  static Perm identity(size_t n);
  Perm compose(const Perm& o) const;  // apply o first, then this
  Perm inverse() const;
  auto operator<=>(const Perm&) const = default;
};

// 2x2 matrices over F2 packed in a nibble: e00 | e01<<1 | e10<<2 | e11<<3.
uint8_t f2_mul(uint8_t a, uint8_t b);
inline bool f2_invertible(uint8_t a) {
  return ((a & 1) & (a >> 3)) ^ (((a >> 1) & 1) & ((a >> 2) & 1));
}
uint8_t f2_inverse(uint8_t a);
inline unsigned f2_trace(uint8_t a) { return (a ^ (a >> 3)) & 1; }

struct SDPair {
  uint8_t a = 0;  // any F2 matrix
  uint8_t b = 9;  // invertible F2 matrix; 9 = identity

  SDPair mul(const SDPair& o) const;
  SDPair inverse() const;
  auto operator<=>(const SDPair&) const = default;
};

using GroupElement = std::variant<Perm, z2k::Mat2, SDPair>;

GroupElement ge_mul(const GroupElement& x, const GroupElement& y);
GroupElement ge_inverse(const GroupElement& x);
GroupElement ge_identity(const GroupElement& like);

/* A finite group is either a closed set of concrete elements (canonically
   sorted, products computed in the universe) or an abstract multiplication
   table. Small groups cache the full table; immutable once built. */
class FiniteGroup {
 public:
  static constexpr size_t kClosureGuard = 1'000'000;
  static constexpr size_t kTableCap = 1024;

  static FiniteGroup close(std::vector<GroupElement> generators);
  // validate = false skips the group-law audit (internal, construction-correct
  // tables only)
  static FiniteGroup from_table(std::vector<std::vector<uint32_t>> table,
                                bool validate = true);

  size_t order() const { return n_; }
  size_t identity() const { return id_; }
  size_t mul(size_t i, size_t j) const;
  size_t inv(size_t i) const;
  unsigned element_order(size_t i) const;
  bool is_abelian() const;
  bool has_table() const { return !table_.empty(); }

  const std::vector<size_t>& generators() const { return gens_; }
  bool concrete() const { return !elems_.empty(); }
  const GroupElement& element(size_t i) const;
  std::optional<size_t> index_of(const GroupElement& e) const;

 private:
  size_t n_ = 0;
  size_t id_ = 0;
  std::vector<GroupElement> elems_;
  std::map<GroupElement, size_t> index_;
  std::vector<uint32_t> table_;  // row-major n x n when built
  std::vector<uint32_t> invs_;
  std::vector<size_t> gens_;

  void finish();  // fills invs_, table_ (if small), gens_ fallback
};

FiniteGroup close_group(const std::vector<GroupElement>& generators);

struct ConjClassPartition {
  std::vector<std::vector<size_t>> classes;  // each sorted; ordered by min element
  std::vector<size_t> class_of;
};

ConjClassPartition conjugacy_classes(const FiniteGroup& G);

// All normal subgroups as sorted element-index sets, ordered by size then
// lexicographically. |G| <= 256.
std::vector<std::vector<size_t>> normal_subgroups(const FiniteGroup& G);

struct QuotientMap {
  std::vector<size_t> kernel;
  FiniteGroup quot;
  std::vector<uint32_t> proj;  // source index -> quotient index
};

QuotientMap quotient(const FiniteGroup& G, const std::vector<size_t>& N);

struct QuotientOrderWitness {
  std::vector<size_t> kernel;   // normal subgroup giving the quotient
  size_t quotient_order = 0;
  size_t witness = 0;           // element index in the quotient
  unsigned witness_order = 0;
};

// Largest quotient of G (including G itself) containing an element of order
// > k, if any. |G| <= 256.
std::optional<QuotientOrderWitness> has_quotient_with_element_order_gt(
    const FiniteGroup& G, unsigned k = 3);

// Same search over proper quotients only (nontrivial kernel). A group with
// no strictly smaller quotient containing an element of order > 3 cannot be
// reduced further; those are the groups the published table lists by order.
std::optional<QuotientOrderWitness> has_proper_quotient_with_element_order_gt(
    const FiniteGroup& G, unsigned k = 3);

// Smallest order of a quotient of G (including G) containing an element of
// order > k.
std::optional<size_t> smallest_quotient_order_with_element_order_gt(
    const FiniteGroup& G, unsigned k = 3);

inline bool is_problematic(const FiniteGroup& G) {
  return !has_proper_quotient_with_element_order_gt(G, 3).has_value();
}

// Brute-force generator-image search. G must have <= 4 generators, |H| <= 64.
bool hom_exists(const FiniteGroup& G, const FiniteGroup& H, bool surjective);

// Isomorphism test for |G| = |H| <= 256: invariant screen, abelian order
// profiles, then backtracking generator-map search.
bool iso_test(const FiniteGroup& G, const FiniteGroup& H);

// Orders a deviation group can have: divisors <= 255 of (6*16^(n-1))^2.
const std::vector<unsigned>& delta_order_list();
bool order_list_check(unsigned long n);

// Generators of GL2(Z/2^k): two transvections and two diagonal units.
std::vector<z2k::Mat2> gl2_generators(unsigned k);

// Extends a generator-image map N -> N to an automorphism, returned as an
// index permutation; throws if the images do not define one.
std::vector<size_t> aut_from_gen_images(const FiniteGroup& N,
                                        const std::vector<size_t>& gens,
                                        const std::vector<size_t>& images);

// Table-group combinators used by the catalog.
FiniteGroup cyclic_group(size_t n);
FiniteGroup direct_product(const FiniteGroup& A, const FiniteGroup& B);
FiniteGroup dihedral_group(size_t n);   // order 2n
FiniteGroup dicyclic_group(size_t n);   // order 4n
FiniteGroup semidirect_cyclic(const FiniteGroup& N, size_t m,
                              const std::vector<size_t>& aut);
FiniteGroup semidirect_general(const FiniteGroup& N, const FiniteGroup& H,
                               const std::vector<std::vector<size_t>>& action);

struct CatalogEntry {
  std::string name;
  size_t order;
  FiniteGroup group;
};

// All 74 isomorphism classes of groups of order <= 24.
const std::vector<CatalogEntry>& catalog_upto_24();

struct ProblematicRow {
  size_t order;
  std::vector<unsigned> labels;
};

// Published labels of problematic groups by order (empty = none at that order).
const std::vector<ProblematicRow>& problematic_labels();

struct AuditResult {
  bool skipped = false;
  bool ok = false;
  std::string detail;
};

// Recomputes the problematic flag for labeled multiplication tables and diffs
// against problematic_labels() for the orders present in the stream.
AuditResult audit_problematic(std::istream& in);

struct GroupFileData {
  std::vector<GroupElement> generators;
};

// Header `universe perm|mat2 <modulus>|sd`, one generator per line.
GroupFileData parse_group_file(std::istream& in);

// `order N` then N rows of N indices.
FiniteGroup parse_mult_table(std::istream& in);

}  // namespace isobound::groups
