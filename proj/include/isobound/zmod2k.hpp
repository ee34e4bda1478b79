/* Linear algebra over Z/2^k. Every nonzero element of Z/2^k is (unit)*2^j, so
   modules of row vectors admit a Howell canonical form: an echelon form, with
   pivots normalized to exact powers of two and entries above a pivot reduced
   below it, whose row list also spans every span element with leading zeros
   (annihilator rows are folded in). That last property is what makes
   membership, coordinates, and left kernels exact over a ring with zero
   divisors. Also the shared 2x2 matrix type mod 2^k used by the group and
   deviation machinery. */
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <vector>

namespace isobound::z2k {

using Vec = std::vector<uint32_t>;

// Inverse of an odd residue mod 2^k (k <= 30), by Newton lifting.
uint32_t unit_inv(uint32_t u, unsigned k);

inline uint32_t v2(uint32_t x, unsigned k) {
  // valuation of x in Z/2^k; v2(0) = k by convention
  if (x == 0) return k;
  unsigned v = 0;
  while (!(x & 1)) x >>= 1, ++v;
  return v;
}

struct HowellBasis {
  unsigned k = 1;
  size_t width = 0;
  std::vector<Vec> rows;               // canonical, pivot columns increasing
  std::vector<unsigned> pivot_col;     // per row
  std::vector<unsigned> pivot_val;     // per row: j with pivot entry 2^j

  size_t rank() const { return rows.size(); }
};

HowellBasis howell_form(unsigned k, size_t width, std::vector<Vec> rows);

// Membership of v in the row span; coordinates() also returns the coefficient
// applied to each basis row (unique mod 2^(k - pivot_val)).
bool member(const HowellBasis& basis, const Vec& v);
std::optional<Vec> coordinates(const HowellBasis& basis, const Vec& v);

// Basis of {y : y*M = 0 over Z/2^k} for the given rows of M, via the Howell
// form of [M | I]: rows whose M-part vanishes carry the kernel.
std::vector<Vec> left_kernel(unsigned k, const std::vector<Vec>& mat_rows);

// Full span enumeration; exponential, test oracle only.
std::set<Vec> enumerate_span(unsigned k, const std::vector<Vec>& rows);

// 2x2 matrix with entries in Z/2^k, row-major [e0 e1; e2 e3].
struct Mat2 {
  unsigned k = 1;
  std::array<uint32_t, 4> e{0, 0, 0, 0};

  static Mat2 identity(unsigned k);
  static Mat2 zero(unsigned k);

  uint32_t mask() const { return (k >= 32) ? ~0u : ((1u << k) - 1); }
  Mat2 mul(const Mat2& o) const;
  Mat2 add(const Mat2& o) const;
  Mat2 sub(const Mat2& o) const;
  Mat2 neg() const;
  Mat2 scale(uint32_t s) const;
  uint32_t det() const;
  uint32_t tr() const;
  bool invertible() const { return det() & 1; }
  Mat2 inverse() const;  // requires odd determinant
  Mat2 reduced(unsigned k2) const;

  bool operator==(const Mat2& o) const { return k == o.k && e == o.e; }
  auto operator<=>(const Mat2& o) const = default;
};

}  // namespace isobound::z2k
