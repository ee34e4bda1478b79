#include "isobound/zmod2k.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace isobound::z2k {

uint32_t unit_inv(uint32_t u, unsigned k) {
  if (!(u & 1)) throw std::invalid_argument("inverse of even residue mod 2^k");
  uint64_t mask = (k >= 32) ? ~0ull : ((1ull << k) - 1);
  uint64_t x = 1;  // inverse mod 2
  for (unsigned bits = 1; bits < k; bits *= 2) x = (x * (2 - u * x)) & mask;
  return uint32_t(x & mask);
}

namespace {

inline uint32_t mask_of(unsigned k) { return (k >= 32) ? ~0u : ((1u << k) - 1); }

void row_scale(Vec& r, uint32_t s, uint32_t mask) {
  for (uint32_t& x : r) x = uint32_t((uint64_t(x) * s) & mask);
}

// r -= s * p
void row_submul(Vec& r, uint32_t s, const Vec& p, uint32_t mask) {
  for (size_t i = 0; i < r.size(); ++i)
    r[i] = uint32_t((r[i] + uint64_t(mask + 1u) - ((uint64_t(s) * p[i]) & mask)) & mask);
}

bool row_zero(const Vec& r) {
  return std::all_of(r.begin(), r.end(), [](uint32_t x) { return x == 0; });
}

}  // namespace

HowellBasis howell_form(unsigned k, size_t width, std::vector<Vec> rows) {
  if (k < 1 || k > 30) throw std::invalid_argument("howell_form: k out of range");
  const uint32_t mask = mask_of(k);
  for (Vec& r : rows) {
    if (r.size() != width) throw std::invalid_argument("howell_form: ragged rows");
    for (uint32_t& x : r) x &= mask;
  }
  HowellBasis out;
  out.k = k;
  out.width = width;
  std::vector<Vec> work;
  for (Vec& r : rows)
    if (!row_zero(r)) work.push_back(std::move(r));

  for (size_t col = 0; col < width; ++col) {
    // invariant: every row in work is zero left of col
    size_t best = work.size();
    unsigned best_v = k;
    for (size_t i = 0; i < work.size(); ++i) {
      if (work[i][col] == 0) continue;
      unsigned v = v2(work[i][col], k);
      if (v < best_v) best_v = v, best = i;
    }
    if (best == work.size()) continue;
    Vec piv = std::move(work[best]);
    work.erase(work.begin() + best);
    row_scale(piv, unit_inv(piv[col] >> best_v, k), mask);  // pivot entry -> 2^best_v
    for (Vec& w : work)
      if (w[col] != 0) row_submul(w, w[col] >> best_v, piv, mask);
    std::erase_if(work, row_zero);
    // annihilator of the pivot joins the pool so the span keeps its
    // leading-zero elements representable
    Vec ann = piv;
    row_scale(ann, uint32_t((1ull << (k - best_v)) & mask), mask);
    if (!row_zero(ann)) work.push_back(std::move(ann));
    out.rows.push_back(std::move(piv));
    out.pivot_col.push_back(unsigned(col));
    out.pivot_val.push_back(best_v);
  }
  // canonical: entries above a pivot reduced mod the pivot value
  for (size_t i = 0; i < out.rows.size(); ++i)
    for (size_t e = 0; e < i; ++e) {
      uint32_t x = out.rows[e][out.pivot_col[i]];
      if (x >> out.pivot_val[i]) row_submul(out.rows[e], x >> out.pivot_val[i], out.rows[i], mask);
    }
  return out;
}

std::optional<Vec> coordinates(const HowellBasis& basis, const Vec& v) {
  if (v.size() != basis.width) throw std::invalid_argument("coordinates: width mismatch");
  const uint32_t mask = mask_of(basis.k);
  Vec rem = v;
  for (uint32_t& x : rem) x &= mask;
  Vec coeffs(basis.rows.size(), 0);
  for (size_t i = 0; i < basis.rows.size(); ++i) {
    uint32_t x = rem[basis.pivot_col[i]];
    if (x == 0) continue;
    if (v2(x, basis.k) < basis.pivot_val[i]) return std::nullopt;
    coeffs[i] = x >> basis.pivot_val[i];
    row_submul(rem, coeffs[i], basis.rows[i], mask);
  }
  if (!row_zero(rem)) return std::nullopt;
  return coeffs;
}

bool member(const HowellBasis& basis, const Vec& v) { return coordinates(basis, v).has_value(); }

std::vector<Vec> left_kernel(unsigned k, const std::vector<Vec>& mat_rows) {
  if (mat_rows.empty()) return {};
  size_t n = mat_rows.size(), w = mat_rows[0].size();
  std::vector<Vec> aug(n);
  for (size_t i = 0; i < n; ++i) {
    if (mat_rows[i].size() != w) throw std::invalid_argument("left_kernel: ragged rows");
    aug[i] = mat_rows[i];
    aug[i].resize(w + n, 0);
    aug[i][w + i] = 1;
  }
  HowellBasis h = howell_form(k, w + n, std::move(aug));
  std::vector<Vec> kernel;
  for (size_t i = 0; i < h.rows.size(); ++i) {
    if (h.pivot_col[i] < w) continue;  // M-part nonzero
    kernel.emplace_back(h.rows[i].begin() + w, h.rows[i].end());
  }
  return kernel;
}

std::set<Vec> enumerate_span(unsigned k, const std::vector<Vec>& rows) {
  const uint32_t mask = mask_of(k);
  const uint32_t q = mask + 1u;
  if (rows.empty()) return {};
  size_t w = rows[0].size();
  std::set<Vec> span;
  std::vector<uint32_t> c(rows.size(), 0);
  while (true) {
    Vec v(w, 0);
    for (size_t i = 0; i < rows.size(); ++i)
      for (size_t j = 0; j < w; ++j) v[j] = uint32_t((v[j] + uint64_t(c[i]) * rows[i][j]) & mask);
    span.insert(v);
    size_t i = 0;
    for (; i < c.size(); ++i) {
      if (++c[i] < q) break;
      c[i] = 0;
    }
    if (i == c.size()) break;
  }
  return span;
}

Mat2 Mat2::identity(unsigned k) { return Mat2{k, {1, 0, 0, 1}}; }

Mat2 Mat2::zero(unsigned k) { return Mat2{k, {0, 0, 0, 0}}; }

Mat2 Mat2::mul(const Mat2& o) const {
  assert(k == o.k);
  const uint32_t m = mask();
  auto mm = [&](int a, int b, int c, int d) {
    return uint32_t((uint64_t(e[a]) * o.e[b] + uint64_t(e[c]) * o.e[d]) & m);
  };
  return Mat2{k, {mm(0, 0, 1, 2), mm(0, 1, 1, 3), mm(2, 0, 3, 2), mm(2, 1, 3, 3)}};
}

Mat2 Mat2::add(const Mat2& o) const {
  assert(k == o.k);
  const uint32_t m = mask();
  return Mat2{k, {(e[0] + o.e[0]) & m, (e[1] + o.e[1]) & m, (e[2] + o.e[2]) & m, (e[3] + o.e[3]) & m}};
}

Mat2 Mat2::sub(const Mat2& o) const { return add(o.neg()); }

Mat2 Mat2::neg() const {
  const uint32_t m = mask();
  Mat2 r{k, {}};
  for (int i = 0; i < 4; ++i) r.e[i] = (m + 1u - e[i]) & m;
  return r;
}

Mat2 Mat2::scale(uint32_t s) const {
  const uint32_t m = mask();
  Mat2 r{k, {}};
  for (int i = 0; i < 4; ++i) r.e[i] = uint32_t((uint64_t(s) * e[i]) & m);
  return r;
}

uint32_t Mat2::det() const {
  const uint32_t m = mask();
  return uint32_t((uint64_t(e[0]) * e[3] + (uint64_t(m) + 1u) * (m + 1u) - uint64_t(e[1]) * e[2]) & m);
}

uint32_t Mat2::tr() const { return (e[0] + e[3]) & mask(); }

Mat2 Mat2::inverse() const {
  uint32_t d = det();
  if (!(d & 1)) throw std::invalid_argument("Mat2::inverse: determinant not a unit");
  uint32_t di = unit_inv(d, k);
  Mat2 adj{k, {e[3], neg().e[1], neg().e[2], e[0]}};
  return adj.scale(di);
}

Mat2 Mat2::reduced(unsigned k2) const {
  Mat2 r{k2, e};
  const uint32_t m = r.mask();
  for (auto& x : r.e) x &= m;
  return r;
}

}  // namespace isobound::z2k
