#include "isobound/groups.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <deque>
#include <functional>
#include <istream>
#include <numeric>
#include <set>
#include <sstream>

namespace isobound::groups {

Perm Perm::identity(size_t n) {
  Perm p;
  p.img.resize(n);
  std::iota(p.img.begin(), p.img.end(), uint8_t{0});
  return p;
}

Perm Perm::compose(const Perm& o) const {
  assert(img.size() == o.img.size());
  Perm r;
  r.img.resize(img.size());
  for (size_t i = 0; i < img.size(); ++i) r.img[i] = img[o.img[i]];
  return r;
}

Perm Perm::inverse() const {
  Perm r;
  r.img.resize(img.size());
  for (size_t i = 0; i < img.size(); ++i) r.img[img[i]] = uint8_t(i);
  return r;
}

uint8_t f2_mul(uint8_t a, uint8_t b) {
  unsigned a00 = a & 1, a01 = (a >> 1) & 1, a10 = (a >> 2) & 1, a11 = (a >> 3) & 1;
  unsigned b00 = b & 1, b01 = (b >> 1) & 1, b10 = (b >> 2) & 1, b11 = (b >> 3) & 1;
  unsigned c00 = (a00 & b00) ^ (a01 & b10);
  unsigned c01 = (a00 & b01) ^ (a01 & b11);
  unsigned c10 = (a10 & b00) ^ (a11 & b10);
  unsigned c11 = (a10 & b01) ^ (a11 & b11);
  return uint8_t(c00 | (c01 << 1) | (c10 << 2) | (c11 << 3));
}

uint8_t f2_inverse(uint8_t a) {
  if (!f2_invertible(a)) throw std::invalid_argument("f2_inverse: singular matrix");
  // adjugate; over F2 the determinant is 1 so no scaling
  unsigned a00 = a & 1, a01 = (a >> 1) & 1, a10 = (a >> 2) & 1, a11 = (a >> 3) & 1;
  return uint8_t(a11 | (a01 << 1) | (a10 << 2) | (a00 << 3));
}

SDPair SDPair::mul(const SDPair& o) const {
  SDPair r;
  r.a = uint8_t(a ^ f2_mul(b, f2_mul(o.a, f2_inverse(b))));
  r.b = f2_mul(b, o.b);
  return r;
}

SDPair SDPair::inverse() const {
  SDPair r;
  r.b = f2_inverse(b);
  r.a = f2_mul(r.b, f2_mul(a, b));
  return r;
}

GroupElement ge_mul(const GroupElement& x, const GroupElement& y) {
  if (x.index() != y.index()) throw std::invalid_argument("ge_mul: universe mismatch");
  if (auto* p = std::get_if<Perm>(&x)) return p->compose(std::get<Perm>(y));
  if (auto* m = std::get_if<z2k::Mat2>(&x)) return m->mul(std::get<z2k::Mat2>(y));
  return std::get<SDPair>(x).mul(std::get<SDPair>(y));
}

GroupElement ge_inverse(const GroupElement& x) {
  if (auto* p = std::get_if<Perm>(&x)) return p->inverse();
  if (auto* m = std::get_if<z2k::Mat2>(&x)) return m->inverse();
  return std::get<SDPair>(x).inverse();
}

GroupElement ge_identity(const GroupElement& like) {
  if (auto* p = std::get_if<Perm>(&like)) return Perm::identity(p->img.size());
  if (auto* m = std::get_if<z2k::Mat2>(&like)) return z2k::Mat2::identity(m->k);
  return SDPair{};
}

namespace {

void check_same_shape(const std::vector<GroupElement>& gens) {
  for (const GroupElement& g : gens) {
    if (g.index() != gens[0].index())
      throw std::invalid_argument("generators span multiple universes");
    if (auto* p = std::get_if<Perm>(&g)) {
      if (p->img.size() != std::get<Perm>(gens[0]).img.size())
        throw std::invalid_argument("permutation generators of mixed degree");
      if (p->img.size() > 16) throw std::invalid_argument("permutation degree > 16");
    } else if (auto* m = std::get_if<z2k::Mat2>(&g)) {
      if (m->k != std::get<z2k::Mat2>(gens[0]).k)
        throw std::invalid_argument("matrix generators of mixed modulus");
      if (m->k > 6) throw std::invalid_argument("matrix modulus exponent > 6");
      if (!m->invertible()) throw std::invalid_argument("matrix generator not invertible");
    } else {
      if (!f2_invertible(std::get<SDPair>(g).b))
        throw std::invalid_argument("sd generator with singular B part");
    }
  }
}

}  // namespace

FiniteGroup FiniteGroup::close(std::vector<GroupElement> generators) {
  if (generators.empty()) return from_table({{0}}, false);
  check_same_shape(generators);

  std::map<GroupElement, size_t> seen;
  std::vector<GroupElement> elems;
  std::deque<size_t> work;
  auto add = [&](GroupElement e) {
    auto [it, fresh] = seen.emplace(std::move(e), elems.size());
    if (fresh) {
      elems.push_back(it->first);
      work.push_back(it->second);
      if (elems.size() > kClosureGuard) throw SizeGuardExceeded("group closure exceeds guard");
    }
    return it->second;
  };
  add(ge_identity(generators[0]));
  for (const GroupElement& g : generators) add(g);
  while (!work.empty()) {
    size_t i = work.front();
    work.pop_front();
    for (const GroupElement& g : generators) add(ge_mul(elems[i], g));
  }

  FiniteGroup G;
  G.elems_ = std::move(elems);
  std::sort(G.elems_.begin(), G.elems_.end());
  G.n_ = G.elems_.size();
  for (size_t i = 0; i < G.n_; ++i) G.index_.emplace(G.elems_[i], i);
  G.id_ = G.index_.at(ge_identity(generators[0]));
  std::set<size_t> gset;
  for (const GroupElement& g : generators) gset.insert(G.index_.at(g));
  G.gens_.assign(gset.begin(), gset.end());
  G.finish();
  return G;
}

FiniteGroup close_group(const std::vector<GroupElement>& generators) {
  return FiniteGroup::close(generators);
}

FiniteGroup FiniteGroup::from_table(std::vector<std::vector<uint32_t>> table, bool validate) {
  size_t n = table.size();
  if (n == 0) throw std::invalid_argument("empty multiplication table");
  FiniteGroup G;
  G.n_ = n;
  G.table_.resize(n * n);
  for (size_t i = 0; i < n; ++i) {
    if (table[i].size() != n) throw std::invalid_argument("multiplication table not square");
    for (size_t j = 0; j < n; ++j) {
      if (table[i][j] >= n) throw std::invalid_argument("table entry out of range");
      G.table_[i * n + j] = table[i][j];
    }
  }
  // identity: the unique two-sided unit
  size_t id = n;
  for (size_t e = 0; e < n; ++e) {
    bool ok = true;
    for (size_t j = 0; j < n && ok; ++j)
      ok = G.table_[e * n + j] == j && G.table_[j * n + e] == j;
    if (ok) {
      id = e;
      break;
    }
  }
  if (id == n) throw std::invalid_argument("table has no identity");
  G.id_ = id;
  if (validate) {
    // rows and columns must be permutations
    for (size_t i = 0; i < n; ++i) {
      std::vector<char> row(n, 0), col(n, 0);
      for (size_t j = 0; j < n; ++j) {
        row[G.table_[i * n + j]] = 1;
        col[G.table_[j * n + i]] = 1;
      }
      for (size_t j = 0; j < n; ++j)
        if (!row[j] || !col[j]) throw std::invalid_argument("table rows/columns not bijective");
    }
    // full associativity for small tables, seeded random triples above
    if (n <= 64) {
      for (size_t a = 0; a < n; ++a)
        for (size_t b = 0; b < n; ++b)
          for (size_t c = 0; c < n; ++c)
            if (G.table_[G.table_[a * n + b] * n + c] != G.table_[a * n + G.table_[b * n + c]])
              throw std::invalid_argument("table not associative");
    } else {
      uint64_t s = 0x9e3779b97f4a7c15ull;
      for (int t = 0; t < 10000; ++t) {
        s = s * 6364136223846793005ull + 1442695040888963407ull;
        size_t a = (s >> 33) % n, b = (s >> 13) % n, c = s % n;
        if (G.table_[G.table_[a * n + b] * n + c] != G.table_[a * n + G.table_[b * n + c]])
          throw std::invalid_argument("table not associative");
      }
    }
  }
  G.finish();
  return G;
}

void FiniteGroup::finish() {
  // build the table for small concrete groups
  if (table_.empty() && n_ <= kTableCap) {
    table_.resize(n_ * n_);
    for (size_t i = 0; i < n_; ++i)
      for (size_t j = 0; j < n_; ++j)
        table_[i * n_ + j] = uint32_t(index_.at(ge_mul(elems_[i], elems_[j])));
  }
  invs_.resize(n_);
  if (!elems_.empty()) {
    for (size_t i = 0; i < n_; ++i) invs_[i] = uint32_t(index_.at(ge_inverse(elems_[i])));
  } else {
    for (size_t i = 0; i < n_; ++i) {
      for (size_t j = 0; j < n_; ++j)
        if (table_[i * n_ + j] == id_) {
          invs_[i] = uint32_t(j);
          break;
        }
    }
  }
  if (gens_.empty() && n_ > 1) {
    // greedy generating set: repeatedly add a maximal-order element outside
    // the closure of what we have
    std::vector<char> inside(n_, 0);
    inside[id_] = 1;
    size_t covered = 1;
    std::vector<unsigned> ords(n_);
    for (size_t i = 0; i < n_; ++i) ords[i] = element_order(i);
    while (covered < n_) {
      size_t best = n_;
      for (size_t i = 0; i < n_; ++i)
        if (!inside[i] && (best == n_ || ords[i] > ords[best])) best = i;
      gens_.push_back(best);
      std::fill(inside.begin(), inside.end(), 0);
      inside[id_] = 1;
      covered = 1;
      std::deque<size_t> work{id_};
      while (!work.empty()) {
        size_t x = work.front();
        work.pop_front();
        for (size_t g : gens_) {
          size_t y = mul(x, g);
          if (!inside[y]) {
            inside[y] = 1;
            ++covered;
            work.push_back(y);
          }
        }
      }
    }
  }
}

size_t FiniteGroup::mul(size_t i, size_t j) const {
  if (!table_.empty()) return table_[i * n_ + j];
  return index_.at(ge_mul(elems_[i], elems_[j]));
}

size_t FiniteGroup::inv(size_t i) const { return invs_[i]; }

unsigned FiniteGroup::element_order(size_t i) const {
  unsigned ord = 1;
  size_t x = i;
  while (x != id_) {
    x = mul(x, i);
    ++ord;
  }
  return ord;
}

bool FiniteGroup::is_abelian() const {
  if (n_ <= 1) return true;
  const std::vector<size_t>& gs = gens_;
  for (size_t a : gs)
    for (size_t b : gs)
      if (mul(a, b) != mul(b, a)) return false;
  return true;
}

const GroupElement& FiniteGroup::element(size_t i) const {
  if (elems_.empty()) throw std::logic_error("abstract table group has no concrete elements");
  return elems_[i];
}

std::optional<size_t> FiniteGroup::index_of(const GroupElement& e) const {
  auto it = index_.find(e);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

ConjClassPartition conjugacy_classes(const FiniteGroup& G) {
  size_t n = G.order();
  ConjClassPartition part;
  part.class_of.assign(n, SIZE_MAX);
  std::vector<size_t> gens = G.generators();
  if (gens.empty()) gens.push_back(G.identity());
  for (size_t g = 0; g < n; ++g) {
    if (part.class_of[g] != SIZE_MAX) continue;
    size_t ci = part.classes.size();
    std::vector<size_t> cls{g};
    part.class_of[g] = ci;
    std::deque<size_t> work{g};
    while (!work.empty()) {
      size_t x = work.front();
      work.pop_front();
      for (size_t s : gens) {
        size_t y = G.mul(G.mul(s, x), G.inv(s));
        if (part.class_of[y] == SIZE_MAX) {
          part.class_of[y] = ci;
          cls.push_back(y);
          work.push_back(y);
        }
      }
    }
    std::sort(cls.begin(), cls.end());
    part.classes.push_back(std::move(cls));
  }
  return part;
}

namespace {

using Mask = std::array<uint64_t, 4>;  // up to 256 bits

inline void mask_set(Mask& m, size_t i) { m[i >> 6] |= uint64_t(1) << (i & 63); }
inline bool mask_get(const Mask& m, size_t i) { return (m[i >> 6] >> (i & 63)) & 1; }
inline Mask mask_or(const Mask& a, const Mask& b) {
  return {a[0] | b[0], a[1] | b[1], a[2] | b[2], a[3] | b[3]};
}
inline bool mask_eq(const Mask& a, const Mask& b) { return a == b; }
inline size_t mask_count(const Mask& m) {
  size_t c = 0;
  for (uint64_t w : m) c += size_t(__builtin_popcountll(w));
  return c;
}

}  // namespace

std::vector<std::vector<size_t>> normal_subgroups(const FiniteGroup& G) {
  size_t n = G.order();
  if (n > 256) throw SizeGuardExceeded("normal_subgroups: |G| > 256");
  ConjClassPartition part = conjugacy_classes(G);
  size_t nc = part.classes.size();

  // classprod[i][j]: classes met by products of class i with class j
  std::vector<Mask> classprod(nc * nc, Mask{});
  for (size_t a = 0; a < n; ++a)
    for (size_t b = 0; b < n; ++b) {
      size_t i = part.class_of[a], j = part.class_of[b];
      mask_set(classprod[i * nc + j], part.class_of[G.mul(a, b)]);
    }

  auto closure = [&](Mask s) {
    for (;;) {
      Mask t = s;
      for (size_t i = 0; i < nc; ++i) {
        if (!mask_get(s, i)) continue;
        for (size_t j = 0; j < nc; ++j)
          if (mask_get(s, j)) t = mask_or(t, classprod[i * nc + j]);
      }
      if (mask_eq(t, s)) return s;
      s = t;
    }
  };

  Mask trivial{};
  mask_set(trivial, part.class_of[G.identity()]);
  trivial = closure(trivial);

  std::set<Mask> found{trivial};
  std::deque<Mask> work{trivial};
  while (!work.empty()) {
    Mask m = work.front();
    work.pop_front();
    for (size_t c = 0; c < nc; ++c) {
      if (mask_get(m, c)) continue;
      Mask grown = m;
      mask_set(grown, c);
      grown = closure(grown);
      if (found.insert(grown).second) work.push_back(grown);
    }
  }

  std::vector<std::vector<size_t>> result;
  for (const Mask& m : found) {
    std::vector<size_t> sub;
    for (size_t c = 0; c < nc; ++c)
      if (mask_get(m, c))
        sub.insert(sub.end(), part.classes[c].begin(), part.classes[c].end());
    std::sort(sub.begin(), sub.end());
    result.push_back(std::move(sub));
  }
  std::sort(result.begin(), result.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return result;
}

QuotientMap quotient(const FiniteGroup& G, const std::vector<size_t>& N) {
  size_t n = G.order();
  std::vector<char> in(n, 0);
  for (size_t x : N) {
    if (x >= n) throw std::invalid_argument("quotient: element index out of range");
    in[x] = 1;
  }
  if (!in[G.identity()]) throw NotNormal("subset does not contain the identity");
  for (size_t x : N)
    for (size_t y : N)
      if (!in[G.mul(x, y)]) throw NotNormal("subset not closed under product");
  for (size_t s = 0; s < n; ++s)
    for (size_t x : N)
      if (!in[G.mul(G.mul(s, x), G.inv(s))]) throw NotNormal("subgroup not normal");

  // left cosets keyed by their least member
  std::vector<size_t> rep(n);
  for (size_t g = 0; g < n; ++g) {
    size_t r = n;
    for (size_t x : N) r = std::min(r, G.mul(g, x));
    rep[g] = r;
  }
  std::map<size_t, uint32_t> qidx;
  std::vector<size_t> reps;
  for (size_t g = 0; g < n; ++g)
    if (qidx.emplace(rep[g], uint32_t(qidx.size())).second) {}
  for (auto& [r, i] : qidx) {
    (void)i;
    reps.push_back(r);
  }
  size_t q = qidx.size();
  std::vector<uint32_t> proj(n);
  for (size_t g = 0; g < n; ++g) proj[g] = qidx.at(rep[g]);
  std::vector<std::vector<uint32_t>> qt(q, std::vector<uint32_t>(q));
  for (size_t i = 0; i < q; ++i)
    for (size_t j = 0; j < q; ++j) qt[i][j] = proj[G.mul(reps[i], reps[j])];

  QuotientMap qm;
  qm.kernel = N;
  std::sort(qm.kernel.begin(), qm.kernel.end());
  qm.quot = FiniteGroup::from_table(std::move(qt), false);
  qm.proj = std::move(proj);
  for (size_t g = 0; g < n; ++g) {
    bool k = qm.proj[g] == qm.proj[G.identity()];
    if (k != bool(in[g])) throw std::logic_error("quotient kernel mismatch");
  }
  return qm;
}

namespace {

// order of gN in G/N is > k iff no g^m with 1 <= m <= k lies in N
bool coset_order_gt(const FiniteGroup& G, size_t g, unsigned k, const std::vector<char>& in) {
  size_t x = g;
  for (unsigned m = 1; m <= k; ++m) {
    if (in[x]) return false;
    x = G.mul(x, g);
  }
  return true;
}

unsigned group_exponent(const FiniteGroup& G) {
  unsigned e = 1;
  for (size_t i = 0; i < G.order(); ++i) e = std::lcm(e, G.element_order(i));
  return e;
}

}  // namespace

namespace {

// scans normal subgroups ascending by size; min_kernel = 2 restricts to
// proper quotients
std::optional<QuotientOrderWitness> quotient_order_scan(const FiniteGroup& G, unsigned k,
                                                        size_t min_kernel) {
  size_t n = G.order();
  for (const std::vector<size_t>& N : normal_subgroups(G)) {
    if (N.size() < min_kernel) continue;
    std::vector<char> in(n, 0);
    for (size_t x : N) in[x] = 1;
    for (size_t g = 0; g < n; ++g) {
      if (in[g] || !coset_order_gt(G, g, k, in)) continue;
      QuotientMap qm = quotient(G, N);
      QuotientOrderWitness w;
      w.kernel = N;
      w.quotient_order = qm.quot.order();
      w.witness = qm.proj[g];
      w.witness_order = qm.quot.element_order(qm.proj[g]);
      return w;
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<QuotientOrderWitness> has_quotient_with_element_order_gt(const FiniteGroup& G,
                                                                       unsigned k) {
  size_t n = G.order();
  if (n > 256) throw SizeGuardExceeded("has_quotient_with_element_order_gt: |G| > 256");
  // the largest candidate quotient is G itself
  for (size_t g = 0; g < n; ++g)
    if (G.element_order(g) > k) {
      QuotientOrderWitness w;
      w.kernel = {G.identity()};
      w.quotient_order = n;
      QuotientMap qm = quotient(G, w.kernel);
      w.witness = qm.proj[g];
      w.witness_order = G.element_order(g);
      return w;
    }
  if (G.is_abelian()) return std::nullopt;  // quotient exponents divide exp(G) <= k
  return quotient_order_scan(G, k, 2);
}

std::optional<QuotientOrderWitness> has_proper_quotient_with_element_order_gt(
    const FiniteGroup& G, unsigned k) {
  size_t n = G.order();
  if (n > 256) throw SizeGuardExceeded("has_proper_quotient_with_element_order_gt: |G| > 256");
  if (G.is_abelian()) {
    /* Minimal kernels suffice: if G/N has an element of order > k and P <= N
       has prime order, G/N is a further quotient of G/P, so a preimage in
       G/P has order a multiple of one that is > k. Prime kernels also give
       the largest quotients, so scan elements of prime order, smallest
       prime first. Avoids enumerating the full (possibly huge) subgroup
       lattice of large abelian 2-groups. */
    std::vector<std::pair<unsigned, size_t>> prime_elems;
    for (size_t x = 0; x < n; ++x) {
      unsigned o = G.element_order(x);
      bool isprime = o >= 2;
      for (unsigned d = 2; isprime && d * d <= o; ++d)
        if (o % d == 0) isprime = false;
      if (isprime) prime_elems.push_back({o, x});
    }
    std::sort(prime_elems.begin(), prime_elems.end());
    for (auto [p, x] : prime_elems) {
      (void)p;
      std::vector<size_t> N;
      size_t y = G.identity();
      do {
        N.push_back(y);
        y = G.mul(y, x);
      } while (y != G.identity());
      std::sort(N.begin(), N.end());
      std::vector<char> in(n, 0);
      for (size_t z : N) in[z] = 1;
      for (size_t g = 0; g < n; ++g) {
        if (in[g] || !coset_order_gt(G, g, k, in)) continue;
        QuotientMap qm = quotient(G, N);
        QuotientOrderWitness w;
        w.kernel = N;
        w.quotient_order = qm.quot.order();
        w.witness = qm.proj[g];
        w.witness_order = qm.quot.element_order(qm.proj[g]);
        return w;
      }
    }
    return std::nullopt;
  }
  return quotient_order_scan(G, k, 2);
}

std::optional<size_t> smallest_quotient_order_with_element_order_gt(const FiniteGroup& G,
                                                                    unsigned k) {
  size_t n = G.order();
  if (n > 256) throw SizeGuardExceeded("smallest_quotient_order_with_element_order_gt: |G| > 256");
  if (G.is_abelian()) {
    unsigned e = group_exponent(G);
    std::optional<size_t> best;
    for (unsigned d = k + 1; d <= e; ++d)
      if (e % d == 0) {
        best = d;
        break;
      }
    return best;
  }
  std::optional<size_t> best;
  for (const std::vector<size_t>& N : normal_subgroups(G)) {
    size_t q = n / N.size();
    if (best && q >= *best) continue;
    std::vector<char> in(n, 0);
    for (size_t x : N) in[x] = 1;
    for (size_t g = 0; g < n; ++g)
      if (!in[g] && coset_order_gt(G, g, k, in)) {
        best = q;
        break;
      }
  }
  return best;
}

namespace {

/* Extends gens[i] -> imgs[i] (i < depth) to the subgroup generated by those
   gens via breadth-first closure, checking every Cayley edge for consistency.
   Returns false on conflict. When injective is set, distinct sources must map
   to distinct targets. out, if given, receives the full map (source-indexed,
   -1 outside the subgroup). */
bool try_extend(const FiniteGroup& G, const FiniteGroup& H, const std::vector<size_t>& gens,
                const std::vector<size_t>& imgs, size_t depth, bool injective,
                std::vector<int>* out) {
  std::vector<int> f(G.order(), -1);
  std::vector<int> used;
  if (injective) used.assign(H.order(), -1);
  f[G.identity()] = int(H.identity());
  if (injective) used[H.identity()] = int(G.identity());
  std::deque<size_t> work{G.identity()};
  while (!work.empty()) {
    size_t x = work.front();
    work.pop_front();
    for (size_t i = 0; i < depth; ++i) {
      size_t x2 = G.mul(x, gens[i]);
      int y2 = int(H.mul(size_t(f[x]), imgs[i]));
      if (f[x2] < 0) {
        if (injective) {
          if (used[y2] >= 0) return false;
          used[y2] = int(x2);
        }
        f[x2] = y2;
        work.push_back(x2);
      } else if (f[x2] != y2) {
        return false;
      }
    }
  }
  if (out) *out = std::move(f);
  return true;
}

size_t closure_size_in(const FiniteGroup& H, const std::vector<size_t>& gens) {
  std::vector<char> in(H.order(), 0);
  in[H.identity()] = 1;
  size_t cnt = 1;
  std::deque<size_t> work{H.identity()};
  while (!work.empty()) {
    size_t x = work.front();
    work.pop_front();
    for (size_t g : gens) {
      size_t y = H.mul(x, g);
      if (!in[y]) {
        in[y] = 1;
        ++cnt;
        work.push_back(y);
      }
    }
  }
  return cnt;
}

}  // namespace

bool hom_exists(const FiniteGroup& G, const FiniteGroup& H, bool surjective) {
  const std::vector<size_t>& gens = G.generators();
  if (gens.size() > 4) throw SizeGuardExceeded("hom_exists: more than 4 generators");
  if (H.order() > 64) throw SizeGuardExceeded("hom_exists: |H| > 64");
  if (G.order() == 1) return !surjective || H.order() == 1;

  std::vector<unsigned> gord(gens.size());
  for (size_t i = 0; i < gens.size(); ++i) gord[i] = G.element_order(gens[i]);
  std::vector<unsigned> hord(H.order());
  for (size_t h = 0; h < H.order(); ++h) hord[h] = H.element_order(h);

  std::vector<size_t> imgs(gens.size());
  std::function<bool(size_t)> rec = [&](size_t depth) -> bool {
    if (depth == gens.size()) {
      if (!surjective) return true;
      return closure_size_in(H, imgs) == H.order();
    }
    for (size_t h = 0; h < H.order(); ++h) {
      if (gord[depth] % hord[h] != 0) continue;
      imgs[depth] = h;
      if (try_extend(G, H, gens, imgs, depth + 1, false, nullptr) && rec(depth + 1)) return true;
    }
    return false;
  };
  return rec(0);
}

namespace {

std::multiset<unsigned> order_profile(const FiniteGroup& G) {
  std::multiset<unsigned> s;
  for (size_t i = 0; i < G.order(); ++i) s.insert(G.element_order(i));
  return s;
}

}  // namespace

bool iso_test(const FiniteGroup& G, const FiniteGroup& H) {
  if (G.order() != H.order()) return false;
  size_t n = G.order();
  if (n > 256) throw SizeGuardExceeded("iso_test: |G| > 256");
  if (n == 1) return true;

  if (order_profile(G) != order_profile(H)) return false;
  bool ga = G.is_abelian(), ha = H.is_abelian();
  if (ga != ha) return false;
  // finite abelian groups with equal element-order statistics are isomorphic
  if (ga) return true;

  ConjClassPartition pg = conjugacy_classes(G), ph = conjugacy_classes(H);
  auto signature = [](const FiniteGroup& X, const ConjClassPartition& p) {
    std::multiset<std::pair<unsigned, size_t>> s;
    for (size_t i = 0; i < X.order(); ++i)
      s.insert({X.element_order(i), p.classes[p.class_of[i]].size()});
    return s;
  };
  if (signature(G, pg) != signature(H, ph)) return false;

  const std::vector<size_t>& gens = G.generators();
  std::vector<size_t> imgs(gens.size());
  std::function<bool(size_t)> rec = [&](size_t depth) -> bool {
    if (depth == gens.size()) {
      std::vector<int> f;
      if (!try_extend(G, H, gens, imgs, depth, true, &f)) return false;
      for (int v : f)
        if (v < 0) return false;  // generators failed to cover G (cannot happen)
      return true;                // injective total map between equal orders
    }
    unsigned ord = G.element_order(gens[depth]);
    size_t csz = pg.classes[pg.class_of[gens[depth]]].size();
    for (size_t h = 0; h < n; ++h) {
      if (H.element_order(h) != ord) continue;
      if (ph.classes[ph.class_of[h]].size() != csz) continue;
      imgs[depth] = h;
      if (try_extend(G, H, gens, imgs, depth + 1, true, nullptr) && rec(depth + 1)) return true;
    }
    return false;
  };
  return rec(0);
}

const std::vector<unsigned>& delta_order_list() {
  static const std::vector<unsigned> list = [] {
    std::set<unsigned> s;
    for (int m = 0; m <= 4; ++m) {
      // divisors of 36 * 256^m are 2^a * 3^b with a <= 2 + 8m, b <= 2
      for (unsigned b = 0, p3 = 1; b <= 2; ++b, p3 *= 3)
        for (unsigned a = 0; a <= unsigned(2 + 8 * m); ++a) {
          unsigned long v = (unsigned long)p3 << a;
          if (v > 255) break;
          s.insert(unsigned(v));
        }
    }
    return std::vector<unsigned>(s.begin(), s.end());
  }();
  return list;
}

bool order_list_check(unsigned long n) {
  const std::vector<unsigned>& l = delta_order_list();
  return n >= 1 && std::binary_search(l.begin(), l.end(), n);
}

std::vector<z2k::Mat2> gl2_generators(unsigned k) {
  uint32_t m = (k >= 32) ? ~0u : ((1u << k) - 1);
  z2k::Mat2 e12{k, {1, 1, 0, 1}};
  z2k::Mat2 e21{k, {1, 0, 1, 1}};
  z2k::Mat2 dneg{k, {m, 0, 0, 1}};          // diag(-1, 1)
  z2k::Mat2 d5{k, {5u & m, 0, 0, 1}};       // diag(5, 1)
  return {e12, e21, dneg, d5};
}

std::vector<size_t> aut_from_gen_images(const FiniteGroup& N, const std::vector<size_t>& gens,
                                        const std::vector<size_t>& images) {
  if (gens.size() != images.size()) throw std::invalid_argument("generator/image count mismatch");
  std::vector<int> f;
  if (!try_extend(N, N, gens, images, gens.size(), true, &f))
    throw std::invalid_argument("images do not extend to an automorphism");
  std::vector<size_t> perm(N.order());
  for (size_t i = 0; i < N.order(); ++i) {
    if (f[i] < 0) throw std::invalid_argument("given generators do not generate the group");
    perm[i] = size_t(f[i]);
  }
  // full product preservation
  for (size_t a = 0; a < N.order(); ++a)
    for (size_t b = 0; b < N.order(); ++b)
      if (perm[N.mul(a, b)] != N.mul(perm[a], perm[b]))
        throw std::invalid_argument("extended map is not a homomorphism");
  return perm;
}

FiniteGroup cyclic_group(size_t n) {
  if (n == 0) throw std::invalid_argument("cyclic_group(0)");
  std::vector<std::vector<uint32_t>> t(n, std::vector<uint32_t>(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) t[i][j] = uint32_t((i + j) % n);
  return FiniteGroup::from_table(std::move(t), false);
}

FiniteGroup direct_product(const FiniteGroup& A, const FiniteGroup& B) {
  size_t na = A.order(), nb = B.order(), n = na * nb;
  if (n > FiniteGroup::kTableCap) throw SizeGuardExceeded("direct_product too large");
  std::vector<std::vector<uint32_t>> t(n, std::vector<uint32_t>(n));
  for (size_t a1 = 0; a1 < na; ++a1)
    for (size_t b1 = 0; b1 < nb; ++b1)
      for (size_t a2 = 0; a2 < na; ++a2)
        for (size_t b2 = 0; b2 < nb; ++b2)
          t[a1 * nb + b1][a2 * nb + b2] = uint32_t(A.mul(a1, a2) * nb + B.mul(b1, b2));
  return FiniteGroup::from_table(std::move(t), false);
}

FiniteGroup dihedral_group(size_t n) {
  if (n < 1) throw std::invalid_argument("dihedral_group(0)");
  size_t o = 2 * n;
  auto idx = [n](size_t i, size_t e) { return e * n + i; };
  std::vector<std::vector<uint32_t>> t(o, std::vector<uint32_t>(o));
  for (size_t i = 0; i < n; ++i)
    for (size_t e1 = 0; e1 < 2; ++e1)
      for (size_t j = 0; j < n; ++j)
        for (size_t e2 = 0; e2 < 2; ++e2) {
          size_t prod_i = e1 == 0 ? (i + j) % n : (i + n - j) % n;
          t[idx(i, e1)][idx(j, e2)] = uint32_t(idx(prod_i, e1 ^ e2));
        }
  return FiniteGroup::from_table(std::move(t), false);
}

FiniteGroup dicyclic_group(size_t n) {
  if (n < 1) throw std::invalid_argument("dicyclic_group(0)");
  size_t o = 4 * n;
  auto idx = [n](size_t i, size_t e) { return e * 2 * n + i; };
  std::vector<std::vector<uint32_t>> t(o, std::vector<uint32_t>(o));
  for (size_t i = 0; i < 2 * n; ++i)
    for (size_t e1 = 0; e1 < 2; ++e1)
      for (size_t j = 0; j < 2 * n; ++j)
        for (size_t e2 = 0; e2 < 2; ++e2) {
          size_t pi;
          size_t pe = e1 ^ e2;
          if (e1 == 0)
            pi = (i + j) % (2 * n);
          else
            pi = (i + 2 * n - j + (e2 ? n : 0)) % (2 * n);
          t[idx(i, e1)][idx(j, e2)] = uint32_t(idx(pi, pe));
        }
  return FiniteGroup::from_table(std::move(t), false);
}

FiniteGroup semidirect_cyclic(const FiniteGroup& N, size_t m, const std::vector<size_t>& aut) {
  std::vector<std::vector<size_t>> powers(m, std::vector<size_t>(N.order()));
  for (size_t x = 0; x < N.order(); ++x) powers[0][x] = x;
  for (size_t e = 1; e < m; ++e)
    for (size_t x = 0; x < N.order(); ++x) powers[e][x] = aut[powers[e - 1][x]];
  // aut^m must be the identity
  for (size_t x = 0; x < N.order(); ++x)
    if (aut[powers[m - 1][x]] != x)
      throw std::invalid_argument("semidirect_cyclic: automorphism order does not divide m");
  FiniteGroup H = cyclic_group(m);
  return semidirect_general(N, H, powers);
}

FiniteGroup semidirect_general(const FiniteGroup& N, const FiniteGroup& H,
                               const std::vector<std::vector<size_t>>& action) {
  size_t nn = N.order(), nh = H.order();
  if (action.size() != nh) throw std::invalid_argument("semidirect: action size != |H|");
  for (const auto& p : action) {
    if (p.size() != nn) throw std::invalid_argument("semidirect: action perm size != |N|");
    for (size_t a = 0; a < nn; ++a)
      for (size_t b = 0; b < nn; ++b)
        if (p[N.mul(a, b)] != N.mul(p[a], p[b]))
          throw std::invalid_argument("semidirect: action value not an automorphism");
  }
  for (size_t h1 = 0; h1 < nh; ++h1)
    for (size_t h2 = 0; h2 < nh; ++h2)
      for (size_t x = 0; x < nn; ++x)
        if (action[H.mul(h1, h2)][x] != action[h1][action[h2][x]])
          throw std::invalid_argument("semidirect: action is not a homomorphism");

  size_t o = nn * nh;
  if (o > FiniteGroup::kTableCap) throw SizeGuardExceeded("semidirect too large");
  auto idx = [nh](size_t x, size_t h) { return x * nh + h; };
  std::vector<std::vector<uint32_t>> t(o, std::vector<uint32_t>(o));
  for (size_t x1 = 0; x1 < nn; ++x1)
    for (size_t h1 = 0; h1 < nh; ++h1)
      for (size_t x2 = 0; x2 < nn; ++x2)
        for (size_t h2 = 0; h2 < nh; ++h2)
          t[idx(x1, h1)][idx(x2, h2)] =
              uint32_t(idx(N.mul(x1, action[h1][x2]), H.mul(h1, h2)));
  return FiniteGroup::from_table(std::move(t), false);
}

const std::vector<ProblematicRow>& problematic_labels() {
  static const std::vector<ProblematicRow> rows = {
      {32, {49, 50, 51}}, {36, {11}},   {48, {3, 50}},
      {64, {266, 267}},   {72, {}},     {96, {204}},
      {128, {2326, 2327, 2328}},        {144, {}},
      {192, {1023, 1025, 1541}},
  };
  return rows;
}

namespace {

std::string next_content_line(std::istream& in) {
  std::string line;
  while (std::getline(in, line)) {
    size_t h = line.find('#');
    if (h != std::string::npos) line.erase(h);
    size_t a = line.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) continue;
    size_t b = line.find_last_not_of(" \t\r\n");
    return line.substr(a, b - a + 1);
  }
  return {};
}

}  // namespace

FiniteGroup parse_mult_table(std::istream& in) {
  std::string head = next_content_line(in);
  std::istringstream hs(head);
  std::string kw;
  size_t n = 0;
  if (!(hs >> kw >> n) || kw != "order" || n == 0 || n > 256)
    throw std::invalid_argument("multiplication table: expected header 'order N', N in 1..256");
  std::vector<std::vector<uint32_t>> t(n, std::vector<uint32_t>(n));
  for (size_t i = 0; i < n; ++i) {
    std::istringstream ls(next_content_line(in));
    for (size_t j = 0; j < n; ++j)
      if (!(ls >> t[i][j])) throw std::invalid_argument("multiplication table: short row");
  }
  return FiniteGroup::from_table(std::move(t), true);
}

GroupFileData parse_group_file(std::istream& in) {
  std::string head = next_content_line(in);
  std::istringstream hs(head);
  std::string kw, uni;
  if (!(hs >> kw >> uni) || kw != "universe")
    throw std::invalid_argument("group file: expected header 'universe perm|mat2 <modulus>|sd'");
  GroupFileData out;
  unsigned k = 0;
  if (uni == "mat2") {
    unsigned long modulus = 0;
    if (!(hs >> modulus)) throw std::invalid_argument("group file: mat2 needs a modulus");
    while (k < 31 && (1ul << k) < modulus) ++k;
    if ((1ul << k) != modulus || k < 1 || k > 6)
      throw std::invalid_argument("group file: modulus must be 2^k, k in 1..6");
  } else if (uni != "perm" && uni != "sd") {
    throw std::invalid_argument("group file: unknown universe " + uni);
  }
  for (;;) {
    std::string line = next_content_line(in);
    if (line.empty()) break;
    std::istringstream ls(line);
    if (uni == "perm") {
      std::vector<long> vals;
      long v;
      while (ls >> v) vals.push_back(v);
      size_t n = vals.size();
      if (n == 0 || n > 16) throw std::invalid_argument("group file: permutation degree 1..16");
      Perm p;
      p.img.resize(n);
      std::vector<char> seen(n, 0);
      for (size_t i = 0; i < n; ++i) {
        if (vals[i] < 1 || size_t(vals[i]) > n || seen[vals[i] - 1])
          throw std::invalid_argument("group file: not a permutation of 1..n");
        seen[vals[i] - 1] = 1;
        p.img[i] = uint8_t(vals[i] - 1);
      }
      out.generators.emplace_back(std::move(p));
    } else if (uni == "mat2") {
      long long e[4];
      if (!(ls >> e[0] >> e[1] >> e[2] >> e[3]))
        throw std::invalid_argument("group file: mat2 generator needs 4 integers");
      uint32_t mask = (1u << k) - 1;
      z2k::Mat2 m{k, {}};
      for (int i = 0; i < 4; ++i) m.e[i] = uint32_t(((e[i] % (mask + 1ll)) + mask + 1ll)) & mask;
      if (!m.invertible()) throw std::invalid_argument("group file: matrix not invertible");
      out.generators.emplace_back(m);
    } else {
      int v[8];
      if (!(ls >> v[0] >> v[1] >> v[2] >> v[3] >> v[4] >> v[5] >> v[6] >> v[7]))
        throw std::invalid_argument("group file: sd generator needs 8 integers");
      SDPair p;
      p.a = p.b = 0;
      for (int i = 0; i < 4; ++i) {
        p.a |= uint8_t((v[i] & 1) << i);
        p.b |= uint8_t((v[4 + i] & 1) << i);
      }
      if (!f2_invertible(p.b)) throw std::invalid_argument("group file: sd B part singular");
      out.generators.emplace_back(p);
    }
  }
  if (out.generators.empty()) throw std::invalid_argument("group file: no generators");
  return out;
}

AuditResult audit_problematic(std::istream& in) {
  AuditResult res;
  std::map<size_t, std::set<unsigned>> computed;
  std::set<size_t> orders_seen;
  for (;;) {
    std::string line = next_content_line(in);
    if (line.empty()) break;
    std::istringstream ls(line);
    std::string kw;
    size_t order = 0;
    unsigned label = 0;
    if (!(ls >> kw >> order >> label) || kw != "label") {
      res.detail = "expected 'label <order> <index>', got: " + line;
      return res;
    }
    FiniteGroup G = parse_mult_table(in);
    if (G.order() != order) {
      res.detail = "table order mismatch for label " + std::to_string(label);
      return res;
    }
    orders_seen.insert(order);
    if (is_problematic(G)) computed[order].insert(label);
  }
  if (orders_seen.empty()) {
    res.skipped = true;
    res.detail = "no labeled tables in input";
    return res;
  }
  std::string diff;
  for (size_t order : orders_seen) {
    std::set<unsigned> expected;
    for (const ProblematicRow& row : problematic_labels())
      if (row.order == order) expected.insert(row.labels.begin(), row.labels.end());
    if (computed[order] != expected) {
      diff += "order " + std::to_string(order) + ": computed {";
      for (unsigned l : computed[order]) diff += std::to_string(l) + " ";
      diff += "} expected {";
      for (unsigned l : expected) diff += std::to_string(l) + " ";
      diff += "}; ";
    }
  }
  res.ok = diff.empty();
  res.detail = res.ok ? "all orders match" : diff;
  return res;
}

}  // namespace isobound::groups
