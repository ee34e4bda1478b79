/* Deviation invariants of paired representations G -> GL2(Z/2^k)^2: the pair
   algebra M in Howell form, delta(G) labeled inside (M/2M)^x, the trace
   valuation alpha, the conjugacy valuation beta with witness, the phi map
   into M2(F2) x| GL2(F2), distinguishing classes, the index-2 twist report,
   and the deterministic validation corpus. Every derived identity is
   re-verified at runtime; violations raise InternalError. */
#include "isobound/deviation.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <iterator>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <string>

namespace isobound::deviation {

namespace {

using z2k::Mat2;
using MatPair = std::pair<Mat2, Mat2>;

void require(bool ok, const char* msg) {
  if (!ok) throw InternalError(msg);
}

z2k::Vec pair_to_vec(const MatPair& p) {
  z2k::Vec v(8);
  for (int i = 0; i < 4; ++i) {
    v[i] = p.first.e[i];
    v[4 + i] = p.second.e[i];
  }
  return v;
}

MatPair vec_to_pair(unsigned k, const z2k::Vec& v) {
  return {Mat2{k, {v[0], v[1], v[2], v[3]}}, Mat2{k, {v[4], v[5], v[6], v[7]}}};
}

MatPair pair_mul(const MatPair& x, const MatPair& y) {
  return {x.first.mul(y.first), x.second.mul(y.second)};
}

uint8_t mod2_nibble(const Mat2& m) {
  return uint8_t((m.e[0] & 1) | (m.e[1] & 1) << 1 | (m.e[2] & 1) << 2 | (m.e[3] & 1) << 3);
}

// the mod-2 image of the first component is all of GL2(F2)
bool residual_full(const RepPair& rp) {
  std::set<uint8_t> nibs;
  for (const MatPair& p : rp.images) nibs.insert(mod2_nibble(p.first));
  return nibs.size() == 6;
}

uint32_t trace_diff(const RepPair& rp, size_t g) {
  const uint32_t mask = (1u << rp.k) - 1;
  return (rp.images[g].second.tr() - rp.images[g].first.tr()) & mask;
}

}  // namespace

RepPair make_rep_pair(unsigned k, groups::FiniteGroup G,
                      std::vector<std::pair<z2k::Mat2, z2k::Mat2>> images) {
  if (k < 2 || k > 6) throw std::invalid_argument("rep pair: modulus exponent must be in [2,6]");
  const size_t n = G.order();
  if (n == 0 || n > 1024) throw std::invalid_argument("rep pair: group order must be in [1,1024]");
  if (images.size() != n) throw std::invalid_argument("rep pair: one image pair per element");
  for (const MatPair& p : images) {
    if (p.first.k != k || p.second.k != k)
      throw std::invalid_argument("rep pair: image modulus mismatch");
    if (!p.first.invertible() || !p.second.invertible())
      throw std::invalid_argument("rep pair: image not invertible");
  }
  const Mat2 I = Mat2::identity(k);
  if (!(images[G.identity()].first == I) || !(images[G.identity()].second == I))
    throw std::invalid_argument("rep pair: identity must map to the identity matrix");
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      const MatPair& p = images[G.mul(i, j)];
      if (!(p.first == images[i].first.mul(images[j].first)) ||
          !(p.second == images[i].second.mul(images[j].second)))
        throw std::invalid_argument("rep pair: images do not respect the group law");
    }
  RepPair rp;
  rp.k = k;
  rp.G = std::move(G);
  rp.images = std::move(images);
  return rp;
}

RepPair from_generator_pairs(unsigned k,
                             const std::vector<std::pair<z2k::Mat2, z2k::Mat2>>& gens) {
  if (k < 2 || k > 6) throw std::invalid_argument("rep pair: modulus exponent must be in [2,6]");
  if (gens.empty()) throw std::invalid_argument("rep pair: no generator pairs");
  for (const MatPair& p : gens) {
    if (p.first.k != k || p.second.k != k)
      throw std::invalid_argument("rep pair: generator modulus mismatch");
    if (!p.first.invertible() || !p.second.invertible())
      throw std::invalid_argument("rep pair: generator not invertible");
  }

  // close the subgroup of GL2 x GL2 generated by the pairs; every element of
  // a finite closed-under-product set has its inverse as a power, so
  // right-multiplying by generators reaches the whole group
  std::map<MatPair, size_t> idx;
  std::vector<MatPair> elems;
  std::deque<size_t> work;
  auto add = [&](MatPair p) {
    auto [it, fresh] = idx.emplace(std::move(p), elems.size());
    if (fresh) {
      elems.push_back(it->first);
      if (elems.size() > 1024) throw groups::SizeGuardExceeded("pair closure exceeds 1024");
      work.push_back(it->second);
    }
  };
  add({Mat2::identity(k), Mat2::identity(k)});
  for (const MatPair& g : gens) add(g);
  while (!work.empty()) {
    size_t i = work.front();
    work.pop_front();
    for (const MatPair& g : gens) add(pair_mul(elems[i], g));
  }

  const size_t n = elems.size();
  std::vector<std::vector<uint32_t>> table(n, std::vector<uint32_t>(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      auto it = idx.find(pair_mul(elems[i], elems[j]));
      require(it != idx.end(), "pair closure not closed under the product");
      table[i][j] = uint32_t(it->second);
    }
  groups::FiniteGroup G = groups::FiniteGroup::from_table(std::move(table), true);
  return make_rep_pair(k, std::move(G), std::move(elems));
}

ModuleBasis algebra_closure(const RepPair& rp) {
  const unsigned k = rp.k;
  std::vector<z2k::Vec> rows;
  rows.reserve(rp.images.size());
  for (const MatPair& p : rp.images) rows.push_back(pair_to_vec(p));
  z2k::HowellBasis basis = z2k::howell_form(k, 8, rows);

  /* Product closure. The module product is bilinear, so closing the basis
     rows under pairwise products closes the whole module; submodule chains
     in (Z/2^k)^8 have length at most 8k, bounding the iterations. */
  for (unsigned round = 0;; ++round) {
    require(round <= 8 * k + 1, "algebra closure did not stabilize");
    std::vector<z2k::Vec> next = basis.rows;
    const size_t r = basis.rows.size();
    for (size_t i = 0; i < r; ++i)
      for (size_t j = 0; j < r; ++j) {
        MatPair a = vec_to_pair(k, basis.rows[i]);
        MatPair b = vec_to_pair(k, basis.rows[j]);
        next.push_back(pair_to_vec(pair_mul(a, b)));
      }
    z2k::HowellBasis nb = z2k::howell_form(k, 8, next);
    if (nb.rows == basis.rows) break;
    basis = std::move(nb);
  }

  ModuleBasis mb;
  mb.k = k;
  mb.basis = std::move(basis);
  mb.rank_profile.assign(k, 0);
  for (unsigned pv : mb.basis.pivot_val) {
    require(pv < k, "pivot valuation out of range");
    ++mb.rank_profile[pv];
  }
  return mb;
}

DeviationGroup deviation_group(const RepPair& rp) {
  const ModuleBasis M = algebra_closure(rp);
  const size_t n = rp.G.order();

  /* Label each image pair by its basis coordinates reduced mod 2. Peeling
     coordinates are congruent mod 2 exactly when the vectors agree mod 2M,
     so the label is a complete invariant of the class in M/2M. */
  std::map<std::vector<uint8_t>, size_t> seen;
  std::vector<std::vector<uint8_t>> labels;
  std::vector<size_t> rep_of;
  std::vector<size_t> proj(n);
  for (size_t g = 0; g < n; ++g) {
    std::optional<z2k::Vec> c = z2k::coordinates(M.basis, pair_to_vec(rp.images[g]));
    require(c.has_value(), "group image escapes its own algebra");
    std::vector<uint8_t> lab(c->size());
    for (size_t i = 0; i < c->size(); ++i) lab[i] = uint8_t((*c)[i] & 1);
    auto [it, fresh] = seen.emplace(std::move(lab), labels.size());
    if (fresh) {
      labels.push_back(it->first);
      rep_of.push_back(g);
    }
    proj[g] = it->second;
  }

  const size_t m = labels.size();
  std::vector<std::vector<uint32_t>> table(m, std::vector<uint32_t>(m));
  for (size_t a = 0; a < m; ++a)
    for (size_t b = 0; b < m; ++b)
      table[a][b] = uint32_t(proj[rp.G.mul(rep_of[a], rep_of[b])]);
  // the quotient law must not depend on the chosen representatives
  for (size_t g = 0; g < n; ++g)
    for (size_t h = 0; h < n; ++h)
      require(table[proj[g]][proj[h]] == proj[rp.G.mul(g, h)],
              "deviation labels do not define a quotient group");

  DeviationGroup D;
  D.delta = groups::FiniteGroup::from_table(std::move(table), true);
  D.labels = std::move(labels);
  D.proj = std::move(proj);
  require(M.rank() <= 8, "pair algebra rank exceeds its ambient dimension");
  require(D.delta.order() <= (size_t(1) << M.rank()),
          "deviation group larger than its label space");
  return D;
}

std::optional<unsigned> compute_alpha(const RepPair& rp) {
  unsigned best = rp.k;
  for (size_t g = 0; g < rp.G.order(); ++g)
    best = std::min(best, z2k::v2(trace_diff(rp, g), rp.k));
  if (best >= rp.k) return std::nullopt;
  return best;
}

AlphaBeta compute_beta(const RepPair& rp) {
  AlphaBeta out;
  out.k = rp.k;
  out.alpha = compute_alpha(rp);

  const std::vector<size_t>& gens = rp.G.generators();

  /* Intertwiners at level m: P with rho1(g) P = P rho2(g) mod 2^m for the
     generators (products and inverses then follow). Writing P in the entry
     basis E_i turns the conditions into a left-kernel computation, and the
     solution module contains a matrix invertible mod 2 iff some F2
     combination of the kernel basis rows does. */
  auto try_level = [&](unsigned m) -> std::optional<Mat2> {
    if (gens.empty()) return Mat2::identity(m);  // trivial group
    std::vector<z2k::Vec> rows(4);
    for (size_t gi : gens) {
      const Mat2 A = rp.images[gi].first.reduced(m);
      const Mat2 B = rp.images[gi].second.reduced(m);
      for (int i = 0; i < 4; ++i) {
        Mat2 E = Mat2::zero(m);
        E.e[size_t(i)] = 1;
        const Mat2 D = A.mul(E).sub(E.mul(B));
        for (int t = 0; t < 4; ++t) rows[size_t(i)].push_back(D.e[size_t(t)]);
      }
    }
    const std::vector<z2k::Vec> ker = z2k::left_kernel(m, rows);
    const size_t r = ker.size();
    require(r <= 4, "intertwiner kernel wider than the matrix space");
    for (uint32_t pick = 1; pick < (1u << r); ++pick) {
      Mat2 P = Mat2::zero(m);
      for (size_t t = 0; t < r; ++t)
        if (pick >> t & 1) P = P.add(Mat2{m, {ker[t][0], ker[t][1], ker[t][2], ker[t][3]}});
      if (P.invertible()) return P;
    }
    return std::nullopt;
  };

  out.beta = 0;
  for (unsigned m = rp.k; m >= 1; --m) {
    std::optional<Mat2> P = try_level(m);
    if (!P) {
      if (m == 1) break;
      continue;
    }
    // confirm the witness on every element, not just the generators
    for (const MatPair& p : rp.images)
      require(p.first.reduced(m).mul(*P) == P->mul(p.second.reduced(m)),
              "conjugator fails off the generating set");
    out.conjugator = *P;
    if (m == rp.k)
      out.beta = std::nullopt;  // conjugate at working precision
    else
      out.beta = m;
    break;
  }

  // conjugation mod 2^m forces equal traces mod 2^m, so beta <= alpha
  const unsigned beta_eff = out.beta ? *out.beta : rp.k;
  const unsigned alpha_eff = out.alpha ? *out.alpha : rp.k;
  require(beta_eff <= alpha_eff, "beta exceeds alpha");
  return out;
}

PhiImage phi_map(const RepPair& rp, const AlphaBeta& ab) {
  if (ab.k != rp.k) throw std::invalid_argument("phi: invariants from a different modulus");
  if (!ab.beta.has_value() && ab.conjugator)
    throw NothingToDeviate("representations conjugate at working precision");
  if (!ab.conjugator)
    throw std::invalid_argument("phi: residual representations are not conjugate");
  const unsigned beta = *ab.beta;
  require(beta >= 1 && beta < rp.k, "beta witness out of range");

  // any lift of the witness conjugates mod 2^beta; lift entries as-is
  const unsigned k = rp.k;
  const Mat2 P{k, ab.conjugator->e};
  require(P.invertible(), "conjugator lift lost invertibility");
  const Mat2 Pinv = P.inverse();

  const size_t n = rp.G.order();
  std::vector<groups::SDPair> values(n);
  bool eqdet = true;
  bool tr0 = true;
  for (size_t g = 0; g < n; ++g) {
    const Mat2& R1 = rp.images[g].first;
    const Mat2& R2 = rp.images[g].second;
    eqdet = eqdet && R1.det() == R2.det();
    const Mat2 diff = P.mul(R2).mul(Pinv).sub(R1);
    uint8_t theta = 0;
    for (int t = 0; t < 4; ++t) {
      require(z2k::v2(diff.e[size_t(t)], k) >= beta, "difference not divisible by 2^beta");
      theta |= uint8_t((diff.e[size_t(t)] >> beta & 1) << t);
    }
    const uint8_t rbar = mod2_nibble(R1);
    values[g] = groups::SDPair{groups::f2_mul(theta, groups::f2_inverse(rbar)), rbar};
    tr0 = tr0 && groups::f2_trace(values[g].a) == 0;
  }

  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      require(values[rp.G.mul(i, j)] == values[i].mul(values[j]), "phi is not a homomorphism");

  std::set<groups::SDPair> distinct(values.begin(), values.end());
  std::vector<groups::GroupElement> as_elems;
  as_elems.reserve(distinct.size());
  for (const groups::SDPair& s : distinct) as_elems.push_back(s);

  PhiImage out;
  out.image = groups::close_group(as_elems);
  require(out.image.order() == distinct.size(), "phi values not closed under the product");
  out.proj.resize(n);
  for (size_t g = 0; g < n; ++g) {
    std::optional<size_t> ix = out.image.index_of(values[g]);
    require(ix.has_value(), "phi value missing from its own image");
    out.proj[g] = *ix;
  }
  out.values = std::move(values);
  out.trace_zero = tr0;
  out.equal_determinants = eqdet;
  if (eqdet) {
    require(tr0, "equal determinants must force trace-zero first components");
    require(out.image.order() <= 48, "phi image exceeds order 48");
  }
  return out;
}

DistinguishingClass distinguishing_class(const RepPair& rp) {
  const std::optional<unsigned> a = compute_alpha(rp);
  if (!a) throw TracesEqualError("traces agree at working precision");
  const unsigned alpha = *a;
  const size_t n = rp.G.order();

  std::vector<uint8_t> odd(n);
  for (size_t g = 0; g < n; ++g) odd[g] = uint8_t(trace_diff(rp, g) >> alpha & 1);

  DeviationGroup D = deviation_group(rp);
  const size_t m = D.delta.order();
  std::vector<int8_t> cls(m, -1);
  for (size_t g = 0; g < n; ++g) {
    int8_t& c = cls[D.proj[g]];
    if (c < 0)
      c = int8_t(odd[g]);
    else
      require(c == int8_t(odd[g]), "normalized trace parity not constant on deviation fibers");
  }

  DistinguishingClass out;
  out.alpha = alpha;
  std::vector<char> in(m, 0);
  for (size_t d = 0; d < m; ++d)
    if (cls[d] == 1) {
      in[d] = 1;
      out.delta_class.push_back(d);
    }
  require(!out.delta_class.empty(), "distinguishing class empty despite finite alpha");
  for (size_t d : out.delta_class)
    for (size_t h = 0; h < m; ++h)
      require(in[D.delta.mul(D.delta.mul(h, d), D.delta.inv(h))],
              "distinguishing class not closed under conjugation");
  for (size_t g = 0; g < n; ++g)
    if (in[D.proj[g]]) require(trace_diff(rp, g) != 0, "class member with equal traces");

  out.where = ClassHome::Delta;
  if (residual_full(rp)) {
    const AlphaBeta ab = compute_beta(rp);
    if (ab.conjugator && ab.beta) {
      // absolutely irreducible conjugate residuals force alpha = beta, and
      // the class is cut out of phi(G) by the trace form (A,B) -> tr(AB)
      require(*ab.beta == alpha, "alpha and beta differ on an absolutely irreducible pair");
      const PhiImage phi = phi_map(rp, ab);
      const size_t pn = phi.image.order();
      std::vector<char> pin(pn, 0);
      for (size_t i = 0; i < pn; ++i) {
        const groups::SDPair s = std::get<groups::SDPair>(phi.image.element(i));
        if (groups::f2_trace(groups::f2_mul(s.a, s.b)) == 1) {
          pin[i] = 1;
          out.phi_class.push_back(i);
        }
      }
      for (size_t g = 0; g < n; ++g)
        require(pin[phi.proj[g]] == (odd[g] != 0),
                "phi trace criterion disagrees with the normalized parity");
      out.where = ClassHome::Phi;
    }
  }
  return out;
}

bool det_expansion_check(const z2k::Mat2& A) {
  if (A.k < 2) throw std::invalid_argument("det expansion check needs modulus at least 4");
  const Mat2 B = Mat2::identity(A.k).add(A.scale(2));
  return (B.det() & 3) == ((1 + 2 * A.tr()) & 3);
}

TwistDeviationReport twist_deviation_analysis(const groups::FiniteGroup& rho,
                                              const std::vector<size_t>& H) {
  const size_t n = rho.order();
  if (n == 0 || !rho.concrete())
    throw std::invalid_argument("twist analysis: need a concrete matrix group");
  std::vector<Mat2> mats(n);
  for (size_t i = 0; i < n; ++i) {
    const Mat2* m = std::get_if<Mat2>(&rho.element(i));
    if (!m) throw std::invalid_argument("twist analysis: non-matrix element");
    mats[i] = *m;
  }
  const unsigned k = mats[0].k;
  if (k < 2 || k > 6)
    throw std::invalid_argument("twist analysis: modulus exponent must be in [2,6]");

  std::vector<char> in(n, 0);
  for (size_t x : H) {
    if (x >= n) throw std::invalid_argument("twist analysis: H index out of range");
    if (in[x]) throw std::invalid_argument("twist analysis: duplicate H index");
    in[x] = 1;
  }
  if (H.size() != n && 2 * H.size() != n)
    throw std::invalid_argument("twist analysis: H must be everything or index 2");
  if (!in[rho.identity()]) throw std::invalid_argument("twist analysis: H misses the identity");
  for (size_t x : H)
    for (size_t y : H)
      if (!in[rho.mul(x, y)])
        throw std::invalid_argument("twist analysis: H not closed under the product");

  // theta fixes H and negates the complement; index 2 makes it a character
  std::vector<MatPair> images(n);
  for (size_t i = 0; i < n; ++i) images[i] = {mats[i], in[i] ? mats[i] : mats[i].neg()};
  const RepPair rp = make_rep_pair(k, rho, std::move(images));
  const DeviationGroup D = deviation_group(rp);

  TwistDeviationReport report;
  report.delta_order = D.delta.order();
  const std::optional<size_t> s = groups::smallest_quotient_order_with_element_order_gt(D.delta, 3);
  report.delta_order_bound = s ? *s : report.delta_order;

  std::set<uint8_t> nibs;
  for (const Mat2& m : mats) nibs.insert(mod2_nibble(m));
  if (nibs.size() == 6) {
    report.problematic_quotient_found = std::nullopt;  // absolutely irreducible residual
  } else {
    bool found = false;
    const size_t dn = D.delta.order();
    for (const std::vector<size_t>& N : groups::normal_subgroups(D.delta)) {
      const size_t q = dn / N.size();
      if (q != 96 && q != 128 && q != 192) continue;
      if (groups::is_problematic(groups::quotient(D.delta, N).quot)) {
        found = true;
        break;
      }
    }
    report.problematic_quotient_found = found;
  }
  return report;
}

std::vector<RepPair> generate_corpus(size_t max_pairs) {
  std::vector<RepPair> out;
  std::mt19937 rng(0x15600d5u);

  for (unsigned k : {3u, 4u, 5u}) {
    const uint32_t mod = 1u << k;
    auto M = [k, mod](long a, long b, long c, long d) {
      auto r = [mod](long x) { return uint32_t(((x % long(mod)) + long(mod)) % long(mod)); };
      return Mat2{k, {r(a), r(b), r(c), r(d)}};
    };
    // integral finite groups with full mod-2 image stay small at every level
    const Mat2 A3 = M(0, -1, 1, -1);                     // order 3
    const Mat2 B2 = M(0, 1, 1, 0);                       // order 2, det -1
    const Mat2 R6 = M(1, -1, 1, 0);                      // order 6
    const Mat2 mI = M(-1, 0, 0, -1);
    const Mat2 U01 = M(1, long(mod >> 1), 0, 1);         // I + 2^{k-1} E01
    const Mat2 Usym = M(1, long(mod >> 1), long(mod >> 1), 1);
    const Mat2 Uq = M(1, long(mod >> 2), 0, 1);          // I + 2^{k-2} E01

    const std::vector<std::vector<Mat2>> gen_sets = {
        {A3, B2},         {A3, B2, mI},       {A3, B2, U01},
        {A3, B2, mI, Usym}, {R6, B2, U01},    {A3, B2, Uq},
    };

    for (const std::vector<Mat2>& gens : gen_sets) {
      groups::FiniteGroup base;
      try {
        base = groups::close_group(std::vector<groups::GroupElement>(gens.begin(), gens.end()));
      } catch (const groups::SizeGuardExceeded&) {
        continue;
      }
      const size_t n = base.order();
      if (n > 384) continue;
      std::vector<Mat2> mats(n);
      std::set<uint8_t> nibs;
      for (size_t i = 0; i < n; ++i) {
        mats[i] = std::get<Mat2>(base.element(i));
        nibs.insert(mod2_nibble(mats[i]));
      }
      if (nibs.size() != 6) continue;

      auto push = [&](RepPair rp) {
        if (out.size() < max_pairs) out.push_back(std::move(rp));
      };
      auto graph = [&](auto rho2) {
        std::vector<MatPair> im(n);
        for (size_t i = 0; i < n; ++i) im[i] = {mats[i], rho2(mats[i])};
        return make_rep_pair(k, base, std::move(im));
      };

      // the diagonal pair
      push(graph([](const Mat2& x) { return x; }));

      // exact conjugates: two fixed witnesses plus one drawn at random
      std::vector<Mat2> conj_pool = {M(1, 1, 0, 1), M(1, 0, 1, 1)};
      while (conj_pool.size() < 3) {
        const auto draw = [&] { return uint32_t(rng()) & (mod - 1); };
        Mat2 P{k, {draw(), draw(), draw(), draw()}};
        if (P.invertible()) conj_pool.push_back(P);
      }
      for (const Mat2& P : conj_pool) {
        const Mat2 Pi = P.inverse();
        push(graph([&](const Mat2& x) { return Pi.mul(x).mul(P); }));
      }

      /* Sign twists through the determinant: the three surjective characters
         of (Z/8)^x composed with det mod 8 (k >= 3 here). Skipped when the
         character dies on the determinant image, which would repeat the
         diagonal pair. */
      const std::array<std::array<uint8_t, 8>, 3> chars = {{
          {0, 1, 0, 1, 0, 0, 0, 0},  // kernel {1,3}
          {0, 1, 0, 0, 0, 1, 0, 0},  // kernel {1,5}
          {0, 1, 0, 0, 0, 0, 0, 1},  // kernel {1,7}
      }};
      int first_active = -1;
      for (int c = 0; c < 3; ++c) {
        bool nontrivial = false;
        for (const Mat2& x : mats) nontrivial = nontrivial || chars[size_t(c)][x.det() & 7] == 0;
        if (!nontrivial) continue;
        if (first_active < 0) first_active = c;
        const auto& ch = chars[size_t(c)];
        push(graph([&](const Mat2& x) { return ch[x.det() & 7] ? x : x.neg(); }));
      }
      if (first_active >= 0) {
        // character twist composed with a conjugation
        const auto& ch = chars[size_t(first_active)];
        const Mat2 P = conj_pool[0];
        const Mat2 Pi = P.inverse();
        push(graph([&](const Mat2& x) {
          const Mat2 y = Pi.mul(x).mul(P);
          return ch[x.det() & 7] ? y : y.neg();
        }));
      }

      /* Perturbed generator lifts: pair each generator with itself times a
         unit congruent to I mod 2^m and close the pairs as a group of their
         own. Oversized closures are skipped. */
      const std::vector<Mat2> bump_pool = {M(0, 1, 0, 0), M(0, 0, 1, 0), M(0, 1, 1, 0),
                                           M(1, 0, 0, 0), M(1, 0, 0, 1)};
      int made = 0;
      for (int t = 0; t < 12 && made < 4; ++t) {
        const unsigned m = 1 + rng() % (k - 1);
        std::vector<MatPair> gp;
        gp.reserve(gens.size());
        for (const Mat2& g : gens) {
          const Mat2& S = bump_pool[rng() % bump_pool.size()];
          gp.push_back({g, g.mul(Mat2::identity(k).add(S.scale(1u << m)))});
        }
        try {
          RepPair rp = from_generator_pairs(k, gp);
          if (!residual_full(rp)) continue;
          push(std::move(rp));
          ++made;
        } catch (const groups::SizeGuardExceeded&) {
          continue;
        }
      }
      if (out.size() >= max_pairs) return out;
    }
  }

  require(max_pairs < 100 || out.size() >= 100, "corpus smaller than contracted");
  return out;
}

RepPair parse_rep_pair(std::istream& in) {
  auto fail = [](const std::string& m) { return std::runtime_error("rep pair file: " + m); };
  std::vector<std::vector<std::string>> lines;
  std::string raw;
  while (std::getline(in, raw)) {
    if (const size_t h = raw.find('#'); h != std::string::npos) raw.erase(h);
    std::istringstream ls(raw);
    std::vector<std::string> toks{std::istream_iterator<std::string>(ls),
                                  std::istream_iterator<std::string>()};
    if (!toks.empty()) lines.push_back(std::move(toks));
  }
  if (lines.size() < 2) throw fail("missing headers");
  if (lines[0].size() != 2 || lines[0][0] != "modulus" || lines[0][1].rfind("2^", 0) != 0)
    throw fail("first line must be `modulus 2^<k>`");
  unsigned k = 0;
  size_t n = 0;
  try {
    size_t pos = 0;
    const std::string ks = lines[0][1].substr(2);
    const int kv = std::stoi(ks, &pos);
    if (pos != ks.size() || kv < 2 || kv > 6) throw fail("modulus exponent must be in [2,6]");
    k = unsigned(kv);
    if (lines[1].size() != 2 || lines[1][0] != "group")
      throw fail("second line must be `group <order>`");
    const long nv = std::stol(lines[1][1], &pos);
    if (pos != lines[1][1].size() || nv < 1 || nv > 1024)
      throw fail("group order must be in [1,1024]");
    n = size_t(nv);
  } catch (const std::invalid_argument&) {
    throw fail("malformed header integer");
  } catch (const std::out_of_range&) {
    throw fail("header integer out of range");
  }
  if (lines.size() != 2 + n) throw fail("expected one line of 8 integers per element");

  const long mod = 1l << k;
  std::vector<MatPair> images(n);
  for (size_t i = 0; i < n; ++i) {
    const std::vector<std::string>& tk = lines[2 + i];
    if (tk.size() != 8) throw fail("element lines carry 8 integers");
    std::array<uint32_t, 8> v{};
    for (int t = 0; t < 8; ++t) {
      long x = 0;
      try {
        size_t pos = 0;
        x = std::stol(tk[size_t(t)], &pos);
        if (pos != tk[size_t(t)].size()) throw fail("malformed matrix entry");
      } catch (const std::invalid_argument&) {
        throw fail("malformed matrix entry");
      } catch (const std::out_of_range&) {
        throw fail("matrix entry out of range");
      }
      v[size_t(t)] = uint32_t(((x % mod) + mod) % mod);
    }
    images[i] = {Mat2{k, {v[0], v[1], v[2], v[3]}}, Mat2{k, {v[4], v[5], v[6], v[7]}}};
  }

  // regenerate the group structure by matching products against the list
  std::map<MatPair, size_t> idx;
  for (size_t i = 0; i < n; ++i)
    if (!idx.emplace(images[i], i).second) throw fail("image pairs must be distinct");
  std::vector<std::vector<uint32_t>> table(n, std::vector<uint32_t>(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      auto it = idx.find(pair_mul(images[i], images[j]));
      if (it == idx.end()) throw fail("listed pairs are not closed under the product");
      table[i][j] = uint32_t(it->second);
    }
  groups::FiniteGroup G = groups::FiniteGroup::from_table(std::move(table), true);
  return make_rep_pair(k, std::move(G), std::move(images));
}

void write_rep_pair(std::ostream& out, const RepPair& rp) {
  out << "modulus 2^" << rp.k << "\n";
  out << "group " << rp.G.order() << "\n";
  out << "# one element per line: rho1 row-major, rho2 row-major\n";
  for (const MatPair& p : rp.images) {
    for (int t = 0; t < 4; ++t) out << p.first.e[size_t(t)] << ' ';
    for (int t = 0; t < 4; ++t) out << p.second.e[size_t(t)] << (t == 3 ? '\n' : ' ');
  }
}

}  // namespace isobound::deviation
