#include "isobound/elliptic.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <numeric>
#include <sstream>

namespace isobound::elliptic {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::logic_error(std::string("elliptic internal: ") + msg);
}

// ---- integer factorization at desk scale ----

constexpr unsigned long kSieveLimit = 1'000'000;

const std::vector<uint32_t>& small_primes() {
  static const std::vector<uint32_t> primes = [] {
    std::vector<bool> comp(kSieveLimit + 1, false);
    std::vector<uint32_t> out;
    for (unsigned long i = 2; i <= kSieveLimit; ++i) {
      if (comp[i]) continue;
      out.push_back(static_cast<uint32_t>(i));
      for (unsigned long j = i * i; j <= kSieveLimit; j += i) comp[j] = true;
    }
    return out;
  }();
  return primes;
}

uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>((static_cast<__uint128_t>(a) * b) % m);
}

uint64_t powmod_u64(uint64_t a, uint64_t e, uint64_t m) {
  uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod_u64(r, a, m);
    a = mulmod_u64(a, a, m);
    e >>= 1;
  }
  return r;
}

bool is_prime_u64(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                     29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) d >>= 1, ++s;
  // deterministic witness set for the full 64-bit range
  for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                     29ull, 31ull, 37ull}) {
    uint64_t x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod_u64(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

uint64_t pollard_brent(uint64_t n) {
  // n odd composite with no factor below the sieve limit
  uint64_t seed = 0x9e3779b97f4a7c15ull ^ n;
  auto next_rand = [&seed] {
    seed ^= seed << 13;
    seed ^= seed >> 7;
    seed ^= seed << 17;
    return seed;
  };
  while (true) {
    uint64_t y = next_rand() % (n - 2) + 1;
    uint64_t c = next_rand() % (n - 1) + 1;
    uint64_t m = 128, g = 1, r = 1, q = 1, x = 0, ys = 0;
    auto f = [&](uint64_t v) { return (mulmod_u64(v, v, n) + c) % n; };
    while (g == 1) {
      x = y;
      for (uint64_t i = 0; i < r; ++i) y = f(y);
      for (uint64_t k = 0; k < r && g == 1; k += m) {
        ys = y;
        uint64_t lim = std::min(m, r - k);
        for (uint64_t i = 0; i < lim; ++i) {
          y = f(y);
          q = mulmod_u64(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
      }
      r <<= 1;
    }
    if (g == n) {
      g = 1;
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_u64_into(uint64_t n, std::map<mpz_class, unsigned>& out) {
  if (n == 1) return;
  if (is_prime_u64(n)) {
    out[mpz_class(static_cast<unsigned long>(n))] += 1;
    return;
  }
  uint64_t d = pollard_brent(n);
  factor_u64_into(d, out);
  factor_u64_into(n / d, out);
}

// prime -> exponent for |n|, n != 0
std::map<mpz_class, unsigned> factor_abs(const mpz_class& n_in) {
  mpz_class n = abs(n_in);
  require(n != 0, "factor of zero");
  std::map<mpz_class, unsigned> out;
  for (uint32_t p : small_primes()) {
    if (mpz_cmp_ui(n.get_mpz_t(), 1) == 0) break;
    if (cmp(n, static_cast<unsigned long>(p) * p) < 0) break;
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      mpz_class q;
      unsigned e = static_cast<unsigned>(
          mpz_remove(q.get_mpz_t(), n.get_mpz_t(), mpz_class(p).get_mpz_t()));
      out[mpz_class(p)] += e;
      n = q;
    }
  }
  if (n == 1) return out;
  if (cmp(n, static_cast<unsigned long>(kSieveLimit) * kSieveLimit) < 0) {
    out[n] += 1;  // below sieve-limit squared and unhit: prime
    return out;
  }
  if (mpz_probab_prime_p(n.get_mpz_t(), 40)) {
    out[n] += 1;
    return out;
  }
  if (mpz_sizeinbase(n.get_mpz_t(), 2) <= 64) {
    uint64_t v = 0;
    mpz_export(&v, nullptr, -1, sizeof(v), 0, 0, n.get_mpz_t());
    factor_u64_into(v, out);
    return out;
  }
  throw NeedFactorization("composite cofactor " + n.get_str() +
                          " exceeds 64 bits; supply a conductor or factor by hand");
}

// ---- exact power tests ----

bool mpz_is_perfect_square(const mpz_class& n, mpz_class* root = nullptr) {
  if (sgn(n) < 0) return false;
  if (!mpz_perfect_square_p(n.get_mpz_t())) return false;
  if (root) mpz_sqrt(root->get_mpz_t(), n.get_mpz_t());
  return true;
}

// exact k-th root; even k demands n >= 0
bool mpz_is_perfect_power(const mpz_class& n, unsigned long k, mpz_class* root = nullptr) {
  if (k % 2 == 0 && sgn(n) < 0) return false;
  mpz_class r;
  int exact = mpz_root(r.get_mpz_t(), n.get_mpz_t(), k);
  if (!exact) return false;
  if (root) *root = r;
  return true;
}

bool mpq_is_perfect_power(const mpq_class& q, unsigned long k, mpq_class* root = nullptr) {
  mpz_class rn, rd;
  if (!mpz_is_perfect_power(q.get_num(), k, &rn)) return false;
  if (!mpz_is_perfect_power(q.get_den(), k, &rd)) return false;
  if (root) {
    *root = mpq_class(rn) / mpq_class(rd);
    root->canonicalize();
  }
  return true;
}

mpq_class make_q(const mpz_class& num, const mpz_class& den) {
  require(den != 0, "zero denominator");
  mpq_class q(num, den);
  q.canonicalize();
  return q;
}

mpz_class pow_ui(const mpz_class& b, unsigned long e) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

}  // namespace

mpz_class radical_of(const mpz_class& n) {
  if (n == 0) throw std::domain_error("radical of zero");
  mpz_class r = 1;
  for (const auto& [p, e] : factor_abs(n)) r *= p;
  return r;
}

mpz_class squarefree_part(const mpz_class& n) {
  if (n == 0) throw std::domain_error("squarefree part of zero");
  mpz_class r = sgn(n) < 0 ? -1 : 1;
  for (const auto& [p, e] : factor_abs(n)) {
    if (e % 2) r *= p;
  }
  return r;
}

WeierstrassCurve curve(long a1, long a2, long a3, long a4, long a6, std::string label) {
  WeierstrassCurve E;
  E.a1 = a1;
  E.a2 = a2;
  E.a3 = a3;
  E.a4 = a4;
  E.a6 = a6;
  E.label = std::move(label);
  return E;
}

CurveInvariants invariants(const WeierstrassCurve& E) {
  CurveInvariants v;
  v.b2 = E.a1 * E.a1 + 4 * E.a2;
  v.b4 = 2 * E.a4 + E.a1 * E.a3;
  v.b6 = E.a3 * E.a3 + 4 * E.a6;
  v.b8 = E.a1 * E.a1 * E.a6 + 4 * E.a2 * E.a6 - E.a1 * E.a3 * E.a4 +
         E.a2 * E.a3 * E.a3 - E.a4 * E.a4;
  require(4 * v.b8 == v.b2 * v.b6 - v.b4 * v.b4, "b8 identity");
  v.c4 = v.b2 * v.b2 - 24 * v.b4;
  v.c6 = -v.b2 * v.b2 * v.b2 + 36 * v.b2 * v.b4 - 216 * v.b6;
  v.disc = -v.b2 * v.b2 * v.b8 - 8 * v.b4 * v.b4 * v.b4 - 27 * v.b6 * v.b6 +
           9 * v.b2 * v.b4 * v.b6;
  require(1728 * v.disc == v.c4 * v.c4 * v.c4 - v.c6 * v.c6, "c4/c6/disc identity");
  if (v.disc == 0)
    throw SingularCurve("singular model" +
                        (E.label.empty() ? std::string() : " " + E.label));
  v.j = make_q(v.c4 * v.c4 * v.c4, v.disc);
  return v;
}

namespace {

// (x, y) -> (u^2 x + r, u^3 y + s u^2 x + t); nullopt when the image model
// is not integral
std::optional<WeierstrassCurve> apply_transform(const WeierstrassCurve& E,
                                                const mpz_class& u, const mpz_class& r,
                                                const mpz_class& s, const mpz_class& t) {
  mpz_class u2 = u * u, u3 = u2 * u, u4 = u2 * u2, u6 = u3 * u3;
  mpz_class A1 = E.a1 + 2 * s;
  mpz_class A2 = E.a2 - s * E.a1 + 3 * r - s * s;
  mpz_class A3 = E.a3 + r * E.a1 + 2 * t;
  mpz_class A4 = E.a4 - s * E.a3 + 2 * r * E.a2 - (t + r * s) * E.a1 + 3 * r * r -
                 2 * s * t;
  mpz_class A6 = E.a6 + r * E.a4 + r * r * E.a2 + r * r * r - t * E.a3 - t * t -
                 r * t * E.a1;
  auto divq = [](const mpz_class& a, const mpz_class& b, mpz_class& q) {
    if (!mpz_divisible_p(a.get_mpz_t(), b.get_mpz_t())) return false;
    mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return true;
  };
  WeierstrassCurve out;
  if (!divq(A1, u, out.a1)) return std::nullopt;
  if (!divq(A2, u2, out.a2)) return std::nullopt;
  if (!divq(A3, u3, out.a3)) return std::nullopt;
  if (!divq(A4, u4, out.a4)) return std::nullopt;
  if (!divq(A6, u6, out.a6)) return std::nullopt;
  out.label = E.label;
  out.conductor = E.conductor;
  return out;
}

// one u = p descent step at p in {2, 3}; search ranges cover r mod p^2,
// s mod p, t mod p^3
std::optional<WeierstrassCurve> descend_once_23(const WeierstrassCurve& E, unsigned long p) {
  mpz_class u(p);
  long cube = static_cast<long>(p * p * p);
  for (long r = 0; r < cube; ++r)
    for (long s = 0; s < cube; ++s)
      for (long t = 0; t < cube; ++t) {
        auto next = apply_transform(E, u, r, s, t);
        if (next) return next;
      }
  return std::nullopt;
}

}  // namespace

WeierstrassCurve minimal_at(const WeierstrassCurve& E, unsigned long p) {
  CurveInvariants v = invariants(E);
  mpz_class P(p);
  if (p >= 5) {
    if (!mpz_divisible_p(v.disc.get_mpz_t(), P.get_mpz_t())) return E;
    mpz_class c4 = v.c4, c6 = v.c6, disc = v.disc;
    mpz_class p4 = pow_ui(P, 4), p6 = pow_ui(P, 6), p12 = pow_ui(P, 12);
    bool changed = false;
    while (mpz_divisible_p(disc.get_mpz_t(), p12.get_mpz_t()) &&
           (c4 == 0 || mpz_divisible_p(c4.get_mpz_t(), p4.get_mpz_t()))) {
      require(mpz_divisible_p(c6.get_mpz_t(), p6.get_mpz_t()), "c6 valuation");
      if (c4 != 0) mpz_divexact(c4.get_mpz_t(), c4.get_mpz_t(), p4.get_mpz_t());
      mpz_divexact(c6.get_mpz_t(), c6.get_mpz_t(), p6.get_mpz_t());
      mpz_divexact(disc.get_mpz_t(), disc.get_mpz_t(), p12.get_mpz_t());
      changed = true;
    }
    if (!changed) return E;
    WeierstrassCurve out;
    out.a4 = -27 * c4;
    out.a6 = -54 * c6;
    out.label = E.label;
    return out;
  }
  WeierstrassCurve cur = E;
  mpz_class disc = v.disc;
  mpz_class p12 = pow_ui(P, 12);
  while (mpz_divisible_p(disc.get_mpz_t(), p12.get_mpz_t())) {
    auto next = descend_once_23(cur, p);
    if (!next) break;
    cur = *next;
    mpz_divexact(disc.get_mpz_t(), disc.get_mpz_t(), p12.get_mpz_t());
    require(invariants(cur).disc == disc, "descent discriminant");
  }
  return cur;
}

namespace {

// reduced (c4, c6, disc) after all u = p descents, p >= 5
void reduce_c4c6_at(const CurveInvariants& v, const mpz_class& P, mpz_class& c4,
                    mpz_class& c6, mpz_class& disc) {
  c4 = v.c4;
  c6 = v.c6;
  disc = v.disc;
  mpz_class p4 = pow_ui(P, 4), p6 = pow_ui(P, 6), p12 = pow_ui(P, 12);
  while (mpz_divisible_p(disc.get_mpz_t(), p12.get_mpz_t()) &&
         (c4 == 0 || mpz_divisible_p(c4.get_mpz_t(), p4.get_mpz_t()))) {
    require(mpz_divisible_p(c6.get_mpz_t(), p6.get_mpz_t()), "c6 valuation");
    if (c4 != 0) mpz_divexact(c4.get_mpz_t(), c4.get_mpz_t(), p4.get_mpz_t());
    mpz_divexact(c6.get_mpz_t(), c6.get_mpz_t(), p6.get_mpz_t());
    mpz_divexact(disc.get_mpz_t(), disc.get_mpz_t(), p12.get_mpz_t());
  }
}

long count_points_small(const WeierstrassCurve& E, unsigned long p) {
  long a1 = mpz_fdiv_ui(E.a1.get_mpz_t(), p);
  long a2 = mpz_fdiv_ui(E.a2.get_mpz_t(), p);
  long a3 = mpz_fdiv_ui(E.a3.get_mpz_t(), p);
  long a4 = mpz_fdiv_ui(E.a4.get_mpz_t(), p);
  long a6 = mpz_fdiv_ui(E.a6.get_mpz_t(), p);
  long q = static_cast<long>(p);
  long count = 1;  // point at infinity
  for (long x = 0; x < q; ++x)
    for (long y = 0; y < q; ++y) {
      long lhs = (y * y + a1 * x * y + a3 * y) % q;
      long rhs = (((x * x % q) * x + a2 * x * x + a4 * x + a6) % q + q) % q;
      if (lhs == rhs) ++count;
    }
  return count;
}

// -sum_x chi(x^3 + Ax + B) over F_p, p >= 5, via a squares bitset and
// third-order finite differences
long ap_char_sum(uint64_t A, uint64_t B, unsigned long p) {
  require(p < (1ul << 31), "prime too large for the counting cap");
  std::vector<uint64_t> sq((p + 63) / 64, 0);
  for (uint64_t k = 0; k <= p / 2; ++k) {
    uint64_t r = (k * k) % p;
    sq[r >> 6] |= 1ull << (r & 63);
  }
  const uint64_t six = 6 % p;
  uint64_t t0 = B % p, t1 = (1 + A) % p, t2 = six;
  long sum = 0;
  for (unsigned long x = 0; x < p; ++x) {
    if (t0 != 0) sum += (sq[t0 >> 6] >> (t0 & 63)) & 1 ? 1 : -1;
    t0 += t1;
    if (t0 >= p) t0 -= p;
    t1 += t2;
    if (t1 >= p) t1 -= p;
    t2 += six;
    if (t2 >= p) t2 -= p;
  }
  return -sum;
}

}  // namespace

long ap(const WeierstrassCurve& E, unsigned long p, long cap) {
  if (p < 2) throw std::invalid_argument("ap: p must be prime");
  if (cap < 0 || p > static_cast<unsigned long>(cap))
    throw CapExceeded("ap: prime " + std::to_string(p) + " exceeds cap " +
                      std::to_string(cap));
  long a;
  if (p <= 3) {
    WeierstrassCurve Em = minimal_at(E, p);
    CurveInvariants v = invariants(Em);
    if (mpz_divisible_ui_p(v.disc.get_mpz_t(), p)) throw BadReduction(p);
    a = static_cast<long>(p) + 1 - count_points_small(Em, p);
  } else {
    CurveInvariants v = invariants(E);
    mpz_class c4, c6, disc;
    reduce_c4c6_at(v, mpz_class(p), c4, c6, disc);
    if (mpz_divisible_ui_p(disc.get_mpz_t(), p)) throw BadReduction(p);
    mpz_class A = -27 * c4, B = -54 * c6;
    a = ap_char_sum(mpz_fdiv_ui(A.get_mpz_t(), p), mpz_fdiv_ui(B.get_mpz_t(), p), p);
  }
  require(static_cast<__int128>(a) * a <= static_cast<__int128>(4) * p, "Hasse bound");
  return a;
}

bool good_reduction_at(const WeierstrassCurve& E, unsigned long p) {
  CurveInvariants v = invariants(E);
  if (!mpz_divisible_ui_p(v.disc.get_mpz_t(), p)) return true;
  if (p >= 5) {
    mpz_class c4, c6, disc;
    reduce_c4c6_at(v, mpz_class(p), c4, c6, disc);
    return !mpz_divisible_ui_p(disc.get_mpz_t(), p);
  }
  WeierstrassCurve Em = minimal_at(E, p);
  return !mpz_divisible_ui_p(invariants(Em).disc.get_mpz_t(), p);
}

mpz_class bad_primes_radical(const WeierstrassCurve& E) {
  CurveInvariants v = invariants(E);
  auto compute_from_disc = [&]() {
    mpz_class rad = 1;
    for (const auto& [p, e] : factor_abs(v.disc)) {
      if (!mpz_fits_ulong_p(p.get_mpz_t()))
        throw NeedFactorization("bad prime candidate " + p.get_str() +
                                " too large to minimalize");
      if (!good_reduction_at(E, p.get_ui())) rad *= p;
    }
    return rad;
  };
  if (!E.conductor) return compute_from_disc();
  const mpz_class& N = *E.conductor;
  if (N == 0) throw std::invalid_argument("conductor must be nonzero");
  mpz_class radN = radical_of(N);
  try {
    mpz_class own = compute_from_disc();
    if (own != radN)
      throw std::runtime_error("supplied conductor " + N.get_str() +
                               " disagrees with computed bad primes " + own.get_str());
    return radN;
  } catch (const NeedFactorization&) {
    // discriminant past desk scale: verify the conductor primes individually
    for (const auto& [p, e] : factor_abs(radN)) {
      bool bad = mpz_fits_ulong_p(p.get_mpz_t()) && !good_reduction_at(E, p.get_ui());
      if (!bad)
        throw std::runtime_error("conductor prime " + p.get_str() +
                                 " is not a prime of bad reduction");
    }
    return radN;
  }
}

namespace {

// monic integer cubic X^3 + a2 X^2 + a1 X + a0
struct MonicCubic {
  mpz_class a2, a1, a0;
  mpz_class eval(const mpz_class& x) const { return ((x + a2) * x + a1) * x + a0; }
  mpz_class disc() const {
    return 18 * a2 * a1 * a0 - 4 * a2 * a2 * a2 * a0 + a2 * a2 * a1 * a1 -
           4 * a1 * a1 * a1 - 27 * a0 * a0;
  }
};

MonicCubic division_cubic(const CurveInvariants& v) {
  // monic form of 4x^3 + b2 x^2 + 2 b4 x + b6 under X = 4x
  MonicCubic h{v.b2, 8 * v.b4, 16 * v.b6};
  require(h.disc() == 256 * v.disc, "division cubic discriminant");
  return h;
}

void bisect_for_root(const MonicCubic& h, mpz_class lo, mpz_class hi,
                     std::vector<mpz_class>& roots) {
  mpz_class flo = h.eval(lo), fhi = h.eval(hi);
  if (flo == 0) roots.push_back(lo);
  if (fhi == 0) roots.push_back(hi);
  if (sgn(flo) * sgn(fhi) >= 0) return;
  while (hi - lo > 1) {
    mpz_class mid = (lo + hi) / 2;
    mpz_class fm = h.eval(mid);
    if (fm == 0) {
      roots.push_back(mid);
      return;
    }
    if (sgn(fm) == sgn(flo)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
}

// all integer roots; rational roots of monic integer polynomials are integers
std::vector<mpz_class> integer_roots(const MonicCubic& h) {
  std::vector<mpz_class> roots;
  if (h.a0 == 0) {
    roots.push_back(0);
    // remaining quadratic X^2 + a2 X + a1
    mpz_class D = h.a2 * h.a2 - 4 * h.a1, s;
    if (mpz_is_perfect_square(D, &s)) {
      for (const mpz_class& num : {mpz_class(-h.a2 + s), mpz_class(-h.a2 - s)}) {
        if (mpz_divisible_ui_p(num.get_mpz_t(), 2)) roots.push_back(num / 2);
      }
    }
  } else {
    mpz_class B = abs(h.a2), t;
    t = abs(h.a1);
    if (t > B) B = t;
    t = abs(h.a0);
    if (t > B) B = t;
    B += 1;  // Cauchy bound for a monic cubic
    std::vector<mpz_class> cuts{mpz_class(-B), B};
    mpz_class D2 = h.a2 * h.a2 - 3 * h.a1;  // h' = 3X^2 + 2a2 X + a1 up to scale
    if (D2 > 0) {
      mpz_class s;
      mpz_sqrt(s.get_mpz_t(), D2.get_mpz_t());
      // critical points within 1 of (-a2 +- s)/3; pad by 2 so the outer
      // segments are strictly monotone
      mpz_class cl = (-h.a2 - s) / 3, cu = (-h.a2 + s) / 3;
      for (const mpz_class& c : {mpz_class(cl - 2), mpz_class(cl + 2),
                                 mpz_class(cu - 2), mpz_class(cu + 2)}) {
        if (c > -B && c < B) cuts.push_back(c);
      }
    }
    std::sort(cuts.begin(), cuts.end());
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
      const mpz_class &lo = cuts[i], &hi = cuts[i + 1];
      if (hi - lo <= 8) {
        for (mpz_class x = lo; x <= hi; ++x)
          if (h.eval(x) == 0) roots.push_back(x);
      } else {
        bisect_for_root(h, lo, hi, roots);
      }
    }
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  require(roots.size() <= 3, "too many cubic roots");
  return roots;
}

size_t count_cubic_roots_mod_p(const MonicCubic& h, unsigned long p) {
  require(p < (1ul << 31), "root-count prime too large");
  uint64_t a2 = mpz_fdiv_ui(h.a2.get_mpz_t(), p);
  uint64_t a1 = mpz_fdiv_ui(h.a1.get_mpz_t(), p);
  uint64_t a0 = mpz_fdiv_ui(h.a0.get_mpz_t(), p);
  size_t n = 0;
  for (uint64_t x = 0; x < p; ++x) {
    uint64_t v = (((x + a2) % p * x + a1) % p * x + a0) % p;
    if (v == 0) ++n;
  }
  return n;
}

}  // namespace

Mod2Class mod2_image_class(const WeierstrassCurve& E) {
  CurveInvariants v = invariants(E);
  MonicCubic h = division_cubic(v);
  size_t nroots = integer_roots(h).size();
  require(nroots != 2, "cubic with exactly two rational roots");
  Mod2Class out;
  out.cubic_disc_is_square = mpz_is_perfect_square(h.disc());
  if (nroots == 3) {
    out.image = Mod2Image::Trivial;
  } else if (nroots == 1) {
    out.image = Mod2Image::OrderTwo;
  } else {
    out.image = out.cubic_disc_is_square ? Mod2Image::OrderThree : Mod2Image::Full;
  }
  // the two-dimensional mod-2 representation stays irreducible over the
  // algebraic closure only for the full image; a C3 image splits over F_4
  out.absolutely_irreducible = out.image == Mod2Image::Full;
  return out;
}

bool curves_isomorphic_q(const WeierstrassCurve& E, const WeierstrassCurve& Ep) {
  CurveInvariants v1 = invariants(E), v2 = invariants(Ep);
  if (v1.j != v2.j) return false;
  if (v1.c4 == 0) {
    require(v2.c4 == 0, "j = 0 mismatch");
    return mpq_is_perfect_power(make_q(v1.c6, v2.c6), 6);
  }
  if (v1.c6 == 0) {
    require(v2.c6 == 0, "j = 1728 mismatch");
    return mpq_is_perfect_power(make_q(v1.c4, v2.c4), 4);
  }
  mpq_class u2 = make_q(v1.c6 * v2.c4, v2.c6 * v1.c4), u;  // u^2 candidate
  if (!mpq_is_perfect_power(u2, 2, &u)) return false;
  return u2 * u2 == make_q(v1.c4, v2.c4) && u2 * u2 * u2 == make_q(v1.c6, v2.c6);
}

WeierstrassCurve quadratic_twist(const WeierstrassCurve& E, const mpz_class& d) {
  if (d == 0) throw std::invalid_argument("twist parameter must be nonzero");
  if (squarefree_part(d) != d)
    throw std::invalid_argument("twist parameter must be squarefree");
  CurveInvariants v = invariants(E);
  mpz_class A = -27 * d * d * v.c4;
  mpz_class B = -54 * d * d * d * v.c6;
  // (A, B) carries a 6^4, 6^6 scale from the short-model construction; strip
  // every u in {2, 3} that keeps the model integral
  for (unsigned long u : {2ul, 3ul}) {
    mpz_class u4 = pow_ui(mpz_class(u), 4), u6 = pow_ui(mpz_class(u), 6);
    while ((A == 0 || mpz_divisible_p(A.get_mpz_t(), u4.get_mpz_t())) &&
           (B == 0 || mpz_divisible_p(B.get_mpz_t(), u6.get_mpz_t()))) {
      if (A != 0) mpz_divexact(A.get_mpz_t(), A.get_mpz_t(), u4.get_mpz_t());
      if (B != 0) mpz_divexact(B.get_mpz_t(), B.get_mpz_t(), u6.get_mpz_t());
      if (A == 0 && B == 0) break;
    }
  }
  WeierstrassCurve out;
  out.a4 = A;
  out.a6 = B;
  if (!E.label.empty()) out.label = E.label + "*" + d.get_str();
  return out;
}

TwistCheck is_quadratic_twist(const WeierstrassCurve& E, const WeierstrassCurve& Ep) {
  CurveInvariants v1 = invariants(E), v2 = invariants(Ep);
  TwistCheck out;
  if (v1.j != v2.j) {
    out.decision = TwistDecision::NotTwist;
    return out;
  }
  mpz_class cand;
  if (v1.c4 == 0) {
    // j = 0: quadratic twists scale c6 by d^3 u^6, so the ratio is a cube
    mpq_class root;
    if (!mpq_is_perfect_power(make_q(v2.c6, v1.c6), 3, &root)) {
      out.decision = TwistDecision::NotTwist;
      return out;
    }
    cand = squarefree_part(root.get_num() * root.get_den());
  } else if (v1.c6 == 0) {
    // j = 1728: c4 scales by (d u^2)^2; twists by d and -d coincide here
    mpq_class root;
    if (!mpq_is_perfect_power(make_q(v2.c4, v1.c4), 2, &root)) {
      out.decision = TwistDecision::NotTwist;
      return out;
    }
    cand = squarefree_part(root.get_num() * root.get_den());
  } else {
    // the class of d is forced by (c6'/c6) / (c4'/c4) = d u^2
    mpq_class ratio = make_q(v2.c6 * v1.c4, v1.c6 * v2.c4);
    cand = squarefree_part(ratio.get_num() * ratio.get_den());
  }
  if (curves_isomorphic_q(quadratic_twist(E, cand), Ep)) {
    out.decision = TwistDecision::Twist;
    out.d = cand;
  } else {
    out.decision = TwistDecision::NotTwist;
  }
  return out;
}

namespace {

// rational affine root correspondence h2(dX + e) = d^3 h1(X); Galois
// equivariant, hence a proof of equal splitting behavior
bool affine_root_certificate(const MonicCubic& h1, const MonicCubic& h2) {
  mpq_class P1 = make_q(h1.a2 * h1.a2 - 3 * h1.a1, 1);
  mpq_class P2 = make_q(h2.a2 * h2.a2 - 3 * h2.a1, 1);
  if (P1 == 0 || P2 == 0) {
    if (P1 != 0 || P2 != 0) return false;
    // both depress to X^3 + Q; the cube fields Q(cbrt(-Q1)), Q(cbrt(-Q2))
    // coincide iff -Q2 is a rational cube times (-Q1)^1 or (-Q1)^2
    mpq_class Q1 = make_q(2 * h1.a2 * h1.a2 * h1.a2 - 9 * h1.a2 * h1.a1 + 27 * h1.a0, 27);
    mpq_class Q2 = make_q(2 * h2.a2 * h2.a2 * h2.a2 - 9 * h2.a2 * h2.a1 + 27 * h2.a0, 27);
    require(Q1 != 0 && Q2 != 0, "pure cubic with zero constant");
    return mpq_is_perfect_power(Q2 / Q1, 3) || mpq_is_perfect_power(-Q2 / (Q1 * Q1), 3);
  }
  mpq_class d2 = P2 / P1, droot;
  if (!mpq_is_perfect_power(d2, 2, &droot)) return false;
  for (const mpq_class& d : {droot, mpq_class(-droot)}) {
    mpq_class e = (d * h1.a2 - h2.a2) / 3;
    bool ok = 3 * e + h2.a2 == d * h1.a2;
    ok = ok && 3 * e * e + 2 * h2.a2 * e + h2.a1 == d * d * h1.a1;
    ok = ok && e * e * e + h2.a2 * e * e + h2.a1 * e + h2.a0 == d * d * d * h1.a0;
    if (ok) return true;
  }
  return false;
}

}  // namespace

Mod2IsoGrade mod2_isomorphic(const WeierstrassCurve& E, const WeierstrassCurve& Ep,
                             unsigned long prime_cap) {
  Mod2Class m1 = mod2_image_class(E), m2 = mod2_image_class(Ep);
  if (m1.image != m2.image) return Mod2IsoGrade::NotIsomorphic;
  if (m1.image == Mod2Image::Trivial) return Mod2IsoGrade::Isomorphic;
  CurveInvariants v1 = invariants(E), v2 = invariants(Ep);
  MonicCubic h1 = division_cubic(v1), h2 = division_cubic(v2);
  // isomorphic representations cut the same quadratic resolvent field
  if (!mpz_is_perfect_square(h1.disc() * h2.disc())) return Mod2IsoGrade::NotIsomorphic;
  if (m1.image == Mod2Image::OrderTwo) return Mod2IsoGrade::Isomorphic;
  if (affine_root_certificate(h1, h2)) return Mod2IsoGrade::Isomorphic;
  // Frobenius cycle types: the cubics' root counts must agree at every odd
  // prime not dividing either model discriminant (good reduction, separable
  // reduction of the cubic)
  mpz_class pz(2);
  while (true) {
    mpz_nextprime(pz.get_mpz_t(), pz.get_mpz_t());
    if (mpz_cmp_ui(pz.get_mpz_t(), prime_cap) > 0) break;
    unsigned long p = pz.get_ui();
    if (mpz_divisible_ui_p(v1.disc.get_mpz_t(), p) ||
        mpz_divisible_ui_p(v2.disc.get_mpz_t(), p))
      continue;
    if (count_cubic_roots_mod_p(h1, p) != count_cubic_roots_mod_p(h2, p))
      return Mod2IsoGrade::NotIsomorphic;
  }
  return Mod2IsoGrade::HeuristicIsomorphic;
}

std::optional<TraceRecord> distinguishing_prime(const WeierstrassCurve& E,
                                                const WeierstrassCurve& Ep, long cap) {
  if (cap < 2) return std::nullopt;
  mpz_class d1 = invariants(E).disc, d2 = invariants(Ep).disc;
  mpz_class pz(1);
  while (true) {
    mpz_nextprime(pz.get_mpz_t(), pz.get_mpz_t());
    if (cmp(pz, cap) > 0) break;
    unsigned long p = pz.get_ui();
    if (mpz_divisible_ui_p(d1.get_mpz_t(), p) && !good_reduction_at(E, p)) continue;
    if (mpz_divisible_ui_p(d2.get_mpz_t(), p) && !good_reduction_at(Ep, p)) continue;
    long a1 = ap(E, p, cap), a2 = ap(Ep, p, cap);
    if (a1 != a2) return TraceRecord{p, a1, a2};
  }
  return std::nullopt;
}

CmFiniteJFlags cm_and_finite_j_check(const WeierstrassCurve& E) {
  static const std::vector<mpq_class> cm_j = [] {
    std::vector<mpq_class> v;
    for (const char* s : {"0", "1728", "-3375", "8000", "54000", "287496", "-32768",
                          "16581375", "-884736", "-12288000", "-884736000",
                          "-147197952000", "-262537412640768000"})
      v.emplace_back(mpz_class(s));
    return v;
  }();
  static const std::vector<mpq_class> finite_j = [] {
    auto q = [](const char* num, unsigned long npow, const char* mul, const char* den,
                unsigned long dpow) {
      mpz_class n = pow_ui(mpz_class(num), npow) * mpz_class(mul);
      return make_q(n, pow_ui(mpz_class(den), dpow));
    };
    std::vector<mpq_class> v;
    v.push_back(q("2", 11, "1", "1", 1));
    v.push_back(q("17", 3, "16", "1", 1));
    v.push_back(q("4097", 3, "1", "2", 4));
    v.push_back(q("257", 3, "1", "2", 8));
    v.push_back(q("-857985", 3, "1", "62", 8));
    v.push_back(q("919425", 3, "1", "496", 4));
    v.push_back(q("18249920", 3, "-3", "17", 16));
    v.push_back(q("1723187806080", 3, "7", "79", 16));
    return v;
  }();
  mpq_class j = invariants(E).j;
  CmFiniteJFlags out;
  out.is_cm_j = std::find(cm_j.begin(), cm_j.end(), j) != cm_j.end();
  out.in_rzb_finite_list = std::find(finite_j.begin(), finite_j.end(), j) != finite_j.end();
  return out;
}

std::vector<WeierstrassCurve> parse_curve_file(std::istream& in) {
  std::vector<WeierstrassCurve> out;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::vector<std::string> tok;
    for (std::string t; ss >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (tok.size() != 6 && tok.size() != 7)
      throw std::invalid_argument("curve file line " + std::to_string(lineno) +
                                  ": want `label a1 a2 a3 a4 a6 [conductor]`");
    WeierstrassCurve E;
    E.label = tok[0];
    try {
      E.a1 = mpz_class(tok[1]);
      E.a2 = mpz_class(tok[2]);
      E.a3 = mpz_class(tok[3]);
      E.a4 = mpz_class(tok[4]);
      E.a6 = mpz_class(tok[5]);
      if (tok.size() == 7) E.conductor = mpz_class(tok[6]);
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument("curve file line " + std::to_string(lineno) +
                                  ": non-integer coefficient");
    }
    out.push_back(std::move(E));
  }
  return out;
}

}  // namespace isobound::elliptic
