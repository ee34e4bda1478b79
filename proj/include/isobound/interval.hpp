/* Outward-rounded interval arithmetic over MPFR. Every operation rounds the
   lower endpoint toward -inf and the upper endpoint toward +inf, so a computed
   interval always encloses the exact real value. Inequalities are certified
   only at the pessimistic endpoints: certainly_le(a, b) means sup(a) <= inf(b),
   which implies the true values compare the same way. */
#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <string>

namespace isobound {

class Interval {
 public:
  // 192 bits leaves ~50 decimal digits of headroom; the inequalities certified
  // here all have slack far above one ulp at this precision.
  static constexpr mpfr_prec_t kPrec = 192;

  Interval();
  explicit Interval(long v);
  explicit Interval(const mpz_class& v);
  explicit Interval(const mpq_class& v);
  Interval(const Interval& o);
  Interval& operator=(const Interval& o);
  ~Interval();

  Interval operator+(const Interval& o) const;
  Interval operator-(const Interval& o) const;
  Interval operator*(const Interval& o) const;
  Interval sqr() const;
  // Natural log; requires inf > 0.
  Interval log() const;

  bool certainly_le(const Interval& o) const;
  bool certainly_lt(const Interval& o) const;
  bool certainly_ge(const Interval& o) const { return o.certainly_le(*this); }
  bool contains(const mpq_class& q) const;
  bool is_nonnegative() const;  // inf >= 0
  bool is_positive() const;     // inf > 0

  mpz_class ceil_upper() const;
  mpz_class floor_lower() const;
  // Width and endpoint views, for diagnostics only (rounded, not exact).
  double inf_d() const;
  double sup_d() const;
  std::string str(int digits = 10) const;

 private:
  mpfr_t lo_, hi_;
};

}  // namespace isobound
