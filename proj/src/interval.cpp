#include "isobound/interval.hpp"

#include <stdexcept>

namespace isobound {

Interval::Interval() {
  mpfr_init2(lo_, kPrec);
  mpfr_init2(hi_, kPrec);
  mpfr_set_zero(lo_, 1);
  mpfr_set_zero(hi_, 1);
}

Interval::Interval(long v) : Interval() {
  mpfr_set_si(lo_, v, MPFR_RNDD);
  mpfr_set_si(hi_, v, MPFR_RNDU);
}

Interval::Interval(const mpz_class& v) : Interval() {
  mpfr_set_z(lo_, v.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(hi_, v.get_mpz_t(), MPFR_RNDU);
}

Interval::Interval(const mpq_class& v) : Interval() {
  mpfr_set_q(lo_, v.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(hi_, v.get_mpq_t(), MPFR_RNDU);
}

Interval::Interval(const Interval& o) : Interval() {
  mpfr_set(lo_, o.lo_, MPFR_RNDD);
  mpfr_set(hi_, o.hi_, MPFR_RNDU);
}

Interval& Interval::operator=(const Interval& o) {
  if (this != &o) {
    mpfr_set(lo_, o.lo_, MPFR_RNDD);
    mpfr_set(hi_, o.hi_, MPFR_RNDU);
  }
  return *this;
}

Interval::~Interval() {
  mpfr_clear(lo_);
  mpfr_clear(hi_);
}

Interval Interval::operator+(const Interval& o) const {
  Interval r;
  mpfr_add(r.lo_, lo_, o.lo_, MPFR_RNDD);
  mpfr_add(r.hi_, hi_, o.hi_, MPFR_RNDU);
  return r;
}

Interval Interval::operator-(const Interval& o) const {
  Interval r;
  mpfr_sub(r.lo_, lo_, o.hi_, MPFR_RNDD);
  mpfr_sub(r.hi_, hi_, o.lo_, MPFR_RNDU);
  return r;
}

Interval Interval::operator*(const Interval& o) const {
  // min/max over the four endpoint products, each rounded in the safe
  // direction. Handles every sign combination.
  Interval r;
  mpfr_t t;
  mpfr_init2(t, kPrec);
  const mpfr_srcptr a[2] = {lo_, hi_};
  const mpfr_srcptr b[2] = {o.lo_, o.hi_};
  bool first = true;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      mpfr_mul(t, a[i], b[j], MPFR_RNDD);
      if (first || mpfr_cmp(t, r.lo_) < 0) mpfr_set(r.lo_, t, MPFR_RNDD);
      mpfr_mul(t, a[i], b[j], MPFR_RNDU);
      if (first || mpfr_cmp(t, r.hi_) > 0) mpfr_set(r.hi_, t, MPFR_RNDU);
      first = false;
    }
  mpfr_clear(t);
  return r;
}

Interval Interval::sqr() const {
  Interval r = *this * *this;
  // x*x is nonnegative even when the interval straddles zero.
  if (mpfr_sgn(r.lo_) < 0 && mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0)
    mpfr_set_zero(r.lo_, 1);
  return r;
}

Interval Interval::log() const {
  if (mpfr_sgn(lo_) <= 0) throw std::domain_error("log of interval not strictly positive");
  Interval r;
  mpfr_log(r.lo_, lo_, MPFR_RNDD);
  mpfr_log(r.hi_, hi_, MPFR_RNDU);
  return r;
}

bool Interval::certainly_le(const Interval& o) const { return mpfr_cmp(hi_, o.lo_) <= 0; }

bool Interval::certainly_lt(const Interval& o) const { return mpfr_cmp(hi_, o.lo_) < 0; }

bool Interval::contains(const mpq_class& q) const {
  return mpfr_cmp_q(lo_, q.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_, q.get_mpq_t()) >= 0;
}

bool Interval::is_nonnegative() const { return mpfr_sgn(lo_) >= 0; }

bool Interval::is_positive() const { return mpfr_sgn(lo_) > 0; }

mpz_class Interval::ceil_upper() const {
  mpfr_t t;
  mpfr_init2(t, kPrec);
  mpfr_ceil(t, hi_);
  mpz_class z;
  mpfr_get_z(z.get_mpz_t(), t, MPFR_RNDN);
  mpfr_clear(t);
  return z;
}

mpz_class Interval::floor_lower() const {
  mpfr_t t;
  mpfr_init2(t, kPrec);
  mpfr_floor(t, lo_);
  mpz_class z;
  mpfr_get_z(z.get_mpz_t(), t, MPFR_RNDN);
  mpfr_clear(t);
  return z;
}

double Interval::inf_d() const { return mpfr_get_d(lo_, MPFR_RNDD); }

double Interval::sup_d() const { return mpfr_get_d(hi_, MPFR_RNDU); }

std::string Interval::str(int digits) const {
  char* a = nullptr;
  char* b = nullptr;
  mpfr_asprintf(&a, "%.*Rg", digits, lo_);
  mpfr_asprintf(&b, "%.*Rg", digits, hi_);
  std::string s = std::string("[") + a + ", " + b + "]";
  mpfr_free_str(a);
  mpfr_free_str(b);
  return s;
}

}  // namespace isobound
