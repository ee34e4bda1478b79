// Loads the frozen expected-value file and provides the comparison helpers
// shared by the numeric tests: exact decimal-string parsing into rationals
// and "interval sits within tol of the oracle value" checks. The oracle
// strings carry 40 significant digits, far beyond double precision, so these
// checks certify the interval arithmetic itself.
#pragma once

#include <fstream>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

#include "isobound/interval.hpp"
#include "json.hpp"

#ifndef ISOBOUND_ORACLE_JSON
#error "build must define ISOBOUND_ORACLE_JSON"
#endif

inline const nlohmann::json& oracle() {
  static const nlohmann::json j = [] {
    std::ifstream in(ISOBOUND_ORACLE_JSON);
    if (!in) throw std::runtime_error("cannot open " ISOBOUND_ORACLE_JSON);
    return nlohmann::json::parse(in);
  }();
  return j;
}

// exact rational from a plain decimal string, e.g. "-12.0375" -> -963/80
inline mpq_class dec(const std::string& s) {
  bool neg = false;
  size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) neg = s[i++] == '-';
  std::string digits;
  size_t frac = 0;
  bool seen_dot = false;
  for (; i < s.size(); ++i) {
    if (s[i] == '.') {
      if (seen_dot) throw std::invalid_argument("bad decimal: " + s);
      seen_dot = true;
    } else if (s[i] >= '0' && s[i] <= '9') {
      digits += s[i];
      if (seen_dot) ++frac;
    } else {
      throw std::invalid_argument("bad decimal: " + s);
    }
  }
  if (digits.empty()) throw std::invalid_argument("bad decimal: " + s);
  mpz_class num(digits, 10);
  mpz_class den = 1;
  for (size_t f = 0; f < frac; ++f) den *= 10;
  mpq_class q(num, den);
  q.canonicalize();
  return neg ? mpq_class(-q) : q;
}

// |iv - q| <= tol, certified at the pessimistic interval endpoints. tol is
// chosen per call site: big enough to absorb the oracle string's own final
// digit rounding, tiny against any actual arithmetic error.
inline bool within(const isobound::Interval& iv, const mpq_class& q, const mpq_class& tol) {
  isobound::Interval d = iv - isobound::Interval(q);
  return d.certainly_le(isobound::Interval(tol)) &&
         isobound::Interval(mpq_class(-tol)).certainly_le(d);
}

inline mpq_class pow10_inv(int n) {
  mpz_class d = 1;
  for (int i = 0; i < n; ++i) d *= 10;
  return mpq_class(1, d);
}

inline bool matches_oracle(const isobound::Interval& iv, const char* key) {
  // 1e-34 absolute: the 40-digit strings for values up to ~1e3 round at
  // ~5e-38; the 192-bit intervals are ~1e-55 wide.
  return within(iv, dec(oracle().at(key).get<std::string>()), pow10_inv(34));
}
