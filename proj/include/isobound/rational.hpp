/* Exact decimal <-> rational conversions. Table constants like 1.745 must be
   held as exact rationals, never binary floats. */
#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace isobound {

// Parses "[+-]digits[.digits]" into an exact rational. No exponent form, no
// leading/trailing junk.
inline mpq_class parse_decimal(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty decimal");
  size_t i = 0;
  bool neg = false;
  if (s[i] == '+' || s[i] == '-') {
    neg = s[i] == '-';
    ++i;
  }
  mpz_class num = 0;
  mpz_class den = 1;
  bool seen_digit = false, seen_dot = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (c == '.') {
      if (seen_dot) throw std::invalid_argument("two dots in decimal: " + s);
      seen_dot = true;
    } else if (c >= '0' && c <= '9') {
      num = num * 10 + (c - '0');
      if (seen_dot) den *= 10;
      seen_digit = true;
    } else {
      throw std::invalid_argument("bad decimal: " + s);
    }
  }
  if (!seen_digit) throw std::invalid_argument("no digits in decimal: " + s);
  mpq_class q(num, den);
  q.canonicalize();
  return neg ? mpq_class(-q) : q;
}

// Renders a rational whose reduced denominator is 2^a 5^b as an exact decimal
// string; anything else falls back to "num/den".
inline std::string decimal_str(const mpq_class& q) {
  mpz_class den = q.get_den();
  unsigned twos = 0, fives = 0;
  while (den % 2 == 0) den /= 2, ++twos;
  while (den % 5 == 0) den /= 5, ++fives;
  if (den != 1) return q.get_str();
  unsigned k = std::max(twos, fives);
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, k);
  mpz_class n = q.get_num() * (scale / q.get_den());
  bool neg = n < 0;
  if (neg) n = -n;
  std::string digits = n.get_str();
  if (k == 0) return (neg ? "-" : "") + digits;
  if (digits.size() <= k) digits.insert(0, k + 1 - digits.size(), '0');
  digits.insert(digits.size() - k, ".");
  return (neg ? "-" : "") + digits;
}

}  // namespace isobound
