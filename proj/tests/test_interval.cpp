#include "doctest.h"
#include "isobound/interval.hpp"
#include "oracle_values.hpp"

using isobound::Interval;

TEST_CASE("point intervals from exact inputs are exact") {
  Interval five(5);
  CHECK(five.ceil_upper() == 5);
  CHECK(five.floor_lower() == 5);
  CHECK(five.certainly_le(five));

  Interval half(mpq_class(1, 2));
  CHECK(half.contains(mpq_class(1, 2)));
  CHECK_FALSE(half.contains(mpq_class(1, 3)));

  Interval seven_halves(mpq_class(7, 2));
  CHECK(seven_halves.ceil_upper() == 4);
  CHECK(seven_halves.floor_lower() == 3);

  mpz_class big("123456789012345678901234567890");
  Interval b(big);
  CHECK(b.ceil_upper() == big);
  CHECK(b.floor_lower() == big);
}

TEST_CASE("arithmetic on dyadic points stays exact") {
  Interval a = Interval(2) - Interval(5);
  CHECK(a.ceil_upper() == -3);
  CHECK(a.floor_lower() == -3);
  Interval sq = a.sqr();
  CHECK(sq.ceil_upper() == 9);
  CHECK(sq.floor_lower() == 9);
  CHECK((a * a).contains(mpq_class(9)));

  Interval s = Interval(mpq_class(3, 4)) + Interval(mpq_class(1, 4));
  CHECK(s.contains(mpq_class(1)));
  CHECK(s.ceil_upper() == 1);
  CHECK(s.floor_lower() == 1);
}

TEST_CASE("log is outward rounded and matches the 40-digit references") {
  Interval ln3 = Interval(3).log();
  CHECK(matches_oracle(ln3, "ln3"));
  // transcendental results have positive width, so even self-comparison at
  // pessimistic endpoints must fail
  CHECK_FALSE(ln3.certainly_le(ln3));
  CHECK(ln3.is_positive());

  CHECK(matches_oracle(Interval(154).log(), "ln154"));
  CHECK(matches_oracle(Interval(22).log(), "ln22"));

  // ln 3 + 2 ln 2 = ln 12, two evaluation routes land on the same reference
  Interval ln2 = Interval(2).log();
  CHECK(matches_oracle(ln3 + ln2 + ln2, "ln3_plus_2ln2"));
  CHECK(matches_oracle(Interval(12).log(), "ln3_plus_2ln2"));

  // (1/2 ln 3) doubled returns to ln 3
  Interval half_ln3 = Interval(mpq_class(1, 2)) * ln3;
  CHECK(matches_oracle(half_ln3 + half_ln3, "half_ln3_times_2"));
}

TEST_CASE("certified comparisons") {
  Interval one(1), two(2);
  CHECK(one.certainly_lt(two));
  CHECK(one.certainly_le(two));
  CHECK(two.certainly_ge(one));
  CHECK_FALSE(two.certainly_le(one));
  // widths compose: ln(8) vs 3 ln(2) overlap, so neither strict order holds
  Interval ln8 = Interval(8).log();
  Interval three_ln2 = Interval(3) * Interval(2).log();
  CHECK_FALSE(ln8.certainly_lt(three_ln2));
  CHECK_FALSE(three_ln2.certainly_lt(ln8));
  // but both sit strictly between 2 and 2.1
  CHECK(Interval(2).certainly_lt(ln8));
  CHECK(ln8.certainly_lt(Interval(mpq_class(21, 10))));
}

TEST_CASE("sign predicates") {
  CHECK(Interval(0).is_nonnegative());
  CHECK_FALSE(Interval(0).is_positive());
  CHECK(Interval(mpq_class(1, 1000)).is_positive());
  CHECK_FALSE(Interval(-1).is_nonnegative());
}

TEST_CASE("log rejects nonpositive intervals") {
  CHECK_THROWS_AS(Interval(0).log(), std::domain_error);
  CHECK_THROWS_AS(Interval(-2).log(), std::domain_error);
}

TEST_CASE("multiplication handles mixed signs conservatively") {
  Interval m = Interval(-3) * Interval(mpq_class(5, 2));
  CHECK(m.contains(mpq_class(-15, 2)));
  CHECK(m.ceil_upper() == -7);
  CHECK(m.floor_lower() == -8);
  Interval p = Interval(-4) * Interval(-6);
  CHECK(p.contains(mpq_class(24)));
}
