#include <sstream>

#include "doctest.h"
#include "isobound/chebotarev.hpp"
#include "oracle_values.hpp"

using namespace isobound::cheb;
using isobound::Interval;

TEST_CASE("eval_bound reproduces the pinned constants") {
  Interval ln154 = Interval(154).log();
  CHECK(eval_bound(BoundTriple("124", "0", "561"), ln154, 2) ==
        oracle().at("bound_mod2distinct_rad154").get<long>());
  CHECK(eval_bound(BoundTriple("223", "0", "1127"), ln154, 2) ==
        oracle().at("bound_twist_rad154").get<long>());
  CHECK(eval_bound(BoundTriple("482", "0", "2880"), Interval(2).log(), 2) ==
        oracle().at("bound_generic_rad2").get<long>());
  CHECK(eval_bound(BoundTriple("482", "0", "2880"), ln154, 2) ==
        oracle().at("bound_generic_rad154").get<long>());
}

TEST_CASE("eval_bound validates its domain") {
  BoundTriple t("1", "0", "1");
  CHECK_THROWS_AS(eval_bound(t, Interval(1), 1), std::invalid_argument);
  CHECK_THROWS_AS(eval_bound(t, Interval(-1), 2), std::invalid_argument);
  CHECK_THROWS_AS(BoundTriple("-1", "0", "0"), std::invalid_argument);
  // degenerate but legal: zero log, the bound is (b n + c)^2
  CHECK(eval_bound(BoundTriple("5", "1", "3"), Interval(0), 2) == 25);
}

TEST_CASE("discriminant log bounds bracket correctly") {
  DegreeDiscriminantData d2;
  d2.degree = 2;
  d2.rad_d = 3;
  auto [lower, upper] = discriminant_log_bounds(d2);
  // lower = (1/2 ln 3) * 2 = ln 3; upper = ln 3 + 2 ln 2 = ln 12
  CHECK(matches_oracle(lower, "half_ln3_times_2"));
  CHECK(matches_oracle(upper, "ln3_plus_2ln2"));
  CHECK(lower.certainly_le(upper));

  DegreeDiscriminantData big;
  big.degree = 72;
  big.rad_d = 154;
  auto [lo72, up72] = discriminant_log_bounds(big);
  CHECK(lo72.certainly_lt(up72));
  // 71 ln 154 + 72 ln 72 is between 600 and 700
  CHECK(Interval(600).certainly_lt(up72));
  CHECK(up72.certainly_lt(Interval(700)));

  DegreeDiscriminantData bad;
  bad.degree = 1;
  bad.rad_d = 3;
  CHECK_THROWS_AS(discriminant_log_bounds(bad), std::invalid_argument);
  bad.degree = 2;
  bad.rad_d = 1;
  CHECK_THROWS_AS(discriminant_log_bounds(bad), std::invalid_argument);
}

TEST_CASE("classical bound shapes") {
  ClassicalBounds at10 = classical_bounds(Interval(10), mpq_class(1));
  CHECK(at10.oesterle == oracle().at("oesterle_logd10").get<long>());
  CHECK(at10.lagarias_odlyzko.has_value());

  ClassicalBounds at1 = classical_bounds(Interval(1), mpq_class(1));
  CHECK(at1.oesterle == oracle().at("oesterle_logd1").get<long>());
  CHECK_FALSE(at1.lagarias_odlyzko.has_value());

  // at log|d| = e (40-digit rational stand-in), c2 = 1, the log-log form is
  // e^2 (ln e)^4 = e^2; the stand-in's error propagates at slope ~16
  Interval at_e(dec("2.718281828459045235360287471352662497757"));
  ClassicalBounds lo = classical_bounds(at_e, mpq_class(1));
  REQUIRE(lo.lagarias_odlyzko.has_value());
  CHECK(within(*lo.lagarias_odlyzko, dec(oracle().at("lo_shape_at_e_c2_1").get<std::string>()),
               pow10_inv(34)));
  CHECK(lo.oesterle == 518);

  CHECK_THROWS_AS(classical_bounds(Interval(-1), mpq_class(1)), std::invalid_argument);
}

TEST_CASE("builtin collapsed table shape") {
  const CollapsedTable& t = builtin_table();
  REQUIRE(t.rows.size() == 6);
  int expect[6][2] = {{2, 2}, {3, 4}, {5, 9}, {10, 14}, {15, 49}, {50, 128}};
  for (size_t i = 0; i < 6; ++i) {
    CHECK(t.rows[i].n_min == expect[i][0]);
    CHECK(t.rows[i].n_max == expect[i][1]);
    CHECK(t.rows[i].p0 == 2);
  }
  // degree ranges partition [2, 128]
  for (size_t i = 1; i < 6; ++i) CHECK(t.rows[i].n_min == t.rows[i - 1].n_max + 1);
}

TEST_CASE("select_triple conventions") {
  const CollapsedTable& t = builtin_table();
  BoundTriple printed = select_triple(t, 72, TripleConvention::Printed);
  CHECK(printed.a == mpq_class(349, 200));   // 1.745
  CHECK(printed.b == mpq_class(23, 100));    // 0.23
  CHECK(printed.c == mpq_class(34, 5));      // 6.8
  BoundTriple strict = select_triple(t, 72, TripleConvention::StrictMax);
  CHECK(strict.a == mpq_class(351, 200));    // 1.755, the 50-128 row intrudes
  CHECK(strict.b == mpq_class(23, 100));
  BoundTriple at128 = select_triple(t, 128, TripleConvention::Printed);
  CHECK(at128.a == mpq_class(351, 200));
}

TEST_CASE("envelope slopes and intercepts from the selected triples") {
  const CollapsedTable& t = builtin_table();
  struct Row {
    int n0;
    const char* slope_key;
    const char* icept_key;
  } rows[] = {{72, "env72_slope", "env72_intercept"},
              {96, "env96_slope", "env96_intercept"},
              {128, "env128_slope", "env128_intercept"}};
  for (const Row& r : rows) {
    BoundTriple tri = select_triple(t, r.n0, TripleConvention::Printed);
    // slope a*(n0-1) is exact rational, the oracle string is exact decimal
    CHECK(tri.a * (r.n0 - 1) == dec(oracle().at(r.slope_key).get<std::string>()));
    Interval n0(long(r.n0));
    Interval icept = Interval(tri.a) * n0 * n0.log() + Interval(tri.b) * n0 + Interval(tri.c);
    CHECK(matches_oracle(icept, r.icept_key));
  }
}

TEST_CASE("collapsed_bound pins the degree-capped value") {
  CHECK(collapsed_bound(48, mpz_class(154), builtin_table()) ==
        oracle().at("prop_delta24_rad154").get<long>());
  // degree caps below 72 are floored to 72, so they all agree
  CHECK(collapsed_bound(2, mpz_class(154), builtin_table()) ==
        collapsed_bound(72, mpz_class(154), builtin_table()));
  // monotone in the cap past the floor
  CHECK(collapsed_bound(72, mpz_class(154), builtin_table()) <
        collapsed_bound(128, mpz_class(154), builtin_table()));
  CHECK_THROWS_AS(collapsed_bound(129, mpz_class(154), builtin_table()), TableRangeExceeded);
  CHECK_THROWS_AS(collapsed_bound(48, mpz_class(155), builtin_table()), std::invalid_argument);
  CHECK_THROWS_AS(collapsed_bound(1, mpz_class(154), builtin_table()), std::invalid_argument);
}

TEST_CASE("verify_pivot certifies at the pessimistic endpoint") {
  BoundTriple t("1.446", "0.23", "6.8");
  CHECK(verify_pivot(mpz_class(2), t, 72));
  CHECK_FALSE(verify_pivot(mpz_class("1000000000000"), t, 72));
}

TEST_CASE("csv parse and collapse round trip") {
  std::istringstream csv(
      "# synthetic two-column table\n"
      "2,72,0,5,1.8,0.25,7,2\n"
      "2,72,5,inf,1.745,0.23,6.8\n"
      "73,128,0,inf,1.755,0.23,6.8,2\n");
  auto rows = parse_table_csv(csv);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].logd_max.has_value());
  CHECK_FALSE(rows[1].logd_max.has_value());
  CHECK(rows[0].p0.has_value());
  CHECK_FALSE(rows[1].p0.has_value());

  CollapsedTable ct = collapse_table(rows);
  REQUIRE(ct.rows.size() == 2);
  CHECK(ct.rows[0].n_min == 2);
  CHECK(ct.rows[0].n_max == 72);
  CHECK(ct.rows[0].triple.a == mpq_class(9, 5));  // pivot row keeps its triple
  CHECK(ct.rows[0].p0 == 2);
  CHECK(ct.rows[1].n_min == 73);
  CHECK(ct.rows[1].triple.a == mpq_class(351, 200));
  CHECK(ct.rows[1].p0 == 2);

  std::string emitted = emit_table_csv(ct);
  CHECK(emitted.find("73") != std::string::npos);
  std::string rendered = render_table(ct);
  CHECK_FALSE(rendered.empty());
}

TEST_CASE("collapse failure modes carry the column") {
  // identical triples: interval rounding forbids claiming dominance
  std::istringstream twin(
      "2,72,0,5,1.745,0.23,6.8,2\n"
      "2,72,5,inf,1.745,0.23,6.8\n");
  auto twin_rows = parse_table_csv(twin);
  CHECK_THROWS_AS(collapse_table(twin_rows), CollapseFailed);
  try {
    collapse_table(twin_rows);
  } catch (const CollapseFailed& e) {
    CHECK(e.column_n_min == 2);
    CHECK(e.column_n_max == 72);
  }

  // a triple too small to absorb its own p0 never yields a pivot
  std::istringstream weak("2,72,0,inf,0.001,0,0.1,1000000\n");
  auto weak_rows = parse_table_csv(weak);
  CHECK_THROWS_AS(collapse_table(weak_rows), CollapseFailed);

  std::istringstream short_line("2,72,0\n");
  CHECK_THROWS_AS(parse_table_csv(short_line), std::invalid_argument);
}
