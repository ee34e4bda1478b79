/* Effective-Chebotarev bound formulas under GRH: the linear-in-log family
   p <= (a log|d_K| + b n_K + c)^2, degree/radical bounds on log|d_K|, the
   collapsed one-triple-per-degree-range form with its pivot verification, and
   the classical Oesterle / Lagarias-Odlyzko shapes. Table constants are exact
   decimal rationals; transcendental evaluation is outward-rounded interval
   arithmetic; integer bounds are ceilings of upper endpoints (rounding a prime
   bound up is always safe). */
#pragma once

#include <gmpxx.h>

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "isobound/interval.hpp"

namespace isobound::cheb {

struct BoundTriple {
  mpq_class a, b, c;  // all >= 0, held exactly

  BoundTriple(mpq_class a_, mpq_class b_, mpq_class c_);
  // Parses three exact decimal strings.
  BoundTriple(const std::string& a_, const std::string& b_, const std::string& c_);
};

// One row of an uncollapsed table: a triple valid for degrees in
// [n_min, n_max] and log|d| in [logd_min, logd_max] (logd_max absent = +inf).
struct TableRow {
  int n_min = 2, n_max = 2;
  mpq_class logd_min;
  std::optional<mpq_class> logd_max;
  BoundTriple triple;
  std::optional<mpz_class> p0;
};

struct CollapsedRow {
  int n_min = 2, n_max = 2;
  BoundTriple triple;
  mpz_class p0;
};

struct CollapsedTable {
  std::vector<CollapsedRow> rows;  // degree ranges partition [2, 128]
};

struct DegreeDiscriminantData {
  int degree = 2;            // n_K >= 2
  mpz_class rad_d;           // radical of the discriminant, >= 2, squarefree
  std::optional<Interval> log_abs_d;
};

class TableRangeExceeded : public std::runtime_error {
 public:
  explicit TableRangeExceeded(int n) : std::runtime_error("degree bound " + std::to_string(n) + " exceeds table range [2,128]") {}
};

class CollapseFailed : public std::runtime_error {
 public:
  CollapseFailed(int n_min, int n_max, const std::string& why)
      : std::runtime_error("collapse failed on column " + std::to_string(n_min) + "-" + std::to_string(n_max) + ": " + why),
        column_n_min(n_min),
        column_n_max(n_max) {}
  int column_n_min, column_n_max;
};

// ceil of the upper endpoint of (a log|d| + b n + c)^2. Requires log|d| >= 0.
mpz_class eval_bound(const BoundTriple& triple, const Interval& log_abs_d, int degree);

// (1/2 log 3) n_K <= log|d_K| <= (n_K - 1) log rad(d_K) + n_K log n_K.
std::pair<Interval, Interval> discriminant_log_bounds(const DegreeDiscriminantData& data);

// Which rows feed the collapsed triple for a degree cap n0. Printed keeps the
// per-proof-display constants (rows fully contained in [2, n0]); StrictMax is
// the literal per-component maximum over every row meeting [2, n0].
enum class TripleConvention { Printed, StrictMax };

BoundTriple select_triple(const CollapsedTable& table, int n0, TripleConvention conv);

// max(72, n_upper)-floored bound (a_bar((n0-1) log rad + n0 log n0) + b_bar n0
// + c_bar)^2 over the collapsed table, further maxed with the selected rows'
// p0. rad_2NN must be even (the radical always carries the prime 2).
mpz_class collapsed_bound(int n_upper, const mpz_class& rad_2NN, const CollapsedTable& table,
                          TripleConvention conv = TripleConvention::Printed);

// p0 <= (a_bar((n0-1) log 2 + n0 log n0) + b_bar n0 + c_bar)^2, certified at
// the pessimistic (lower) endpoint of the right-hand side.
bool verify_pivot(const mpz_class& p0, const BoundTriple& triple, int n0);

// Collapses each degree column of an uncollapsed table to one pivot triple:
// rows before the pivot are absorbed into p0 via their endpoint values, the
// pivot must pass verify_pivot against that p0, and every later row's affine
// form must be dominated by the pivot's on its own (logd x degree) box.
CollapsedTable collapse_table(const std::vector<TableRow>& bs_table,
                              TripleConvention conv = TripleConvention::Printed);

struct ClassicalBounds {
  mpz_class oesterle;                        // ceil(70 (log|d|)^2)
  std::optional<Interval> lagarias_odlyzko;  // c2 (log|d|)^2 (log log|d|)^4; absent when log|d| <= 1
};

ClassicalBounds classical_bounds(const Interval& log_abs_d, const mpq_class& c2);

// The six-row collapsed table of this tool's bound formulas, p0 = 2.
const CollapsedTable& builtin_table();

// CSV rows: n_min,n_max,logd_min,logd_max,a,b,c[,p0]; logd_max may be "inf";
// blank lines and #-comments skipped.
std::vector<TableRow> parse_table_csv(std::istream& in);
std::string emit_table_csv(const CollapsedTable& table);
std::string render_table(const CollapsedTable& table);

}  // namespace isobound::cheb
