#include "isobound/chebotarev.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "isobound/rational.hpp"

namespace isobound::cheb {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

// a log|d| + b n + c as an interval; all terms nonnegative.
Interval affine(const BoundTriple& t, const Interval& logd, int degree) {
  return Interval(t.a) * logd + Interval(t.b) * Interval(long(degree)) + Interval(t.c);
}

Interval log_int(long n) { return Interval(n).log(); }

}  // namespace

BoundTriple::BoundTriple(mpq_class a_, mpq_class b_, mpq_class c_)
    : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)) {
  require(a >= 0 && b >= 0 && c >= 0, "triple components must be nonnegative");
}

BoundTriple::BoundTriple(const std::string& a_, const std::string& b_, const std::string& c_)
    : BoundTriple(parse_decimal(a_), parse_decimal(b_), parse_decimal(c_)) {}

mpz_class eval_bound(const BoundTriple& triple, const Interval& log_abs_d, int degree) {
  require(degree >= 2, "degree must be >= 2");
  require(log_abs_d.is_nonnegative(), "log|d| must be nonnegative");
  return affine(triple, log_abs_d, degree).sqr().ceil_upper();
}

std::pair<Interval, Interval> discriminant_log_bounds(const DegreeDiscriminantData& data) {
  require(data.degree >= 2, "degree must be >= 2 (trivial extensions carry no bound)");
  require(data.rad_d >= 2, "rad(d) must be >= 2");
  Interval n(long(data.degree));
  Interval half(mpq_class(1, 2));
  Interval lower = half * log_int(3) * n;
  Interval upper = Interval(long(data.degree - 1)) * Interval(data.rad_d).log() + n * n.log();
  if (!lower.certainly_le(upper))
    throw std::logic_error("discriminant log bounds inverted; interval precision insufficient");
  return {lower, upper};
}

BoundTriple select_triple(const CollapsedTable& table, int n0, TripleConvention conv) {
  mpq_class a = 0, b = 0, c = 0;
  bool any = false;
  for (const CollapsedRow& row : table.rows) {
    bool in = conv == TripleConvention::Printed ? row.n_max <= n0 : row.n_min <= n0;
    if (!in) continue;
    a = std::max(a, row.triple.a);
    b = std::max(b, row.triple.b);
    c = std::max(c, row.triple.c);
    any = true;
  }
  require(any, "no table row applies to the requested degree cap");
  return BoundTriple(a, b, c);
}

mpz_class collapsed_bound(int n_upper, const mpz_class& rad_2NN, const CollapsedTable& table,
                          TripleConvention conv) {
  require(n_upper >= 2, "degree bound must be >= 2");
  require(rad_2NN >= 2 && rad_2NN % 2 == 0, "rad(2NN') must be even and >= 2");
  if (n_upper > 128) throw TableRangeExceeded(n_upper);
  int n0 = std::max(72, n_upper);
  BoundTriple t = select_triple(table, n0, conv);
  Interval capped_logd =
      Interval(long(n0 - 1)) * Interval(rad_2NN).log() + Interval(long(n0)) * log_int(n0);
  mpz_class bound = eval_bound(t, capped_logd, n0);
  for (const CollapsedRow& row : table.rows) {
    bool in = conv == TripleConvention::Printed ? row.n_max <= n0 : row.n_min <= n0;
    if (in) bound = std::max(bound, row.p0);
  }
  return bound;
}

bool verify_pivot(const mpz_class& p0, const BoundTriple& triple, int n0) {
  require(n0 >= 2, "n0 must be >= 2");
  Interval capped_logd = Interval(long(n0 - 1)) * log_int(2) + Interval(long(n0)) * log_int(n0);
  Interval rhs = affine(triple, capped_logd, n0).sqr();
  return Interval(p0).certainly_le(rhs);
}

namespace {

// Affine form of `inner` is dominated by `pivot` on the (logd x degree) box of
// `inner` within the column's degree range. Affine in both variables, so the
// corners decide; an unbounded logd range additionally needs slope dominance.
bool row_dominated(const TableRow& inner, const BoundTriple& pivot, int col_n_min, int col_n_max) {
  std::vector<Interval> logd_pts;
  logd_pts.emplace_back(inner.logd_min);
  if (inner.logd_max)
    logd_pts.emplace_back(*inner.logd_max);
  else if (!(inner.triple.a <= pivot.a))
    return false;
  for (const Interval& L : logd_pts)
    for (int n : {col_n_min, col_n_max})
      if (!affine(inner.triple, L, n).certainly_le(affine(pivot, L, n))) return false;
  return true;
}

}  // namespace

CollapsedTable collapse_table(const std::vector<TableRow>& bs_table, TripleConvention conv) {
  // Preserve first-appearance column order.
  std::vector<std::pair<int, int>> order;
  std::map<std::pair<int, int>, std::vector<TableRow>> columns;
  for (const TableRow& row : bs_table) {
    require(row.n_min <= row.n_max, "row degree range inverted");
    require(!row.logd_max || row.logd_min <= *row.logd_max, "row logd range inverted");
    auto key = std::make_pair(row.n_min, row.n_max);
    if (!columns.count(key)) order.push_back(key);
    columns[key].push_back(row);
  }
  (void)conv;
  CollapsedTable out;
  for (auto& key : order) {
    const std::vector<TableRow>& col = columns[key];
    int n0 = std::max(72, key.first);
    mpz_class absorbed = 2;  // vacuous absorption floor: smallest prime
    bool done = false;
    for (size_t pivot = 0; pivot < col.size(); ++pivot) {
      if (pivot > 0) {
        const TableRow& prev = col[pivot - 1];
        if (!prev.logd_max)
          throw CollapseFailed(key.first, key.second, "cannot absorb a row with unbounded logd range");
        absorbed = std::max(absorbed, eval_bound(prev.triple, Interval(*prev.logd_max), key.second));
        if (prev.p0) absorbed = std::max(absorbed, *prev.p0);
      }
      if (!verify_pivot(absorbed, col[pivot].triple, n0)) continue;
      for (size_t j = pivot + 1; j < col.size(); ++j)
        if (!row_dominated(col[j], col[pivot].triple, key.first, key.second))
          throw CollapseFailed(key.first, key.second,
                               "row " + std::to_string(j) + " not dominated by pivot row " + std::to_string(pivot));
      out.rows.push_back(CollapsedRow{key.first, key.second, col[pivot].triple, absorbed});
      done = true;
      break;
    }
    if (!done) throw CollapseFailed(key.first, key.second, "no pivot satisfies the p0 inequality");
  }
  return out;
}

ClassicalBounds classical_bounds(const Interval& log_abs_d, const mpq_class& c2) {
  require(log_abs_d.is_nonnegative(), "log|d| must be nonnegative");
  ClassicalBounds out;
  out.oesterle = (Interval(mpq_class(70)) * log_abs_d.sqr()).ceil_upper();
  Interval one(1L);
  if (one.certainly_lt(log_abs_d)) {
    Interval loglog = log_abs_d.log();
    out.lagarias_odlyzko = Interval(c2) * log_abs_d.sqr() * loglog.sqr().sqr();
  } else if (!log_abs_d.certainly_le(one)) {
    throw std::domain_error("log|d| interval straddles 1; log log form undecidable");
  }
  return out;
}

const CollapsedTable& builtin_table() {
  static const CollapsedTable table = [] {
    CollapsedTable t;
    auto add = [&t](int lo, int hi, const char* a, const char* b, const char* c) {
      t.rows.push_back(CollapsedRow{lo, hi, BoundTriple(a, b, c), mpz_class(2)});
    };
    add(2, 2, "1.446", "0.23", "6.8");
    add(3, 4, "1.527", "0.17", "6.4");
    add(5, 9, "1.629", "0.11", "6.1");
    add(10, 14, "1.667", "0.09", "6.0");
    add(15, 49, "1.745", "0.04", "5.8");
    add(50, 128, "1.755", "0", "5.7");
    return t;
  }();
  return table;
}

std::vector<TableRow> parse_table_csv(std::istream& in) {
  std::vector<TableRow> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string stripped;
    for (char ch : line)
      if (!isspace(static_cast<unsigned char>(ch))) stripped += ch;
    if (stripped.empty() || stripped[0] == '#') continue;
    std::vector<std::string> f;
    std::stringstream ss(stripped);
    std::string field;
    while (std::getline(ss, field, ',')) f.push_back(field);
    if (f.size() != 7 && f.size() != 8)
      throw std::invalid_argument("table csv line " + std::to_string(lineno) + ": expected 7 or 8 fields");
    TableRow row{std::stoi(f[0]), std::stoi(f[1]), parse_decimal(f[2]),
                 f[3] == "inf" ? std::optional<mpq_class>() : parse_decimal(f[3]),
                 BoundTriple(f[4], f[5], f[6]), std::nullopt};
    if (f.size() == 8) row.p0 = mpz_class(f[7]);
    rows.push_back(row);
  }
  return rows;
}

std::string emit_table_csv(const CollapsedTable& table) {
  std::string out = "# n_min,n_max,logd_min,logd_max,a,b,c,p0\n";
  for (const CollapsedRow& r : table.rows) {
    out += std::to_string(r.n_min) + "," + std::to_string(r.n_max) + ",0,inf," + decimal_str(r.triple.a) +
           "," + decimal_str(r.triple.b) + "," + decimal_str(r.triple.c) + "," + r.p0.get_str() + "\n";
  }
  return out;
}

std::string render_table(const CollapsedTable& table) {
  std::string out = "degree range    (a, b, c)                 p0\n";
  for (const CollapsedRow& r : table.rows) {
    std::string range = std::to_string(r.n_min) + "-" + std::to_string(r.n_max);
    std::string triple =
        "(" + decimal_str(r.triple.a) + ", " + decimal_str(r.triple.b) + ", " + decimal_str(r.triple.c) + ")";
    out += range + std::string(range.size() < 16 ? 16 - range.size() : 1, ' ') + triple +
           std::string(triple.size() < 26 ? 26 - triple.size() : 1, ' ') + r.p0.get_str() + "\n";
  }
  return out;
}

}  // namespace isobound::cheb
