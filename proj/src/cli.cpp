#include "isobound/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "isobound/chebotarev.hpp"
#include "isobound/deviation.hpp"
#include "isobound/elliptic.hpp"
#include "isobound/groups.hpp"
#include "isobound/pipeline.hpp"

namespace isobound {
namespace {

using nlohmann::json;

// maps to exit code 2
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string display_label(const elliptic::WeierstrassCurve& E) {
  if (!E.label.empty()) return E.label;
  std::ostringstream os;
  os << "[" << E.a1 << " " << E.a2 << " " << E.a3 << " " << E.a4 << " " << E.a6 << "]";
  return os.str();
}

std::string short_model(const elliptic::WeierstrassCurve& E) {
  std::ostringstream os;
  os << E.a1 << " " << E.a2 << " " << E.a3 << " " << E.a4 << " " << E.a6;
  return os.str();
}

elliptic::WeierstrassCurve parse_coeff_string(const std::string& s) {
  std::istringstream in(s);
  std::vector<mpz_class> a;
  std::string tok;
  while (in >> tok) {
    try {
      a.emplace_back(tok);
    } catch (const std::invalid_argument&) {
      throw UsageError("bad curve coefficient '" + tok + "' in \"" + s + "\"");
    }
  }
  if (a.size() != 5)
    throw UsageError("curve string must have 5 coefficients \"a1 a2 a3 a4 a6\", got \"" + s + "\"");
  return {a[0], a[1], a[2], a[3], a[4], "", std::nullopt};
}

std::vector<elliptic::WeierstrassCurve> read_curve_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open curve file: " + path);
  try {
    return elliptic::parse_curve_file(in);
  } catch (const std::exception& e) {
    throw UsageError("bad curve file " + path + ": " + e.what());
  }
}

// one curve from either a coefficient string or a file (picked by label, or
// by position when the file is unambiguous)
elliptic::WeierstrassCurve resolve_curve(const std::string& coeffs, const std::string& file,
                                         const std::string& label, size_t position) {
  if (!coeffs.empty()) return parse_coeff_string(coeffs);
  if (file.empty()) throw UsageError("need a curve: pass --curve \"a1 a2 a3 a4 a6\" or --file");
  const std::vector<elliptic::WeierstrassCurve> curves = read_curve_file(file);
  if (curves.empty()) throw UsageError("curve file " + file + " is empty");
  if (!label.empty()) {
    for (const auto& E : curves)
      if (E.label == label) return E;
    throw UsageError("label '" + label + "' not found in " + file);
  }
  if (position < curves.size()) return curves[position];
  throw UsageError("curve file " + file + " has only " + std::to_string(curves.size()) +
                   " curves; pass labels to disambiguate");
}

groups::FiniteGroup load_group(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open group file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  std::string first;
  {
    std::istringstream probe(text);
    std::string tok;
    while (probe >> tok) {
      if (tok[0] == '#') {
        std::getline(probe, tok);
        continue;
      }
      first = tok;
      break;
    }
  }
  std::istringstream data(text);
  try {
    if (first == "universe") return groups::close_group(groups::parse_group_file(data).generators);
    if (first == "order") return groups::parse_mult_table(data);
  } catch (const groups::SizeGuardExceeded&) {
    throw;  // data-scale failure, not a usage error
  } catch (const std::exception& e) {
    throw UsageError("bad group file " + path + ": " + e.what());
  }
  throw UsageError("group file " + path +
                   " must start with 'universe ...' (generators) or 'order N' (table)");
}

std::string level_str(std::optional<unsigned> v, unsigned k) {
  return v ? std::to_string(*v) : (">= " + std::to_string(k) + " (working precision)");
}

const char* outcome_str(pipeline::VerifyOutcome o) {
  switch (o) {
    case pipeline::VerifyOutcome::BoundOnly: return "BoundOnly";
    case pipeline::VerifyOutcome::Verified: return "Verified";
    case pipeline::VerifyOutcome::Falsified: return "FALSIFIED";
    case pipeline::VerifyOutcome::IsogenousOrIndistinguishable:
      return "IsogenousOrIndistinguishable";
  }
  return "?";
}

// ---- subcommand option bags and handlers ----

struct PairOpts {
  std::string curve1, curve2, file, label1, label2;
  std::pair<elliptic::WeierstrassCurve, elliptic::WeierstrassCurve> resolve() const {
    return {resolve_curve(curve1, file, label1, 0), resolve_curve(curve2, file, label2, 1)};
  }
  void add_to(CLI::App* sub) {
    sub->add_option("--curve1", curve1, "first curve as \"a1 a2 a3 a4 a6\"");
    sub->add_option("--curve2", curve2, "second curve as \"a1 a2 a3 a4 a6\"");
    sub->add_option("--file", file, "curve file (label a1 a2 a3 a4 a6 [conductor] per line)");
    sub->add_option("--label1", label1, "label of the first curve in --file");
    sub->add_option("--label2", label2, "label of the second curve in --file");
  }
};

struct IsogenyBoundOpts {
  PairOpts pair;
  bool verify = false;
  bool json_out = false;
  long cap = 0;       // 0 = unset
  long delta = 0;     // 0 = unset
};

int run_isogeny_bound(const IsogenyBoundOpts& o) {
  const auto [E, Ep] = o.pair.resolve();
  pipeline::BoundReport rep;
  if (o.verify) {
    rep = pipeline::verify_pair(E, Ep, o.cap > 0 ? std::optional<long>(o.cap)
                                                 : std::nullopt);
  } else {
    const mpz_class rad = pipeline::even_pair_radical(elliptic::bad_primes_radical(E),
                                                      elliptic::bad_primes_radical(Ep));
    rep = pipeline::isogeny_bound(pipeline::classify_pair(E, Ep), rad,
                                  o.delta > 0 ? std::optional<long>(o.delta) : std::nullopt);
  }

  if (o.json_out) {
    json j;
    j["curve1"] = display_label(E);
    j["curve2"] = display_label(Ep);
    j["case"] = pipeline::case_name(rep.pair_case.kind);
    j["evidence"] = rep.pair_case.evidence;
    j["rad"] = rep.rad2NN.get_str();
    j["bound"] = rep.bound.get_str();
    j["formula"] = rep.formula_id;
    if (o.verify) j["outcome"] = outcome_str(rep.outcome);
    if (rep.verified_prime) {
      j["prime"] = rep.verified_prime->p;
      j["ap1"] = rep.verified_prime->ap_E;
      j["ap2"] = rep.verified_prime->ap_Eprime;
    }
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "curves: " << display_label(E) << ", " << display_label(Ep) << "\n"
              << "case: " << pipeline::case_name(rep.pair_case.kind) << " ("
              << rep.pair_case.evidence << ")\n"
              << "rad(2 N N'): " << rep.rad2NN << "\n"
              << "formula: " << rep.formula_id << "\n"
              << "bound: " << rep.bound << "\n";
    if (o.verify) {
      if (rep.verified_prime)
        std::cout << "verified: p = " << rep.verified_prime->p << ", a_p = "
                  << rep.verified_prime->ap_E << " vs " << rep.verified_prime->ap_Eprime << "\n";
      std::cout << "outcome: " << outcome_str(rep.outcome) << "\n";
    }
  }
  return o.verify && rep.outcome != pipeline::VerifyOutcome::Verified ? 1 : 0;
}

struct SerreBoundOpts {
  std::string curve, file, label;
  bool json_out = false;
};

int run_serre_bound(const SerreBoundOpts& o) {
  const elliptic::WeierstrassCurve E = resolve_curve(o.curve, o.file, o.label, 0);
  const pipeline::SerreReport rep = pipeline::serre_bound(E);
  if (o.json_out) {
    json j;
    j["curve"] = display_label(E);
    j["rad"] = rep.rad2N.get_str();
    j["improved"] = rep.c_e_bound_improved.get_str();
    j["mw"] = rep.c_e_bound_mw.get_str();
    j["finite_j_shortcut"] = rep.finite_j_shortcut;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "curve: " << display_label(E) << "\n"
              << "rad(2N): " << rep.rad2N << "\n"
              << "index bound (improved): " << rep.c_e_bound_improved << "\n"
              << "index bound (MW): " << rep.c_e_bound_mw << "\n";
    if (rep.finite_j_shortcut)
      std::cout << "note: j lies in the finite 2-adic list; the index constant is <= 2\n";
  }
  return 0;
}

struct DistinguishOpts {
  PairOpts pair;
  long cap = 10'000;
  bool json_out = false;
};

int run_distinguish(const DistinguishOpts& o) {
  if (o.cap < 1) throw UsageError("--cap must be positive");
  const auto [E, Ep] = o.pair.resolve();
  const std::optional<elliptic::TraceRecord> rec = elliptic::distinguishing_prime(E, Ep, o.cap);
  if (o.json_out) {
    json j;
    j["curve1"] = display_label(E);
    j["curve2"] = display_label(Ep);
    j["cap"] = o.cap;
    if (rec) {
      j["prime"] = rec->p;
      j["ap1"] = rec->ap_E;
      j["ap2"] = rec->ap_Eprime;
    }
    std::cout << j.dump(2) << "\n";
  } else if (rec) {
    std::cout << "p = " << rec->p << ": a_p = " << rec->ap_E << " vs " << rec->ap_Eprime << "\n";
  } else {
    std::cout << "no distinguishing prime p <= " << o.cap << "\n";
  }
  return rec ? 0 : 1;
}

struct CollapseOpts {
  std::string table, out;
  bool strict_max = false;
};

int run_collapse(const CollapseOpts& o) {
  std::ifstream in(o.table);
  if (!in) throw UsageError("cannot open table file: " + o.table);
  std::vector<cheb::TableRow> rows;
  try {
    rows = cheb::parse_table_csv(in);
  } catch (const std::exception& e) {
    throw UsageError("bad table file " + o.table + ": " + e.what());
  }
  const cheb::TripleConvention conv =
      o.strict_max ? cheb::TripleConvention::StrictMax : cheb::TripleConvention::Printed;
  const cheb::CollapsedTable collapsed = cheb::collapse_table(rows, conv);  // CollapseFailed -> 1
  const std::string csv = cheb::emit_table_csv(collapsed);
  if (!o.out.empty()) {
    std::ofstream of(o.out);
    if (!of) throw UsageError("cannot write output file: " + o.out);
    of << csv;
    std::cout << "wrote " << o.out << "\n";
  } else {
    std::cout << csv;
  }
  std::cout << "\n" << cheb::render_table(collapsed);
  return 0;
}

struct GroupFileOpts {
  std::string file;
};

int run_group_close(const GroupFileOpts& o) {
  const groups::FiniteGroup G = load_group(o.file);
  unsigned exponent = 1;
  for (size_t i = 0; i < G.order(); ++i)
    exponent = std::lcm(exponent, G.element_order(i));
  std::cout << "order " << G.order() << "\n"
            << "abelian: " << (G.is_abelian() ? "yes" : "no") << "\n"
            << "exponent: " << exponent << "\n";
  return 0;
}

int run_group_classes(const GroupFileOpts& o) {
  const groups::FiniteGroup G = load_group(o.file);
  const groups::ConjClassPartition part = groups::conjugacy_classes(G);
  std::cout << part.classes.size() << " conjugacy classes, sizes:";
  for (const auto& cls : part.classes) std::cout << " " << cls.size();
  std::cout << "\n";
  return 0;
}

int run_group_normals(const GroupFileOpts& o) {
  const groups::FiniteGroup G = load_group(o.file);
  const std::vector<std::vector<size_t>> ns = groups::normal_subgroups(G);
  std::cout << ns.size() << " normal subgroups, orders:";
  for (const auto& N : ns) std::cout << " " << N.size();
  std::cout << "\n";
  return 0;
}

struct QuotientCheckOpts {
  std::string file;
  unsigned order_gt = 3;
  bool proper = false;
};

int run_group_quotient_check(const QuotientCheckOpts& o) {
  const groups::FiniteGroup G = load_group(o.file);
  const std::optional<groups::QuotientOrderWitness> w =
      o.proper ? groups::has_proper_quotient_with_element_order_gt(G, o.order_gt)
               : groups::has_quotient_with_element_order_gt(G, o.order_gt);
  if (w) {
    std::cout << (o.proper ? "proper " : "") << "quotient of order " << w->quotient_order
              << " with an element of order " << w->witness_order << " (> " << o.order_gt
              << "), kernel order " << w->kernel.size() << "\n";
    const std::optional<size_t> s =
        groups::smallest_quotient_order_with_element_order_gt(G, o.order_gt);
    if (s) std::cout << "smallest such quotient order: " << *s << "\n";
  } else {
    std::cout << "no " << (o.proper ? "proper " : "") << "quotient has an element of order > "
              << o.order_gt << "\n";
  }
  if (o.order_gt == 3)
    std::cout << "problematic (no proper quotient with an element of order > 3): "
              << (groups::is_problematic(G) ? "yes" : "no") << "\n";
  return 0;
}

struct TwoGroupOpts {
  std::string from, to;
  bool surjective = false;
};

int run_group_hom(const TwoGroupOpts& o) {
  const groups::FiniteGroup G = load_group(o.from);
  const groups::FiniteGroup H = load_group(o.to);
  const bool found = groups::hom_exists(G, H, o.surjective);
  std::cout << (o.surjective ? "surjective " : "") << "homomorphism exists: "
            << (found ? "yes" : "no") << "\n";
  return 0;
}

int run_group_iso(const TwoGroupOpts& o) {
  const groups::FiniteGroup G = load_group(o.from);
  const groups::FiniteGroup H = load_group(o.to);
  std::cout << "isomorphic: " << (groups::iso_test(G, H) ? "yes" : "no") << "\n";
  return 0;
}

int run_group_audit(const GroupFileOpts& o) {
  std::ifstream in(o.file);
  if (!in) throw UsageError("cannot open audit file: " + o.file);
  const groups::AuditResult res = groups::audit_problematic(in);
  if (res.skipped) {
    std::cout << "SKIPPED: " << res.detail << "\n";
    return 0;
  }
  std::cout << (res.ok ? "OK: " : "MISMATCH: ") << res.detail << "\n";
  return res.ok ? 0 : 1;
}

struct DeviationAnalyzeOpts {
  std::string reps, table;
};

int run_deviation_analyze(const DeviationAnalyzeOpts& o) {
  std::ifstream in(o.reps);
  if (!in) throw UsageError("cannot open rep-pair file: " + o.reps);
  deviation::RepPair rp;
  try {
    rp = deviation::parse_rep_pair(in);
  } catch (const std::exception& e) {
    throw UsageError("bad rep-pair file " + o.reps + ": " + e.what());
  }
  if (!o.table.empty()) {
    const groups::FiniteGroup T = load_group(o.table);
    if (T.order() != rp.G.order())
      throw UsageError("accompanying table order " + std::to_string(T.order()) +
                       " does not match rep-pair group order " + std::to_string(rp.G.order()));
    if (T.order() <= 256 && !groups::iso_test(T, rp.G))
      throw UsageError("accompanying table is not isomorphic to the rep-pair group");
  }

  const deviation::ModuleBasis mb = deviation::algebra_closure(rp);
  const deviation::DeviationGroup dg = deviation::deviation_group(rp);
  const deviation::AlphaBeta ab = deviation::compute_beta(rp);

  std::cout << "modulus: 2^" << rp.k << "\n"
            << "group order: " << rp.G.order() << "\n"
            << "M-rank: " << mb.rank() << " (profile";
  for (unsigned r : mb.rank_profile) std::cout << " " << r;
  std::cout << ")\n"
            << "|delta(G)|: " << dg.delta.order() << "\n";
  const std::optional<size_t> qb =
      groups::smallest_quotient_order_with_element_order_gt(dg.delta, 3);
  std::cout << "bound-relevant quotient order: " << (qb ? *qb : dg.delta.order()) << "\n"
            << "alpha: " << level_str(ab.alpha, ab.k) << "\n"
            << "beta: " << level_str(ab.beta, ab.k)
            << (ab.beta ? "" : " [conjugate at working precision]")
            << (!ab.beta || *ab.beta > 0 ? "" : " [residual representations not conjugate]")
            << "\n";

  if (ab.beta && *ab.beta >= 1 && ab.conjugator) {
    const deviation::PhiImage phi = deviation::phi_map(rp, ab);
    std::cout << "|phi(G)|: " << phi.image.order()
              << (phi.equal_determinants ? " (equal determinants, trace-zero offsets)" : "")
              << "\n";
  } else {
    std::cout << "|phi(G)|: -\n";
  }

  try {
    const deviation::DistinguishingClass dc = deviation::distinguishing_class(rp);
    const bool phi_home = dc.where == deviation::ClassHome::Phi;
    const size_t sz = phi_home ? dc.phi_class.size() : dc.delta_class.size();
    std::cout << "C: " << sz << " element(s) in the " << (phi_home ? "phi" : "delta")
              << " image, normalized at 2^" << dc.alpha << "\n";
  } catch (const deviation::TracesEqualError&) {
    std::cout << "C: undefined (traces equal at working precision)\n";
  }
  return 0;
}

struct GenCorpusOpts {
  std::string out_dir;
  size_t max_pairs = 10'000;
};

int run_deviation_gen_corpus(const GenCorpusOpts& o) {
  if (o.max_pairs == 0) throw UsageError("--max must be positive");
  std::filesystem::create_directories(o.out_dir);
  const std::vector<deviation::RepPair> corpus = deviation::generate_corpus(o.max_pairs);
  size_t idx = 0;
  for (const deviation::RepPair& rp : corpus) {
    std::ostringstream name;
    name << "pair_" << std::setw(4) << std::setfill('0') << idx++ << ".rp";
    const std::filesystem::path path = std::filesystem::path(o.out_dir) / name.str();
    std::ofstream of(path);
    if (!of) throw UsageError("cannot write " + path.string());
    deviation::write_rep_pair(of, rp);
  }
  std::cout << "wrote " << corpus.size() << " rep-pair files to " << o.out_dir << "\n";
  return 0;
}

struct VerifySuiteOpts {
  long cap = 0;
  bool json_out = false;
};

int run_verify_suite(const VerifySuiteOpts& o) {
  const std::vector<pipeline::CorpusPair>& corpus = pipeline::verification_corpus();
  json arr = json::array();
  size_t failures = 0;
  for (const pipeline::CorpusPair& cp : corpus) {
    const pipeline::BoundReport rep = pipeline::verify_pair(
        cp.first, cp.second, o.cap > 0 ? std::optional<long>(o.cap) : std::nullopt);
    const bool ok = rep.outcome == pipeline::VerifyOutcome::Verified;
    if (!ok) ++failures;
    if (o.json_out) {
      json j;
      j["curve1"] = display_label(cp.first);
      j["curve2"] = display_label(cp.second);
      j["case"] = pipeline::case_name(rep.pair_case.kind);
      j["rad"] = rep.rad2NN.get_str();
      j["bound"] = rep.bound.get_str();
      j["outcome"] = outcome_str(rep.outcome);
      if (rep.verified_prime) {
        j["prime"] = rep.verified_prime->p;
        j["ap1"] = rep.verified_prime->ap_E;
        j["ap2"] = rep.verified_prime->ap_Eprime;
      }
      arr.push_back(std::move(j));
    } else {
      std::cout << display_label(cp.first) << " x " << display_label(cp.second) << ": "
                << pipeline::case_name(rep.pair_case.kind) << ", rad " << rep.rad2NN
                << ", bound " << rep.bound;
      if (rep.verified_prime)
        std::cout << ", p = " << rep.verified_prime->p << " (a_p " << rep.verified_prime->ap_E
                  << " vs " << rep.verified_prime->ap_Eprime << ")";
      std::cout << " [" << (ok ? "ok" : outcome_str(rep.outcome)) << "]\n";
    }
  }
  if (o.json_out) {
    std::cout << arr.dump(2) << "\n";
  } else {
    std::cout << corpus.size() - failures << "/" << corpus.size() << " pairs verified\n";
  }
  return failures == 0 ? 0 : 1;
}

struct CurveApOpts {
  std::string curve, file, label;
  unsigned long p = 0;
  long cap = elliptic::kApCap;
};

int run_curve_ap(const CurveApOpts& o) {
  const elliptic::WeierstrassCurve E = resolve_curve(o.curve, o.file, o.label, 0);
  std::cout << "a_" << o.p << "(" << display_label(E) << ") = " << elliptic::ap(E, o.p, o.cap)
            << "\n";
  return 0;
}

struct CurveOpts {
  std::string curve, file, label;
};

int run_curve_radical(const CurveOpts& o) {
  std::vector<elliptic::WeierstrassCurve> curves;
  if (!o.curve.empty() || o.file.empty() || !o.label.empty())
    curves.push_back(resolve_curve(o.curve, o.file, o.label, 0));
  else
    curves = read_curve_file(o.file);
  for (const auto& E : curves)
    std::cout << display_label(E) << " " << elliptic::bad_primes_radical(E) << "\n";
  return 0;
}

int run_curve_mod2(const CurveOpts& o) {
  const elliptic::WeierstrassCurve E = resolve_curve(o.curve, o.file, o.label, 0);
  const elliptic::Mod2Class cls = elliptic::mod2_image_class(E);
  const char* name = "Trivial";
  switch (cls.image) {
    case elliptic::Mod2Image::Trivial: name = "Trivial"; break;
    case elliptic::Mod2Image::OrderTwo: name = "OrderTwo"; break;
    case elliptic::Mod2Image::OrderThree: name = "OrderThree"; break;
    case elliptic::Mod2Image::Full: name = "Full"; break;
  }
  const elliptic::CmFiniteJFlags flags = elliptic::cm_and_finite_j_check(E);
  std::cout << "mod-2 image: " << name << "\n"
            << "absolutely irreducible: " << (cls.absolutely_irreducible ? "yes" : "no") << "\n"
            << "cubic discriminant is a square: " << (cls.cubic_disc_is_square ? "yes" : "no")
            << "\n"
            << "CM j-invariant: " << (flags.is_cm_j ? "yes" : "no") << "\n"
            << "finite 2-adic j-class: " << (flags.in_rzb_finite_list ? "yes" : "no") << "\n";
  return 0;
}

struct CurveTwistOpts {
  std::string curve1, curve2, file, label1, label2;
  long d = 0;
};

int run_curve_twist(const CurveTwistOpts& o) {
  const elliptic::WeierstrassCurve E = resolve_curve(o.curve1, o.file, o.label1, 0);
  if (o.d != 0) {
    elliptic::WeierstrassCurve T = elliptic::quadratic_twist(E, mpz_class(o.d));
    std::cout << short_model(T) << "\n";
    return 0;
  }
  if (o.curve2.empty() && o.label2.empty() && o.file.empty())
    throw UsageError("pass --curve2 (twist detection) or -d (twist construction)");
  const elliptic::WeierstrassCurve Ep = resolve_curve(o.curve2, o.file, o.label2, 1);
  const elliptic::TwistCheck tc = elliptic::is_quadratic_twist(E, Ep);
  switch (tc.decision) {
    case elliptic::TwistDecision::Twist:
      std::cout << "quadratic twist by d = " << tc.d << "\n";
      break;
    case elliptic::TwistDecision::NotTwist:
      std::cout << "not quadratic twists\n";
      break;
    case elliptic::TwistDecision::Inconclusive:
      std::cout << "inconclusive\n";
      break;
  }
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"isogeny-distinguishing prime bounds, deviation groups of 2-adic "
               "representation pairs, and finite-group utilities"};
  app.require_subcommand(1);
  int rc = 0;

  auto ib = std::make_shared<IsogenyBoundOpts>();
  {
    CLI::App* sub = app.add_subcommand(
        "isogeny-bound", "case-classified bound on the least trace-distinguishing prime");
    ib->pair.add_to(sub);
    sub->add_flag("--verify", ib->verify, "search for a distinguishing prime within the bound");
    sub->add_option("--cap", ib->cap, "search cap for --verify");
    sub->add_option("--delta", ib->delta,
                    "known deviation-group order (enables the collapsed-table refinement)");
    sub->add_flag("--json", ib->json_out, "machine-readable output");
    sub->callback([&rc, ib] { rc = run_isogeny_bound(*ib); });
  }

  auto sb = std::make_shared<SerreBoundOpts>();
  {
    CLI::App* sub =
        app.add_subcommand("serre-bound", "adelic index bounds for a single non-CM curve");
    sub->add_option("--curve", sb->curve, "curve as \"a1 a2 a3 a4 a6\"");
    sub->add_option("--file", sb->file, "curve file");
    sub->add_option("--label", sb->label, "label in --file");
    sub->add_flag("--json", sb->json_out, "machine-readable output");
    sub->callback([&rc, sb] { rc = run_serre_bound(*sb); });
  }

  auto di = std::make_shared<DistinguishOpts>();
  {
    CLI::App* sub = app.add_subcommand(
        "distinguish", "search for the least prime with differing traces (no bound)");
    di->pair.add_to(sub);
    sub->add_option("--cap", di->cap, "search cap (default 10000)");
    sub->add_flag("--json", di->json_out, "machine-readable output");
    sub->callback([&rc, di] { rc = run_distinguish(*di); });
  }

  auto co = std::make_shared<CollapseOpts>();
  {
    CLI::App* sub = app.add_subcommand(
        "collapse", "collapse a degree/log-discriminant bound table to one column per degree");
    sub->add_option("--table", co->table, "CSV table: n_min,n_max,logd_min,logd_max,a,b,c[,p0]")
        ->required();
    sub->add_flag("--strict-max", co->strict_max,
                  "per-component maximum convention instead of the printed convention");
    sub->add_option("--out", co->out, "write the collapsed CSV here instead of stdout");
    sub->callback([&rc, co] { rc = run_collapse(*co); });
  }

  {
    CLI::App* grp = app.add_subcommand("group", "finite-group utilities");
    grp->require_subcommand(1);

    auto gclose = std::make_shared<GroupFileOpts>();
    CLI::App* c1 = grp->add_subcommand("close", "close generators and report the order");
    c1->add_option("--file", gclose->file, "group file")->required();
    c1->callback([&rc, gclose] { rc = run_group_close(*gclose); });

    auto gclasses = std::make_shared<GroupFileOpts>();
    CLI::App* c2 = grp->add_subcommand("classes", "conjugacy classes");
    c2->add_option("--file", gclasses->file, "group file")->required();
    c2->callback([&rc, gclasses] { rc = run_group_classes(*gclasses); });

    auto gnormals = std::make_shared<GroupFileOpts>();
    CLI::App* c3 = grp->add_subcommand("normals", "normal subgroups");
    c3->add_option("--file", gnormals->file, "group file")->required();
    c3->callback([&rc, gnormals] { rc = run_group_normals(*gnormals); });

    auto gq = std::make_shared<QuotientCheckOpts>();
    CLI::App* c4 = grp->add_subcommand("quotient-check",
                                       "quotients with an element of large order");
    c4->add_option("--file", gq->file, "group file")->required();
    c4->add_option("--order-gt", gq->order_gt, "element-order threshold (default 3)");
    c4->add_flag("--proper", gq->proper, "proper quotients only");
    c4->callback([&rc, gq] { rc = run_group_quotient_check(*gq); });

    auto gh = std::make_shared<TwoGroupOpts>();
    CLI::App* c5 = grp->add_subcommand("hom", "does a homomorphism exist");
    c5->add_option("--from", gh->from, "source group file")->required();
    c5->add_option("--to", gh->to, "target group file")->required();
    c5->add_flag("--surjective", gh->surjective, "require surjectivity");
    c5->callback([&rc, gh] { rc = run_group_hom(*gh); });

    auto gi = std::make_shared<TwoGroupOpts>();
    CLI::App* c6 = grp->add_subcommand("iso", "isomorphism test");
    c6->add_option("--from", gi->from, "first group file")->required();
    c6->add_option("--to", gi->to, "second group file")->required();
    c6->callback([&rc, gi] { rc = run_group_iso(*gi); });

    auto ga = std::make_shared<GroupFileOpts>();
    CLI::App* c7 = grp->add_subcommand(
        "audit", "recompute problematic flags for labeled tables and diff the published list");
    c7->add_option("--file", ga->file, "labeled multiplication tables")->required();
    c7->callback([&rc, ga] { rc = run_group_audit(*ga); });
  }

  {
    CLI::App* dev = app.add_subcommand("deviation", "deviation groups of representation pairs");
    dev->require_subcommand(1);

    auto da = std::make_shared<DeviationAnalyzeOpts>();
    CLI::App* c1 = dev->add_subcommand("analyze",
                                       "module rank, delta group, alpha/beta, phi image");
    c1->add_option("--reps", da->reps, "rep-pair file")->required();
    c1->add_option("--table", da->table, "optional multiplication table to cross-check");
    c1->callback([&rc, da] { rc = run_deviation_analyze(*da); });

    auto dg = std::make_shared<GenCorpusOpts>();
    CLI::App* c2 = dev->add_subcommand("gen-corpus", "write the built-in rep-pair corpus");
    c2->add_option("--out", dg->out_dir, "output directory")->required();
    c2->add_option("--max", dg->max_pairs, "cap on the number of pairs");
    c2->callback([&rc, dg] { rc = run_deviation_gen_corpus(*dg); });
  }

  auto vs = std::make_shared<VerifySuiteOpts>();
  {
    CLI::App* sub = app.add_subcommand(
        "verify-suite", "run the built-in curve-pair corpus through the full pipeline");
    sub->add_option("--cap", vs->cap, "override the per-pair search cap");
    sub->add_flag("--json", vs->json_out, "machine-readable output");
    sub->callback([&rc, vs] { rc = run_verify_suite(*vs); });
  }

  {
    CLI::App* cur = app.add_subcommand("curve", "single-curve utilities");
    cur->require_subcommand(1);

    auto ca = std::make_shared<CurveApOpts>();
    CLI::App* c1 = cur->add_subcommand("ap", "trace of Frobenius at p");
    c1->add_option("--curve", ca->curve, "curve as \"a1 a2 a3 a4 a6\"");
    c1->add_option("--file", ca->file, "curve file");
    c1->add_option("--label", ca->label, "label in --file");
    c1->add_option("-p,--prime", ca->p, "prime p")->required();
    c1->add_option("--cap", ca->cap, "largest admissible p");
    c1->callback([&rc, ca] { rc = run_curve_ap(*ca); });

    auto cr = std::make_shared<CurveOpts>();
    CLI::App* c2 = cur->add_subcommand("radical", "product of bad-reduction primes");
    c2->add_option("--curve", cr->curve, "curve as \"a1 a2 a3 a4 a6\"");
    c2->add_option("--file", cr->file, "curve file (all curves when no --label)");
    c2->add_option("--label", cr->label, "label in --file");
    c2->callback([&rc, cr] { rc = run_curve_radical(*cr); });

    auto cm = std::make_shared<CurveOpts>();
    CLI::App* c3 = cur->add_subcommand("mod2", "mod-2 image classification");
    c3->add_option("--curve", cm->curve, "curve as \"a1 a2 a3 a4 a6\"");
    c3->add_option("--file", cm->file, "curve file");
    c3->add_option("--label", cm->label, "label in --file");
    c3->callback([&rc, cm] { rc = run_curve_mod2(*cm); });

    auto ct = std::make_shared<CurveTwistOpts>();
    CLI::App* c4 = cur->add_subcommand("twist", "detect a quadratic twist or construct one");
    c4->add_option("--curve1,--curve", ct->curve1, "curve as \"a1 a2 a3 a4 a6\"");
    c4->add_option("--curve2", ct->curve2, "second curve (detection mode)");
    c4->add_option("--file", ct->file, "curve file");
    c4->add_option("--label1", ct->label1, "label in --file");
    c4->add_option("--label2", ct->label2, "second label in --file");
    c4->add_option("-d", ct->d, "squarefree twisting integer (construction mode)");
    c4->callback([&rc, ct] { rc = run_curve_twist(*ct); });

    auto cd = std::make_shared<DistinguishOpts>();
    CLI::App* c5 = cur->add_subcommand("distinguish", "least prime with differing traces");
    cd->pair.add_to(c5);
    c5->add_option("--cap", cd->cap, "search cap (default 10000)");
    c5->add_flag("--json", cd->json_out, "machine-readable output");
    c5->callback([&rc, cd] { rc = run_distinguish(*cd); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}

}  // namespace isobound
