// Python bindings for the main operations: curves and their invariants, the
// pair classifier and bound formulas, the verification pipeline, and rep-pair
// deviation analysis. Big integers cross the boundary as exact Python ints.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "isobound/chebotarev.hpp"
#include "isobound/deviation.hpp"
#include "isobound/elliptic.hpp"
#include "isobound/groups.hpp"
#include "isobound/pipeline.hpp"

namespace py = pybind11;
using isobound::elliptic::WeierstrassCurve;
namespace ell = isobound::elliptic;
namespace pl = isobound::pipeline;
namespace dev = isobound::deviation;
namespace cheb = isobound::cheb;

namespace {

mpz_class mpz_from_py(py::handle h) {
  return mpz_class(py::str(h).cast<std::string>());
}

py::object pyint(const mpz_class& z) {
  PyObject* p = PyLong_FromString(z.get_str().c_str(), nullptr, 10);
  if (!p) throw py::error_already_set();
  return py::reinterpret_steal<py::object>(p);
}

const char* mod2_image_name(ell::Mod2Image im) {
  switch (im) {
    case ell::Mod2Image::Trivial: return "Trivial";
    case ell::Mod2Image::OrderTwo: return "OrderTwo";
    case ell::Mod2Image::OrderThree: return "OrderThree";
    case ell::Mod2Image::Full: return "Full";
  }
  return "?";
}

WeierstrassCurve make_curve(py::sequence coeffs, const std::string& label) {
  if (py::len(coeffs) != 5)
    throw py::value_error("expected five coefficients [a1, a2, a3, a4, a6]");
  WeierstrassCurve E{mpz_from_py(coeffs[0]), mpz_from_py(coeffs[1]), mpz_from_py(coeffs[2]),
                     mpz_from_py(coeffs[3]), mpz_from_py(coeffs[4]), label, std::nullopt};
  ell::invariants(E);  // reject singular models at construction
  return E;
}

py::dict report_to_dict(const pl::BoundReport& rep, bool with_outcome) {
  py::dict d;
  d["case"] = pl::case_name(rep.pair_case.kind);
  d["evidence"] = rep.pair_case.evidence;
  d["rad"] = pyint(rep.rad2NN);
  d["bound"] = pyint(rep.bound);
  d["formula"] = rep.formula_id;
  if (with_outcome) {
    const char* o = "BoundOnly";
    switch (rep.outcome) {
      case pl::VerifyOutcome::BoundOnly: o = "BoundOnly"; break;
      case pl::VerifyOutcome::Verified: o = "Verified"; break;
      case pl::VerifyOutcome::Falsified: o = "Falsified"; break;
      case pl::VerifyOutcome::IsogenousOrIndistinguishable:
        o = "IsogenousOrIndistinguishable";
        break;
    }
    d["outcome"] = o;
  }
  if (rep.verified_prime) {
    d["prime"] = rep.verified_prime->p;
    d["ap1"] = rep.verified_prime->ap_E;
    d["ap2"] = rep.verified_prime->ap_Eprime;
  }
  return d;
}

pl::PairCase case_from_name(const std::string& name) {
  for (pl::PairCase::Kind k : {pl::PairCase::Mod2Distinct, pl::PairCase::Mod2IsoAbsIrred,
                               pl::PairCase::QuadraticTwistNonCM, pl::PairCase::Generic})
    if (name == pl::case_name(k)) return {k, "named case"};
  throw py::value_error("unknown case name: " + name);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "isogeny-distinguishing prime bounds and 2-adic deviation groups";

  py::class_<WeierstrassCurve>(m, "Curve")
      .def(py::init(&make_curve), py::arg("coefficients"), py::arg("label") = "")
      .def_readonly("label", &WeierstrassCurve::label)
      .def_property_readonly("coefficients",
                             [](const WeierstrassCurve& E) {
                               return py::make_tuple(pyint(E.a1), pyint(E.a2), pyint(E.a3),
                                                     pyint(E.a4), pyint(E.a6));
                             })
      .def("ap", [](const WeierstrassCurve& E, unsigned long p,
                    long cap) { return ell::ap(E, p, cap); },
           py::arg("p"), py::arg("cap") = ell::kApCap)
      .def("radical",
           [](const WeierstrassCurve& E) { return pyint(ell::bad_primes_radical(E)); })
      .def("j_invariant",
           [](const WeierstrassCurve& E) {
             const mpq_class j = ell::invariants(E).j;
             return py::make_tuple(pyint(j.get_num()), pyint(j.get_den()));
           })
      .def("mod2_image",
           [](const WeierstrassCurve& E) {
             const ell::Mod2Class c = ell::mod2_image_class(E);
             py::dict d;
             d["image"] = mod2_image_name(c.image);
             d["absolutely_irreducible"] = c.absolutely_irreducible;
             d["cubic_disc_is_square"] = c.cubic_disc_is_square;
             return d;
           })
      .def("is_cm", [](const WeierstrassCurve& E) { return ell::cm_and_finite_j_check(E).is_cm_j; })
      .def("good_reduction_at", [](const WeierstrassCurve& E,
                                   unsigned long p) { return ell::good_reduction_at(E, p); },
           py::arg("p"))
      .def("__repr__", [](const WeierstrassCurve& E) {
        std::ostringstream os;
        os << "Curve([" << E.a1 << ", " << E.a2 << ", " << E.a3 << ", " << E.a4 << ", " << E.a6
           << "]" << (E.label.empty() ? "" : ", label='" + E.label + "'") << ")";
        return os.str();
      });

  m.def("quadratic_twist",
        [](const WeierstrassCurve& E, py::int_ d, const std::string& label) {
          WeierstrassCurve T = ell::quadratic_twist(E, mpz_from_py(d));
          if (!label.empty()) T.label = label;
          return T;
        },
        py::arg("curve"), py::arg("d"), py::arg("label") = "");

  m.def("mod2_isomorphic",
        [](const WeierstrassCurve& E, const WeierstrassCurve& Ep, unsigned long prime_cap) {
          switch (ell::mod2_isomorphic(E, Ep, prime_cap)) {
            case ell::Mod2IsoGrade::Isomorphic: return "Isomorphic";
            case ell::Mod2IsoGrade::NotIsomorphic: return "NotIsomorphic";
            case ell::Mod2IsoGrade::HeuristicIsomorphic: return "HeuristicIsomorphic";
          }
          return "?";
        },
        py::arg("curve1"), py::arg("curve2"), py::arg("prime_cap") = 1000);

  m.def("distinguishing_prime",
        [](const WeierstrassCurve& E, const WeierstrassCurve& Ep, long cap) -> py::object {
          const std::optional<ell::TraceRecord> r = ell::distinguishing_prime(E, Ep, cap);
          if (!r) return py::none();
          return py::make_tuple(r->p, r->ap_E, r->ap_Eprime);
        },
        py::arg("curve1"), py::arg("curve2"), py::arg("cap") = 10'000);

  m.def("classify_pair",
        [](const WeierstrassCurve& E, const WeierstrassCurve& Ep, unsigned long prime_cap) {
          const pl::PairCase pc = pl::classify_pair(E, Ep, prime_cap);
          py::dict d;
          d["case"] = pl::case_name(pc.kind);
          d["evidence"] = pc.evidence;
          return d;
        },
        py::arg("curve1"), py::arg("curve2"), py::arg("prime_cap") = 1000);

  m.def("isogeny_bound",
        [](const WeierstrassCurve& E, const WeierstrassCurve& Ep, bool verify,
           std::optional<long> cap, std::optional<long> delta_order) {
          if (verify) return report_to_dict(pl::verify_pair(E, Ep, cap), true);
          const mpz_class rad = pl::even_pair_radical(ell::bad_primes_radical(E),
                                                      ell::bad_primes_radical(Ep));
          return report_to_dict(pl::isogeny_bound(pl::classify_pair(E, Ep), rad, delta_order),
                                false);
        },
        py::arg("curve1"), py::arg("curve2"), py::arg("verify") = false,
        py::arg("cap") = py::none(), py::arg("delta_order") = py::none());

  m.def("bound_for_case",
        [](const std::string& case_name, py::int_ rad2NN, std::optional<long> delta_order) {
          const pl::BoundReport rep =
              pl::isogeny_bound(case_from_name(case_name), mpz_from_py(rad2NN), delta_order);
          py::dict d;
          d["bound"] = pyint(rep.bound);
          d["formula"] = rep.formula_id;
          return d;
        },
        py::arg("case"), py::arg("rad2NN"), py::arg("delta_order") = py::none());

  m.def("serre_bound", [](const WeierstrassCurve& E) {
    const pl::SerreReport rep = pl::serre_bound(E);
    py::dict d;
    d["rad"] = pyint(rep.rad2N);
    d["improved"] = pyint(rep.c_e_bound_improved);
    d["mw"] = pyint(rep.c_e_bound_mw);
    d["finite_j_shortcut"] = rep.finite_j_shortcut;
    return d;
  });

  m.def("collapsed_bound",
        [](int n_upper, py::int_ rad2NN) {
          return pyint(cheb::collapsed_bound(n_upper, mpz_from_py(rad2NN), cheb::builtin_table()));
        },
        py::arg("n_upper"), py::arg("rad2NN"));

  m.def("verify_suite", [](std::optional<long> cap) {
    py::list out;
    for (const pl::CorpusPair& cp : pl::verification_corpus()) {
      py::dict d = report_to_dict(pl::verify_pair(cp.first, cp.second, cap), true);
      d["curve1"] = cp.first.label;
      d["curve2"] = cp.second.label;
      out.append(std::move(d));
    }
    return out;
  }, py::arg("cap") = py::none());

  m.def("analyze_rep_pair", [](const std::string& path) {
    std::ifstream in(path);
    if (!in) throw py::value_error("cannot open rep-pair file: " + path);
    const dev::RepPair rp = dev::parse_rep_pair(in);
    const dev::ModuleBasis mb = dev::algebra_closure(rp);
    const dev::DeviationGroup dg = dev::deviation_group(rp);
    const dev::AlphaBeta ab = dev::compute_beta(rp);
    py::dict d;
    d["modulus_exponent"] = rp.k;
    d["group_order"] = rp.G.order();
    d["module_rank"] = mb.rank();
    d["delta_order"] = dg.delta.order();
    d["alpha"] = ab.alpha ? py::cast(*ab.alpha) : py::none();
    d["beta"] = ab.beta ? py::cast(*ab.beta) : py::none();
    if (ab.beta && *ab.beta >= 1 && ab.conjugator)
      d["phi_order"] = dev::phi_map(rp, ab).image.order();
    else
      d["phi_order"] = py::none();
    return d;
  }, py::arg("path"));

  m.attr("AP_CAP") = ell::kApCap;
  m.attr("__version__") = "0.1.0";
}
