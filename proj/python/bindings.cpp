#include "ergolab/errors.hpp"
#include "ergolab/experiment.hpp"
#include "ergolab/serialize.hpp"

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace ergolab;

namespace {

// int, str ("a/b" or decimal), fractions.Fraction, or float (taken exactly).
Rational to_rational(const py::object& x) {
  if (py::isinstance<py::float_>(x)) return rational_from_double(x.cast<double>());
  return parse_rational(py::str(x).cast<std::string>());
}

py::object to_fraction(const Rational& q) {
  static py::object fraction = py::module_::import("fractions").attr("Fraction");
  return fraction(py::int_(py::str(boost::multiprecision::numerator(q).str())),
                  py::int_(py::str(boost::multiprecision::denominator(q).str())));
}

py::object json_to_py(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

Json py_to_json(const py::object& o) {
  return Json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

GroupElement element_of(const Group& g, const std::vector<std::int64_t>& coords) { return g.element(coords); }

std::vector<std::vector<std::int64_t>> tuples(const ElementSet& set) {
  std::vector<std::vector<std::int64_t>> out;
  out.reserve(set.size());
  for (const auto& g : set) out.emplace_back(g.view().begin(), g.view().end());
  return out;
}

}  // namespace

PYBIND11_MODULE(_ergolab, m) {
  m.doc() = "Quantitative mean ergodic theory for discrete amenable groups";

  py::register_exception<StructuralError>(m, "StructuralError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<OverflowError>(m, "OverflowError", PyExc_OverflowError);
  py::register_exception<ModulusNotFound>(m, "ModulusNotFound", PyExc_RuntimeError);
  py::register_exception<BudgetExhausted>(m, "BudgetExhausted", PyExc_RuntimeError);
  py::register_exception<RefinementExhausted>(m, "RefinementExhausted", PyExc_RuntimeError);
  py::register_exception<UncertifiedWindow>(m, "UncertifiedWindow", PyExc_RuntimeError);

  py::class_<GroupElement>(m, "GroupElement")
      .def_property_readonly("coords", [](const GroupElement& g) {
        return std::vector<std::int64_t>(g.view().begin(), g.view().end());
      })
      .def("__eq__", [](const GroupElement& a, const GroupElement& b) { return a == b; })
      .def("__hash__", [](const GroupElement& g) { return GroupElementHash{}(g); })
      .def("__repr__", [](const GroupElement& g) {
        std::string s = "GroupElement(";
        for (std::size_t i = 0; i < g.view().size(); ++i) s += (i ? ", " : "") + std::to_string(g.view()[i]);
        return s + ")";
      });

  py::class_<Group>(m, "Group")
      .def_static("from_name", &Group::from_name)
      .def_property_readonly("name", &Group::name)
      .def_property_readonly("rank", &Group::rank)
      .def("identity", &Group::identity)
      .def("element", &element_of)
      .def("multiply", &Group::multiply)
      .def("inverse", &Group::inverse)
      .def("generators", &Group::generators)
      .def("enumerate", &Group::enumerate_prefix, py::arg("count"))
      .def("box", [](const Group& g, std::int64_t r) { return tuples(g.box(r)); })
      .def("box_size", &Group::box_size);

  py::class_<FolnerFamily>(m, "FolnerFamily")
      .def_static("standard", &FolnerFamily::standard, py::arg("group"), py::arg("n_max"))
      .def_static(
          "greedy",
          [](const Group& g, std::int64_t n_max, std::int64_t budget) { return greedy_folner(g, n_max, budget); },
          py::arg("group"), py::arg("n_max"), py::arg("budget") = 1'000'000)
      .def_property_readonly("length", &FolnerFamily::length)
      .def_property_readonly("provenance", [](const FolnerFamily& f) { return to_string(f.provenance()); })
      .def("size", &FolnerFamily::size)
      .def("elements", [](const FolnerFamily& f, std::int64_t n) { return tuples(f.elements(n)); })
      .def("to_json", [](const FolnerFamily& f) { return json_to_py(family_to_json(f)); });

  m.def(
      "folner_ratio",
      [](const FolnerFamily& f, std::int64_t n, const GroupElement& g) { return to_fraction(folner_ratio(f, n, g)); },
      py::arg("family"), py::arg("n"), py::arg("g"));
  m.def(
      "convergence_modulus",
      [](const FolnerFamily& f, std::int64_t n, const py::object& eps, std::int64_t m_max) {
        return convergence_modulus(f, n, to_rational(eps), m_max).beta;
      },
      py::arg("family"), py::arg("n"), py::arg("eps"), py::arg("m_max"));
  m.def(
      "modulus_table",
      [](const FolnerFamily& f, const py::object& eps, std::int64_t n_hi, std::int64_t m_max) {
        return json_to_py(modulus_table_to_json(modulus_table(f, to_rational(eps), n_hi, m_max), "python"));
      },
      py::arg("family"), py::arg("eps"), py::arg("n_hi"), py::arg("m_max"));
  m.def(
      "check_fast",
      [](const FolnerFamily& f, std::int64_t lambda, const py::object& eps, std::int64_t window) {
        return check_fast(f, lambda, to_rational(eps), window).pass;
      },
      py::arg("family"), py::arg("lambda_"), py::arg("eps"), py::arg("window"));
  m.def(
      "fast_refinement",
      [](const FolnerFamily& f, const py::object& eps, std::optional<std::int64_t> max_terms) {
        auto r = fast_refinement(f, to_rational(eps), max_terms);
        return py::make_tuple(std::move(r.family), r.source_index);
      },
      py::arg("family"), py::arg("eps"), py::arg("max_terms") = py::none());

  m.def("hanner_u", &hanner_u, py::arg("p"), py::arg("eps"));
  m.def("p_uniform_u", &p_uniform_u, py::arg("K"), py::arg("p"), py::arg("eps"));
  m.def("lp_small_p_u", &lp_small_p_u, py::arg("p"), py::arg("eps"));
  m.def("u_from_delta", &u_from_delta, py::arg("delta"), py::arg("eps"));

  py::class_<ConvexityModulus>(m, "ConvexityModulus")
      .def_static("hanner", &ConvexityModulus::hanner)
      .def_static("p_uniform", &ConvexityModulus::p_uniform, py::arg("K"), py::arg("p"))
      .def_static("small_p", &ConvexityModulus::small_p)
      .def_static("for_lp", &ConvexityModulus::for_lp)
      .def_static("from_delta", &ConvexityModulus::from_delta, py::arg("delta"), py::arg("label") = "from-delta")
      .def_property_readonly("name", &ConvexityModulus::name)
      .def("__call__", &ConvexityModulus::operator());

  py::class_<FiniteMeasureSystem>(m, "System")
      .def_static(
          "from_json",
          [](const Group& g, const py::object& spec) { return system_from_spec(g, py_to_json(spec)); },
          py::arg("group"), py::arg("spec"))
      .def_property_readonly("group", &FiniteMeasureSystem::group)
      .def_property_readonly("size", &FiniteMeasureSystem::size)
      .def("act", &FiniteMeasureSystem::act)
      .def("ergodic", &FiniteMeasureSystem::ergodic);
  m.def("rotation_system", &rotation_system);
  m.def("torus_translation_system", &torus_translation_system);
  m.def("heisenberg_abelianized_system", &heisenberg_abelianized_system);
  m.def("heisenberg_mod_system", &heisenberg_mod_system);

  auto observable = [](std::vector<double> values, double p) { return Observable{std::move(values), p}; };
  m.def(
      "lp_norm",
      [observable](const FiniteMeasureSystem& s, std::vector<double> f, double p) {
        return lp_norm(s, observable(std::move(f), p));
      },
      py::arg("system"), py::arg("f"), py::arg("p") = 2.0);
  m.def(
      "koopman_apply",
      [observable](const FiniteMeasureSystem& s, const GroupElement& g, std::vector<double> f) {
        return koopman_apply(s, g, observable(std::move(f), 2.0)).values;
      },
      py::arg("system"), py::arg("g"), py::arg("f"));
  m.def(
      "ergodic_average",
      [observable](const FiniteMeasureSystem& s, const FolnerFamily& fam, std::int64_t n, std::vector<double> f) {
        return ergodic_average(s, fam, n, observable(std::move(f), 2.0)).values;
      },
      py::arg("system"), py::arg("family"), py::arg("n"), py::arg("f"));
  m.def(
      "average_defect",
      [observable](const FiniteMeasureSystem& s, const FolnerFamily& fam, std::int64_t N, std::int64_t K,
                   std::vector<double> f, double p) { return average_defect(s, fam, N, K, observable(std::move(f), p)); },
      py::arg("system"), py::arg("family"), py::arg("N"), py::arg("K"), py::arg("f"), py::arg("p") = 2.0);

  m.def(
      "max_chain",
      [](const std::vector<double>& values, double eps, std::optional<std::int64_t> gap) {
        IndexMap beta;
        if (gap) beta = [g = *gap](std::int64_t n) { return n + g; };
        return max_chain(DistanceTable::from_reals(values), eps, beta).indices;
      },
      py::arg("values"), py::arg("eps"), py::arg("gap") = py::none());
  m.def(
      "fluctuation_count",
      [](const std::vector<double>& values, double eps, std::optional<std::int64_t> gap) {
        IndexMap beta;
        if (gap) beta = [g = *gap](std::int64_t n) { return n + g; };
        return max_chain(DistanceTable::from_reals(values), eps, beta).count();
      },
      py::arg("values"), py::arg("eps"), py::arg("gap") = py::none());
  m.def("theorem_bound",
        py::overload_cast<const ConvexityModulus&, double, double, double, std::optional<double>>(&theorem_bound),
        py::arg("modulus"), py::arg("norm"), py::arg("eps"), py::arg("eta"), py::arg("lower") = py::none());
  m.def("corollary_bound", &corollary_bound, py::arg("modulus"), py::arg("norm"), py::arg("eps"), py::arg("eta"),
        py::arg("lambda_"), py::arg("lower") = py::none());
  m.def(
      "verify_main_theorem",
      [observable](const FiniteMeasureSystem& s, const FolnerFamily& fam, const ConvexityModulus& u,
                   std::vector<double> f, double p, double eps, std::optional<double> eta, std::int64_t window) {
        VerifyOptions opt;
        opt.eta = eta;
        opt.window = window;
        return json_to_py(report_to_json(verify_main_theorem(s, fam, u, observable(std::move(f), p), eps, opt)));
      },
      py::arg("system"), py::arg("family"), py::arg("modulus"), py::arg("f"), py::arg("p") = 2.0, py::arg("eps"),
      py::arg("eta") = py::none(), py::arg("window") = 60);

  m.def(
      "run_experiment",
      [](const py::object& config) {
        const auto result = run_experiment(config_from_json(py_to_json(config)));
        py::dict out;
        out["exit_code"] = result.exit_code;
        out["averages_csv"] = result.averages_csv;
        out["report"] = json_to_py(result.report);
        out["modulus"] = json_to_py(result.modulus);
        return out;
      },
      py::arg("config"));
}
