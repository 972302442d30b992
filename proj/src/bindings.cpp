#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fames/engine.hpp"
#include "fames/fairness.hpp"
#include "fames/forgetting.hpp"
#include "fames/parser.hpp"
#include "fames/plan_search.hpp"

namespace py = pybind11;
using namespace fames;

namespace {

Theory theory_from_text(const std::string& text) {
  auto res = parse_theory(text);
  if (!res.ok()) throw py::value_error(format_diagnostics(res.diagnostics, "<theory>"));
  return *res.theory;
}

Theory theory_from_file(const std::string& path) {
  auto res = parse_theory_file(path);
  if (!res.ok()) throw py::value_error(format_diagnostics(res.diagnostics, path));
  return *res.theory;
}

Formula formula_arg(const Theory& th, const std::string& text) {
  auto res = parse_formula(text, th, {"x"});
  if (!res.ok()) throw py::value_error(format_diagnostics(res.diagnostics, "<formula>"));
  return *res.formula;
}

std::vector<ActionInstance> plan_arg(const Theory& th, const std::string& text) {
  auto res = parse_plan(text, th);
  if (!res.ok()) throw py::value_error(format_diagnostics(res.diagnostics, "<plan>"));
  return *res.plan;
}

std::vector<GroundAtom> atoms_arg(const Theory& th, const std::string& text) {
  auto res = parse_atom_list(text, th);
  if (!res.ok()) throw py::value_error(format_diagnostics(res.diagnostics, "<atoms>"));
  return *res.atoms;
}

py::dict world_dict(const WorldState& w) {
  py::dict d;
  for (const auto& [atom, val] : w.to_pairs()) d[py::str(atom)] = val;
  return d;
}

py::object diagnostics_obj(const std::optional<Diagnostics>& d) {
  if (!d) return py::none();
  py::dict out;
  out["counterexample_world"] =
      d->counterexample_world ? py::object(world_dict(*d->counterexample_world))
                              : py::object(py::none());
  py::list prefix;
  for (const auto& a : d->failing_prefix) prefix.append(a.str());
  out["failing_prefix"] = prefix;
  out["instantiations"] = d->instantiations;
  out["subformula_path"] = d->subformula_path;
  return out;
}

py::dict verdict_dict(const Verdict& v) {
  py::dict d;
  d["holds"] = v.holds;
  d["diagnostics"] = diagnostics_obj(v.diagnostics);
  d["warnings"] = v.warnings;
  d["note"] = v.note;
  return d;
}

py::dict fairness_dict(const FairnessVerdict& v) {
  py::dict d;
  d["notion"] = v.notion;
  d["holds"] = v.holds;
  d["failed_clause"] =
      v.failed_clause ? py::object(py::str(*v.failed_clause)) : py::object(py::none());
  d["diagnostics"] = diagnostics_obj(v.diagnostics);
  d["derived_theory"] =
      v.derived_theory ? py::object(py::str(*v.derived_theory)) : py::object(py::none());
  d["reading"] = v.reading ? py::object(py::str(*v.reading)) : py::object(py::none());
  d["warnings"] = v.warnings;
  return d;
}

FairnessQuery query_from_args(const Theory& th, const std::string& plan,
                              const std::string& goal, const std::string& protected_pred,
                              const std::optional<std::string>& criterion,
                              const std::optional<std::string>& property,
                              const std::optional<std::string>& individual,
                              const std::string& eo_reading) {
  FairnessQuery q;
  q.plan = plan_arg(th, plan);
  q.goal = formula_arg(th, goal);
  q.protected_pred = protected_pred;
  q.criterion = criterion;
  q.positive_property = property;
  q.individual = individual;
  q.eo_reading = eo_reading;
  return q;
}

}  // namespace

PYBIND11_MODULE(fames, m) {
  m.doc() = "fairness model checking for epistemic action theories";

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const MalformedFormulaError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const NotStaticError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  py::class_<Theory>(m, "Theory")
      .def_readonly("name", &Theory::name)
      .def_readonly("objects", &Theory::objects)
      .def("to_dsl", &Theory::to_dsl)
      .def("__repr__",
           [](const Theory& th) { return "<Theory '" + th.name + "'>"; });

  m.def("parse_theory", &theory_from_text, py::arg("text"),
        "Parse a theory from DSL text.");
  m.def("load_theory", &theory_from_file, py::arg("path"),
        "Parse a theory from a .fth file.");
  m.def("forget", [](const Theory& th, const std::string& atoms) {
    return forget_theory(th, atoms_arg(th, atoms));
  },
        py::arg("theory"), py::arg("atoms"),
        "Forget a ','-separated list of ground atoms from both initial formulas.");

  py::class_<Engine>(m, "Engine")
      .def(py::init([](const Theory& th, int atom_cap) {
             EngineOptions opt;
             opt.atom_cap = atom_cap;
             return Engine(th, opt);
           }),
           py::arg("theory"), py::arg("atom_cap") = 24)
      .def_property_readonly("theory", &Engine::theory)
      .def_property_readonly(
          "w0_count", [](const Engine& e) { return e.initial_worlds().size(); })
      .def_property_readonly(
          "e_count", [](const Engine& e) { return e.epistemic_worlds().size(); })
      .def_property_readonly("warnings",
                             [](const Engine& e) { return e.warnings(); })
      .def("atoms",
           [](const Engine& e) {
             std::vector<std::string> out;
             for (const auto& a : e.atoms()) out.push_back(a.str());
             return out;
           })
      .def("ground_actions",
           [](const Engine& e) {
             std::vector<std::string> out;
             for (const auto& a : e.ground_actions()) out.push_back(a.str());
             return out;
           })
      .def("initial_worlds",
           [](const Engine& e) {
             py::list out;
             for (const auto& w : e.initial_worlds()) out.append(world_dict(w));
             return out;
           })
      .def("epistemic_worlds",
           [](const Engine& e) {
             py::list out;
             for (const auto& w : e.epistemic_worlds()) out.append(world_dict(w));
             return out;
           })
      .def("entails",
           [](const Engine& e, const std::string& f) {
             return verdict_dict(e.entails(formula_arg(e.theory(), f)));
           },
           py::arg("formula"))
      .def("validity_bounded",
           [](const Engine& e, const std::string& f, int horizon) {
             return verdict_dict(e.validity_bounded(formula_arg(e.theory(), f), horizon));
           },
           py::arg("formula"), py::arg("horizon"))
      .def("compatible_count",
           [](const Engine& e, int w0_index, const std::string& plan) {
             const auto& w0 = e.initial_worlds();
             if (w0_index < 0 || w0_index >= static_cast<int>(w0.size()))
               throw py::value_error("world index out of range");
             return e.compatible_worlds(w0[w0_index], plan_arg(e.theory(), plan)).size();
           },
           py::arg("w0_index"), py::arg("plan"))
      .def("__repr__", [](const Engine& e) {
        return "<Engine '" + e.theory().name +
               "' |W0|=" + std::to_string(e.initial_worlds().size()) +
               " |E|=" + std::to_string(e.epistemic_worlds().size()) + ">";
      });

  m.def("check",
        [](const Engine& eng, const std::string& notion, const std::string& plan,
           const std::string& goal, const std::string& protected_pred,
           const std::optional<std::string>& criterion,
           const std::optional<std::string>& property,
           const std::optional<std::string>& individual, const std::string& eo_reading) {
          FairnessQuery q = query_from_args(eng.theory(), plan, goal, protected_pred,
                                            criterion, property, individual, eo_reading);
          return fairness_dict(run_check(eng, notion, q));
        },
        py::arg("engine"), py::arg("notion"), py::arg("plan") = "",
        py::arg("goal") = "true", py::arg("protected") = "",
        py::arg("criterion") = std::nullopt, py::arg("property") = std::nullopt,
        py::arg("individual") = std::nullopt, py::arg("eo_reading") = "conditioned",
        "Run a fairness checker and return its verdict as a dict.");

  m.def("find_plans",
        [](const Engine& eng, const std::string& notion, int horizon,
           const std::string& goal, const std::string& protected_pred,
           const std::optional<std::string>& criterion,
           const std::optional<std::string>& property,
           const std::optional<std::string>& individual, const std::string& eo_reading,
           int max_results, const std::vector<std::string>& action_filter) {
          SearchConfig cfg;
          cfg.horizon = horizon;
          cfg.notion = notion;
          cfg.max_results = max_results;
          cfg.action_filter = action_filter;
          cfg.query = query_from_args(eng.theory(), "", goal, protected_pred, criterion,
                                      property, individual, eo_reading);
          py::list out;
          for (const auto& [plan, verdict] : find_plans(eng, cfg)) {
            std::vector<std::string> steps;
            for (const auto& a : plan) steps.push_back(a.str());
            out.append(py::make_tuple(steps, fairness_dict(verdict)));
          }
          return out;
        },
        py::arg("engine"), py::arg("notion"), py::arg("horizon"),
        py::arg("goal") = "true", py::arg("protected") = "",
        py::arg("criterion") = std::nullopt, py::arg("property") = std::nullopt,
        py::arg("individual") = std::nullopt, py::arg("eo_reading") = "conditioned",
        py::arg("max_results") = 1,
        py::arg("action_filter") = std::vector<std::string>{},
        "Enumerate plans implementing a notion, shortest first.");

  m.def("proxy_set",
        [](const Engine& eng, const std::string& protected_pred) {
          std::vector<std::string> out;
          for (const auto& pd : proxy_set(eng, protected_pred)) out.push_back(pd.name);
          return out;
        },
        py::arg("engine"), py::arg("protected"));

  m.def("notions", [] { return fairness_notions(); });
  m.attr("__version__") = "0.1.0";
}
