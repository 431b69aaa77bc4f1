#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>
#include <string>
#include <vector>

#include "morphdecomp/decomposition.hpp"
#include "morphdecomp/errors.hpp"
#include "morphdecomp/experiments.hpp"
#include "morphdecomp/io.hpp"
#include "morphdecomp/probcore.hpp"
#include "morphdecomp/sensorimotor.hpp"

namespace py = pybind11;
using namespace morphdecomp;

namespace {

AxisSet to_set(const std::vector<Axis>& axes) {
  AxisSet s;
  for (Axis a : axes) s = s | AxisSet(a);
  return s;
}

std::string repr_pmf(const Pmf3& P) {
  std::ostringstream os;
  os.precision(17);
  os << "Pmf3([";
  for (std::size_t i = 0; i < Pmf3::kCells; ++i) os << (i ? ", " : "") << P.cell(i);
  os << "])";
  return os.str();
}

py::dict result_dict(const DecompositionResult& r) {
  py::dict d;
  d["SI"] = r.si;
  d["UI_Y"] = r.ui_y;
  d["UI_Z"] = r.ui_z;
  d["CI"] = r.ci;
  d["MI_TOTAL"] = r.mi_total;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bivariate information decomposition for binary triples and a binary sensorimotor model.";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ArgumentError>(m, "ArgumentError", error.ptr());
  py::register_exception<NormalizationError>(m, "NormalizationError", error.ptr());
  py::register_exception<FeasibilityError>(m, "FeasibilityError", error.ptr());
  py::register_exception<DecompositionError>(m, "DecompositionError", error.ptr());
  py::register_exception<IoError>(m, "IoError", error.ptr());
  py::register_exception<ParseError>(m, "ParseError", error.ptr());

  py::enum_<Axis>(m, "Axis").value("X", Axis::X).value("Y", Axis::Y).value("Z", Axis::Z);

  py::class_<Pmf3>(m, "Pmf3")
      .def(py::init<const Pmf3::Cells&>(), py::arg("cells"),
           "Eight cells, index = 4*[x=+1] + 2*[y=+1] + [z=+1].")
      .def_static("uniform", &Pmf3::uniform)
      .def_static("from_text", [](const std::string& text) {
        std::istringstream in(text);
        return parse_pmf3(in);
      })
      .def_static("read", [](const std::string& path) { return read_pmf3(path); })
      .def("to_text", [](const Pmf3& P) { return format_pmf3(P); })
      .def("__call__", &Pmf3::operator(), py::arg("x"), py::arg("y"), py::arg("z"))
      .def_property_readonly("cells", &Pmf3::cells)
      .def(py::self == py::self)
      .def("__repr__", repr_pmf);

  m.def("entropy", [](const std::vector<double>& d) { return entropy(d); });
  m.def(
      "joint_entropy", [](const Pmf3& P, const std::vector<Axis>& axes) { return joint_entropy(P, to_set(axes)); },
      py::arg("P"), py::arg("axes"));
  m.def(
      "mutual_information",
      [](const Pmf3& P, Axis target, const std::vector<Axis>& sources) {
        return mutual_information(P, target, to_set(sources));
      },
      py::arg("P"), py::arg("target"), py::arg("sources"));
  m.def("conditional_mutual_information", &conditional_mutual_information, py::arg("P"), py::arg("target"),
        py::arg("source"), py::arg("given"));
  m.def("co_information", &co_information);
  m.def("kl_divergence", [](const std::vector<double>& p, const std::vector<double>& q) { return kl_divergence(p, q); });

  py::class_<GammaPoint>(m, "GammaPoint")
      .def(py::init<double, double>(), py::arg("minus") = 0.0, py::arg("plus") = 0.0)
      .def_readwrite("minus", &GammaPoint::minus)
      .def_readwrite("plus", &GammaPoint::plus);

  py::class_<GammaRectangle>(m, "GammaRectangle")
      .def_readonly("lo_minus", &GammaRectangle::lo_minus)
      .def_readonly("hi_minus", &GammaRectangle::hi_minus)
      .def_readonly("lo_plus", &GammaRectangle::lo_plus)
      .def_readonly("hi_plus", &GammaRectangle::hi_plus)
      .def("contains", [](const GammaRectangle& r, double gm, double gp) { return r.contains({gm, gp}); });

  py::class_<OptimizationPlan>(m, "OptimizationPlan")
      .def(py::init<>())
      .def_readwrite("resolution", &OptimizationPlan::resolution)
      .def_readwrite("refine_rounds", &OptimizationPlan::refine_rounds)
      .def_readwrite("refine_points", &OptimizationPlan::refine_points)
      .def_readwrite("tolerance", &OptimizationPlan::tolerance);

  py::class_<DecompositionResult>(m, "DecompositionResult")
      .def_readonly("si", &DecompositionResult::si)
      .def_readonly("ui_y", &DecompositionResult::ui_y)
      .def_readonly("ui_z", &DecompositionResult::ui_z)
      .def_readonly("ci", &DecompositionResult::ci)
      .def_readonly("mi_total", &DecompositionResult::mi_total)
      .def_readonly("argmin_si", &DecompositionResult::argmin_si)
      .def_readonly("argmin_ui_y", &DecompositionResult::argmin_ui_y)
      .def_readonly("argmin_ui_z", &DecompositionResult::argmin_ui_z)
      .def_readonly("argmin_ci", &DecompositionResult::argmin_ci)
      .def_readonly("residual_sum", &DecompositionResult::residual_sum)
      .def_readonly("residual_pair_y", &DecompositionResult::residual_pair_y)
      .def_readonly("residual_pair_z", &DecompositionResult::residual_pair_z)
      .def_readonly("residual_cond", &DecompositionResult::residual_cond)
      .def("max_residual", &DecompositionResult::max_residual)
      .def("as_dict", result_dict);

  m.def("gamma_bounds", &gamma_bounds);
  m.def("perturb", py::overload_cast<const Pmf3&, double, double>(&perturb), py::arg("P"), py::arg("gamma_minus"),
        py::arg("gamma_plus"));
  m.def("decompose", &decompose, py::arg("P"), py::arg("plan") = OptimizationPlan{},
        py::call_guard<py::gil_scoped_release>());
  m.def("decompose_oracle", &decompose_oracle, py::arg("P"), py::arg("resolution") = 1001,
        py::call_guard<py::gil_scoped_release>());

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init([](double phi, double psi, double omega, double zeta, double mu, double tau) {
             ModelParams p{phi, psi, omega, zeta, mu, tau};
             p.validate();
             return p;
           }),
           py::arg("phi") = 0.0, py::arg("psi") = 0.0, py::arg("omega") = 0.0, py::arg("zeta") = kDeterministicZeta,
           py::arg("mu") = 0.0, py::arg("tau") = 0.0)
      .def_readwrite("phi", &ModelParams::phi)
      .def_readwrite("psi", &ModelParams::psi)
      .def_readwrite("omega", &ModelParams::omega)
      .def_readwrite("zeta", &ModelParams::zeta)
      .def_readwrite("mu", &ModelParams::mu)
      .def_readwrite("tau", &ModelParams::tau);

  py::class_<McMeasures>(m, "McMeasures")
      .def_readonly("mc_a_norm", &McMeasures::mc_a_norm)
      .def_readonly("cmi_w", &McMeasures::cmi_w)
      .def_readonly("ui_w", &McMeasures::ui_w);

  m.def(
      "compose_joint", [](const ModelParams& p) { return compose_joint(p).joint; }, py::arg("params"),
      "Joint of (W', W, A) as a Pmf3.");
  m.def("mc_measures", &mc_measures, py::arg("params"), py::arg("plan") = OptimizationPlan{});
  m.def(
      "evaluate_model",
      [](const ModelParams& p, const OptimizationPlan& plan) {
        const ModelEvaluation e = evaluate_model(p, plan);
        return py::make_tuple(e.world.joint, e.decomposition, e.measures);
      },
      py::arg("params"), py::arg("plan") = OptimizationPlan{}, "Returns (joint, decomposition, measures).");

  py::class_<SweepSpec>(m, "SweepSpec")
      .def(py::init<>())
      .def_static("figure2", &SweepSpec::figure2)
      .def_static("figure3", &SweepSpec::figure3)
      .def_readwrite("phi_min", &SweepSpec::phi_min)
      .def_readwrite("phi_max", &SweepSpec::phi_max)
      .def_readwrite("psi_min", &SweepSpec::psi_min)
      .def_readwrite("psi_max", &SweepSpec::psi_max)
      .def_readwrite("steps_per_axis", &SweepSpec::steps_per_axis)
      .def_readwrite("omega", &SweepSpec::omega)
      .def_readwrite("mu", &SweepSpec::mu)
      .def_readwrite("tau", &SweepSpec::tau)
      .def_readwrite("zeta", &SweepSpec::zeta)
      .def_property(
          "quantities",
          [](const SweepSpec& s) {
            std::vector<std::string> names;
            for (Quantity q : s.quantities) names.emplace_back(quantity_name(q));
            return names;
          },
          [](SweepSpec& s, const std::vector<std::string>& names) {
            std::vector<Quantity> qs;
            for (const std::string& n : names) {
              const auto q = parse_quantity(n);
              if (!q) throw ArgumentError("unknown quantity: " + n);
              qs.push_back(*q);
            }
            s.quantities = std::move(qs);
          })
      .def("phi_at", &SweepSpec::phi_at)
      .def("psi_at", &SweepSpec::psi_at);

  py::class_<SweepGrid>(m, "SweepGrid")
      .def_property_readonly("spec", &SweepGrid::spec)
      .def_property_readonly("steps", &SweepGrid::steps)
      .def_readonly("residual_max", &SweepGrid::residual_max)
      .def(
          "values",
          [](const SweepGrid& g, const std::string& name) {
            const auto q = parse_quantity(name);
            if (!q) throw ArgumentError("unknown quantity: " + name);
            const std::vector<double>& v = g.values(*q);
            py::list rows;
            for (int i = 0; i < g.steps(); ++i)
              rows.append(std::vector<double>(v.begin() + i * g.steps(), v.begin() + (i + 1) * g.steps()));
            return rows;
          },
          "Rows indexed by phi, columns by psi.");

  m.def(
      "run_sweep",
      [](const SweepSpec& spec, const OptimizationPlan& plan, int jobs) {
        SweepOptions options;
        options.jobs = jobs;
        return run_sweep(spec, plan, options);
      },
      py::arg("spec"), py::arg("plan") = OptimizationPlan{}, py::arg("jobs") = 1,
      py::call_guard<py::gil_scoped_release>());
  m.def(
      "export_grid",
      [](const SweepGrid& g, const std::filesystem::path& dir) {
        const ExportedFiles f = export_grid(g, dir);
        return py::make_tuple(f.csv, f.manifest, f.plot_script);
      },
      py::arg("grid"), py::arg("dir"), "Returns (csv_paths, manifest, plot_script).");
}
