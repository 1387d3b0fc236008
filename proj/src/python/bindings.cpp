#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "pinwheel/ansatz.hpp"
#include "pinwheel/cli.hpp"
#include "pinwheel/errors.hpp"
#include "pinwheel/groundstate.hpp"
#include "pinwheel/groups.hpp"

namespace py = pybind11;
using namespace pinwheel;

namespace {

py::array_t<double> as_array(const std::vector<double>& v) { return py::array_t<double>(v.size(), v.data()); }

py::tuple run(const std::vector<std::string>& args) {
  std::vector<std::string> all{"pinwheel"};
  all.insert(all.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : all) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code;
  {
    py::gil_scoped_release release;
    code = run_cli(int(argv.size()), argv.data(), out, err);
  }
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_pinwheel, m) {
  m.doc() = "Pinwheel solutions of competitive Schrodinger systems";

  py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

  py::class_<RadialProfile>(m, "RadialProfile")
      .def_readonly("d", &RadialProfile::d)
      .def_readonly("p", &RadialProfile::p)
      .def_readonly("V_inf", &RadialProfile::V_inf)
      .def_property_readonly("r", [](const RadialProfile& P) { return as_array(P.r); })
      .def_property_readonly("w", [](const RadialProfile& P) { return as_array(P.w); })
      .def_property_readonly("omega0", &RadialProfile::omega0)
      .def_property_readonly("a_N", [](const RadialProfile& P) { return P.fit.a_N; })
      .def_property_readonly("decay_exponent", [](const RadialProfile& P) { return P.fit.exponent; })
      .def_property_readonly("energy", [](const RadialProfile& P) { return ground_energy(P); })
      .def_property_readonly("norm_V2", [](const RadialProfile& P) { return norm_V2(P); })
      .def("__call__", [](const RadialProfile& P, py::array_t<double> r) {
        return py::vectorize([&P](double x) { return P.eval(x); })(r);
      });

  m.def("ground_state", [](int d, double p, double V_inf) { return solve_ground_state(d, p, V_inf); },
        py::arg("d"), py::arg("p") = 2.0, py::arg("V_inf") = 1.0, py::call_guard<py::gil_scoped_release>());

  m.def("separation_constants", [](int mm, int ell) {
    SeparationConstants c = separation_constants(mm, ell);
    py::dict d;
    d["intra"] = c.intra;
    d["inter"] = c.inter;
    d["existence_ok"] = c.existence_ok;
    d["strong_ok"] = c.strong_ok;
    return d;
  });
  m.def("epsilon_R", &epsilon_R, py::arg("profile"), py::arg("m"), py::arg("R"));
  m.def("pair_interaction",
        [](double a, double b, double sep, const RadialProfile& P) { return pair_interaction(a, b, sep, P); },
        py::arg("a"), py::arg("b"), py::arg("sep"), py::arg("profile"));
  m.def("power_inequality_check",
        [](double q, const std::vector<double>& a) { return power_inequality_check(q, a); });
  m.def("run_cli", &run, py::arg("args"), "Runs the command-line front end; returns (exit_code, stdout, stderr).");
}
