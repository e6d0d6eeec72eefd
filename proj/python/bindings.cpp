// Copyright 2026 The holoqutrit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "holoqutrit/benchmarking.hpp"
#include "holoqutrit/calibration.hpp"
#include "holoqutrit/cli.hpp"
#include "holoqutrit/error.hpp"
#include "holoqutrit/evolution.hpp"
#include "holoqutrit/holonomic.hpp"
#include "holoqutrit/sweeps.hpp"
#include "holoqutrit/tomography.hpp"

namespace py = pybind11;
using namespace holo;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Holonomic qutrit and cavity gate simulator";
  m.attr("__version__") = HOLO_VERSION;

  py::register_exception<Error>(m, "HoloError", PyExc_RuntimeError);

  py::class_<HolonomicParams>(m, "HolonomicParams")
      .def(py::init<double, double, double>(), py::arg("theta"), py::arg("gamma"), py::arg("phi"))
      .def_readwrite("theta", &HolonomicParams::theta)
      .def_readwrite("gamma", &HolonomicParams::gamma)
      .def_readwrite("phi", &HolonomicParams::phi)
      .def("__repr__", [](const HolonomicParams& p) {
        std::ostringstream o;
        o << "HolonomicParams(theta=" << p.theta << ", gamma=" << p.gamma << ", phi=" << p.phi << ")";
        return o.str();
      });

  m.def("target_u1", &target_u1, py::arg("params"));
  m.def("named_qubit_gate", [](const std::string& n) { return named_qubit_gate(n); }, py::arg("name"));
  m.def("named_cavity_gate", [](const std::string& n) { return named_cavity_gate(n); }, py::arg("name"));
  m.def("clifford_table", &clifford_table);

  m.def(
      "gate_unitary",
      [](const HolonomicParams& p, double epsilon, double detuning, int steps) {
        const GateSchedule g = synthesize_qubit_gate(p);
        return propagate_schedule(g.pulses, ControlError{epsilon, detuning}, steps);
      },
      py::arg("params"), py::arg("epsilon") = 0.0, py::arg("detuning") = 0.0, py::arg("steps") = 4096,
      "3x3 propagator of the default single-loop schedule.");
  m.def("gf_gate_fidelity", &gf_gate_fidelity, py::arg("u3"), py::arg("target2"));
  m.def("gf_leakage", &gf_leakage, py::arg("u3"));
  m.def(
      "qpt_fidelities",
      [](const HolonomicParams& p, bool noisy) {
        const GateSchedule g = synthesize_qubit_gate(p);
        const NoiseModel noise = noisy ? paper_device::qubit1_noise() : NoiseModel{};
        const QptResult r = run_qpt(qutrit_channel(g.pulses, noise), target_u1(p));
        return py::dict(py::arg("f_att") = r.f_att, py::arg("f_unatt") = r.f_unatt,
                        py::arg("trace") = r.reduced.trace);
      },
      py::arg("params"), py::arg("noisy") = false,
      "Exact-measurement tomography of the synthesized gate.");

  m.def(
      "fit_rb",
      [](const std::vector<int>& lengths, const std::vector<double>& means) {
        const RbFit f = fit_rb(lengths, means);
        return py::dict(py::arg("A") = f.a, py::arg("p") = f.p, py::arg("B") = f.b,
                        py::arg("F_avg") = f.f_avg);
      },
      py::arg("lengths"), py::arg("means"));
  m.def("interleaved_fidelity", &interleaved_fidelity, py::arg("p_gate"), py::arg("p_ref"));

  m.def(
      "fit_chevron",
      [](const std::vector<double>& detunings, const std::vector<double>& rates) {
        if (detunings.size() != rates.size()) {
          throw Error(ErrorCode::DimensionMismatch, "detunings and rates differ in length");
        }
        std::vector<ChevronPoint> pts;
        for (std::size_t i = 0; i < rates.size(); ++i) pts.push_back({detunings[i], rates[i]});
        const ChevronFit f = fit_chevron(pts);
        return py::make_tuple(f.center, f.coupling);
      },
      py::arg("detunings"), py::arg("rates"), "Returns (center, coupling) in rad/s.");
  m.def(
      "fit_ramsey",
      [](const std::vector<double>& t, const std::vector<double>& y) {
        const RamseyFit f = fit_ramsey(Trace(t, y));
        return py::dict(py::arg("t2") = f.t2, py::arg("f1") = f.f1, py::arg("f2") = f.f2,
                        py::arg("single_tone") = f.single_tone);
      },
      py::arg("times"), py::arg("values"));

  m.def(
      "crosstalk_mean",
      [](const std::string& family, const std::string& gate, const std::vector<double>& eps,
         const std::vector<double>& det) {
        CrosstalkConfig c;
        c.family = family == "dynamic" ? GateFamily::dynamic : GateFamily::holonomic;
        c.gate = gate;
        c.epsilons = eps;
        c.detunings = det;
        return crosstalk_sweep(c).fidelity;
      },
      py::arg("family"), py::arg("gate"), py::arg("epsilons"), py::arg("detunings"),
      "Fidelity grid (rows epsilon, columns detuning in rad/s).");

  m.def(
      "run",
      [](const std::string& command, const std::string& config, const std::string& out,
         std::optional<std::uint64_t> seed) {
        RunOptions opt;
        opt.command = command;
        opt.config = config;
        opt.out = out;
        opt.seed = seed;
        std::ostringstream log;
        run(opt, log);
        return log.str();
      },
      py::arg("command"), py::arg("config") = "", py::arg("out") = "out", py::arg("seed") = py::none(),
      "Runs one CLI subcommand in-process.");
}
