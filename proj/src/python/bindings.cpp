// Copyright 2026 The pulsekit authors
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
#include <pybind11/stl/filesystem.h>

#include "pulsekit/bench.hpp"
#include "pulsekit/errors.hpp"
#include "pulsekit/jsonio.hpp"
#include "pulsekit/model.hpp"
#include "pulsekit/optimize.hpp"
#include "pulsekit/propagate.hpp"
#include "pulsekit/pulse.hpp"
#include "pulsekit/schedule.hpp"

namespace py = pybind11;
using namespace pulsekit;

namespace {

PulseProgram pulse_from_parts(double dt,
                              const std::vector<std::string>& labels,
                              const std::vector<Eigen::VectorXd>& samples,
                              const std::vector<std::pair<double, double>>& bounds) {
  if (labels.size() != samples.size()) {
    throw ValidationError("labels and samples differ in length");
  }
  PulseProgram p;
  p.dt = dt;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    Bounds b;
    if (!bounds.empty()) {
      b = {bounds[i % bounds.size()].first, bounds[i % bounds.size()].second};
    }
    p.channels.push_back({labels[i], samples[i], b});
  }
  p.validate();
  return p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "pulse-level quantum gate synthesis and benchmarking";
  m.attr("__version__") = PULSEKIT_VERSION;

  py::register_exception<Error>(m, "PulsekitError");

  py::enum_<SingleQubitControls>(m, "Controls")
      .value("x", SingleQubitControls::x)
      .value("y", SingleQubitControls::y)
      .value("xy", SingleQubitControls::xy);

  py::enum_<CrFrame>(m, "CrFrame")
      .value("drive_at_target", CrFrame::drive_at_target)
      .value("own_frequencies", CrFrame::own_frequencies);

  py::enum_<CrGrouping>(m, "CrGrouping")
      .value("grouped", CrGrouping::grouped)
      .value("independent", CrGrouping::independent);

  py::enum_<ShapeKind>(m, "ShapeKind")
      .value("drag", ShapeKind::drag)
      .value("gaussian_square", ShapeKind::gaussian_square)
      .value("sine", ShapeKind::sine)
      .value("constant", ShapeKind::constant)
      .value("random", ShapeKind::random);

  py::enum_<OptMethod>(m, "OptMethod")
      .value("lbfgsb", OptMethod::lbfgsb)
      .value("spsa", OptMethod::spsa);

  py::enum_<Termination>(m, "Termination")
      .value("target_reached", Termination::target_reached)
      .value("grad_tol", Termination::grad_tol)
      .value("iter_limit", Termination::iter_limit)
      .value("line_search_failure", Termination::line_search_failure);

  py::class_<QubitSpec>(m, "QubitSpec")
      .def(py::init([](double freq_ghz, double t1_us, double t2_us,
                       std::optional<double> anharm_ghz) {
             return QubitSpec{freq_ghz, anharm_ghz, t1_us, t2_us};
           }),
           py::arg("freq_ghz"), py::arg("t1_us"), py::arg("t2_us"),
           py::arg("anharm_ghz") = std::nullopt)
      .def_readwrite("freq_ghz", &QubitSpec::freq_ghz)
      .def_readwrite("anharm_ghz", &QubitSpec::anharm_ghz)
      .def_readwrite("t1_us", &QubitSpec::t1_us)
      .def_readwrite("t2_us", &QubitSpec::t2_us);

  py::class_<CouplingSpec>(m, "CouplingSpec")
      .def(py::init([](int q0, int q1, double j_mhz) {
             return CouplingSpec{q0, q1, j_mhz};
           }),
           py::arg("q0"), py::arg("q1"), py::arg("j_mhz"))
      .def_readwrite("q0", &CouplingSpec::q0)
      .def_readwrite("q1", &CouplingSpec::q1)
      .def_readwrite("j_mhz", &CouplingSpec::j_mhz);

  py::class_<DeviceSpec>(m, "DeviceSpec")
      .def(py::init<>())
      .def_readwrite("qubits", &DeviceSpec::qubits)
      .def_readwrite("couplings", &DeviceSpec::couplings)
      .def_readwrite("dt_ns", &DeviceSpec::dt_ns)
      .def_readwrite("levels", &DeviceSpec::levels)
      .def("validate", &DeviceSpec::validate)
      .def("coupling_mhz", &DeviceSpec::coupling_mhz);

  m.def("load_device_spec", &load_device_spec, py::arg("path"));
  m.def("device_spec_from_json", &device_spec_from_json_string, py::arg("text"),
        py::arg("origin") = std::string("device spec"));

  py::class_<HamiltonianModel>(m, "HamiltonianModel")
      .def_readonly("dim", &HamiltonianModel::dim)
      .def_readonly("drift", &HamiltonianModel::drift)
      .def_readonly("collapse_ops", &HamiltonianModel::collapse_ops)
      .def_property_readonly("controls",
                             [](const HamiltonianModel& self) {
                               return self.controls;
                             })
      .def_property_readonly("open_system", &HamiltonianModel::open_system)
      .def("control_labels", &HamiltonianModel::control_labels);

  m.def(
      "build_single_qubit",
      [](const DeviceSpec& spec, int qubit, SingleQubitControls controls,
         bool open_system, double rabi_rate, double detuning_ghz) {
        SingleQubitOptions opts;
        opts.controls = controls;
        opts.open_system = open_system;
        opts.rabi_rate = rabi_rate;
        opts.detuning_ghz = detuning_ghz;
        return build_single_qubit(spec, qubit, opts);
      },
      py::arg("spec"), py::arg("qubit") = 0,
      py::arg("controls") = SingleQubitControls::xy,
      py::arg("open_system") = false, py::arg("rabi_rate") = kTwoPi * 0.05,
      py::arg("detuning_ghz") = 0.0);

  m.def(
      "build_cr_two_qubit",
      [](const DeviceSpec& spec, int control_qubit, int target_qubit,
         bool open_system, double rabi_rate, CrFrame frame, CrGrouping grouping) {
        CrOptions opts;
        opts.open_system = open_system;
        opts.rabi_rate = rabi_rate;
        opts.frame = frame;
        opts.grouping = grouping;
        return build_cr_two_qubit(spec, control_qubit, target_qubit, opts);
      },
      py::arg("spec"), py::arg("control_qubit") = 0, py::arg("target_qubit") = 1,
      py::arg("open_system") = false, py::arg("rabi_rate") = kTwoPi * 0.05,
      py::arg("frame") = CrFrame::drive_at_target,
      py::arg("grouping") = CrGrouping::grouped);

  py::class_<Bounds>(m, "Bounds")
      .def(py::init([](double lo, double hi) { return Bounds{lo, hi}; }),
           py::arg("lo") = -1.0, py::arg("hi") = 1.0)
      .def_readwrite("lo", &Bounds::lo)
      .def_readwrite("hi", &Bounds::hi);

  py::class_<PulseChannel>(m, "PulseChannel")
      .def_readwrite("label", &PulseChannel::label)
      .def_readwrite("samples", &PulseChannel::samples)
      .def_readwrite("bounds", &PulseChannel::bounds);

  py::class_<PulseProgram>(m, "PulseProgram")
      .def(py::init(&pulse_from_parts), py::arg("dt"), py::arg("labels"),
           py::arg("samples"),
           py::arg("bounds") = std::vector<std::pair<double, double>>{})
      .def_readwrite("dt", &PulseProgram::dt)
      .def_readwrite("channels", &PulseProgram::channels)
      .def_property_readonly("n_slots", &PulseProgram::n_slots)
      .def_property_readonly("duration", &PulseProgram::duration)
      .def("samples",
           [](const PulseProgram& self, const std::string& label) {
             const PulseChannel* ch = self.channel(label);
             if (ch == nullptr) throw LabelMismatchError("no channel " + label);
             return ch->samples;
           })
      .def("validate", &PulseProgram::validate)
      .def("to_json", &pulse_to_json_string);

  py::class_<ShapeSpec>(m, "ShapeSpec")
      .def(py::init([](ShapeKind kind, double amplitude, double sigma,
                       double beta, double width, double periods,
                       std::uint64_t seed) {
             return ShapeSpec{kind, amplitude, sigma, beta, width, periods, seed};
           }),
           py::arg("kind"), py::arg("amplitude") = 0.0, py::arg("sigma") = 0.0,
           py::arg("beta") = 0.2, py::arg("width") = 0.0,
           py::arg("periods") = 1.0, py::arg("seed") = 0)
      .def_readwrite("kind", &ShapeSpec::kind)
      .def_readwrite("amplitude", &ShapeSpec::amplitude)
      .def_readwrite("sigma", &ShapeSpec::sigma)
      .def_readwrite("beta", &ShapeSpec::beta)
      .def_readwrite("width", &ShapeSpec::width)
      .def_readwrite("periods", &ShapeSpec::periods)
      .def_readwrite("seed", &ShapeSpec::seed);

  m.def(
      "make_initial",
      [](const ShapeSpec& shape, Eigen::Index n_slots, double dt,
         const std::vector<std::string>& channels,
         const std::vector<std::pair<double, double>>& bounds) {
        std::vector<Bounds> bs;
        for (const auto& [lo, hi] : bounds) bs.push_back({lo, hi});
        return make_initial(shape, n_slots, dt, channels, bs);
      },
      py::arg("shape"), py::arg("n_slots"), py::arg("dt"), py::arg("channels"),
      py::arg("bounds") = std::vector<std::pair<double, double>>{});
  m.def("resample", &resample, py::arg("pulse"), py::arg("new_n_slots"));
  m.def("save_pulse", &save_pulse, py::arg("path"), py::arg("pulse"));
  m.def("load_pulse", &load_pulse, py::arg("path"));

  py::class_<GateTarget>(m, "GateTarget")
      .def_readonly("name", &GateTarget::name)
      .def_readonly("unitary", &GateTarget::unitary)
      .def_property_readonly("dim", &GateTarget::dim)
      .def("embedded", &GateTarget::embedded);

  m.def("make_gate_target", &make_gate_target, py::arg("name"));
  m.def("gate_target_from_unitary", &gate_target_from_unitary, py::arg("name"),
        py::arg("unitary"));
  m.def("supported_gate_names", &supported_gate_names);

  py::class_<PropagationResult>(m, "PropagationResult")
      .def_readonly("final_op", &PropagationResult::final_op)
      .def_readonly("slot_ops", &PropagationResult::slot_ops)
      .def_readonly("open", &PropagationResult::open)
      .def_readonly("dim", &PropagationResult::dim)
      .def_readonly("infidelity", &PropagationResult::infidelity);

  m.def("propagate_closed",
        py::overload_cast<const HamiltonianModel&, const PulseProgram&>(
            &propagate_closed),
        py::arg("model"), py::arg("pulse"),
        py::call_guard<py::gil_scoped_release>());
  m.def("propagate_closed",
        py::overload_cast<const HamiltonianModel&, const PulseProgram&,
                          const GateTarget&>(&propagate_closed),
        py::arg("model"), py::arg("pulse"), py::arg("target"),
        py::call_guard<py::gil_scoped_release>());
  m.def("propagate_open",
        py::overload_cast<const HamiltonianModel&, const PulseProgram&>(
            &propagate_open),
        py::arg("model"), py::arg("pulse"),
        py::call_guard<py::gil_scoped_release>());
  m.def("propagate_open",
        py::overload_cast<const HamiltonianModel&, const PulseProgram&,
                          const GateTarget&>(&propagate_open),
        py::arg("model"), py::arg("pulse"), py::arg("target"),
        py::call_guard<py::gil_scoped_release>());
  m.def("gate_infidelity", &gate_infidelity, py::arg("result"), py::arg("target"));
  m.def("unitary_superop", &unitary_superop, py::arg("u"));
  m.def("lindblad_superop", &lindblad_superop, py::arg("h"),
        py::arg("collapse_ops"));

  py::class_<SpsaParams>(m, "SpsaParams")
      .def(py::init<>())
      .def_readwrite("a", &SpsaParams::a)
      .def_readwrite("c", &SpsaParams::c)
      .def_readwrite("big_a", &SpsaParams::big_a)
      .def_readwrite("alpha", &SpsaParams::alpha)
      .def_readwrite("gamma", &SpsaParams::gamma);

  py::class_<OptConfig>(m, "OptConfig")
      .def(py::init<>())
      .def_readwrite("method", &OptConfig::method)
      .def_readwrite("max_iters", &OptConfig::max_iters)
      .def_readwrite("fid_err_target", &OptConfig::fid_err_target)
      .def_readwrite("grad_tol", &OptConfig::grad_tol)
      .def_readwrite("lbfgs_memory", &OptConfig::lbfgs_memory)
      .def_readwrite("spsa", &OptConfig::spsa)
      .def_readwrite("seed", &OptConfig::seed)
      .def_readwrite("fd_step", &OptConfig::fd_step);

  py::class_<OptResult>(m, "OptResult")
      .def_readonly("pulse", &OptResult::pulse)
      .def_readonly("infidelity_trace", &OptResult::infidelity_trace)
      .def_readonly("final_infidelity", &OptResult::final_infidelity)
      .def_readonly("termination", &OptResult::termination)
      .def_readonly("n_cost_evals", &OptResult::n_cost_evals)
      .def_readonly("n_grad_evals", &OptResult::n_grad_evals)
      .def_readonly("wall_seconds", &OptResult::wall_seconds);

  m.def("grape_gradient", &grape_gradient, py::arg("model"), py::arg("pulse"),
        py::arg("target"), py::call_guard<py::gil_scoped_release>());
  m.def("optimize_lbfgsb", &optimize_lbfgsb, py::arg("model"), py::arg("pulse0"),
        py::arg("target"), py::arg("config"),
        py::call_guard<py::gil_scoped_release>());
  m.def("optimize_spsa", &optimize_spsa, py::arg("model"), py::arg("pulse0"),
        py::arg("target"), py::arg("config"),
        py::call_guard<py::gil_scoped_release>());
  m.def("optimize_pulse", &optimize_pulse, py::arg("model"), py::arg("pulse0"),
        py::arg("target"), py::arg("config"),
        py::call_guard<py::gil_scoped_release>());

  py::class_<NoiseChannel>(m, "NoiseChannel")
      .def_readonly("superop", &NoiseChannel::superop)
      .def_readonly("p", &NoiseChannel::p)
      .def_readonly("gamma", &NoiseChannel::gamma)
      .def_readonly("lam", &NoiseChannel::lambda)
      .def_property_readonly("dim", &NoiseChannel::dim)
      .def_static("identity", &NoiseChannel::identity_channel, py::arg("dim"))
      .def_static("depolarizing", &NoiseChannel::depolarizing, py::arg("dim"),
                  py::arg("p"))
      .def_static("amplitude_damping", &NoiseChannel::amplitude_damping,
                  py::arg("gamma"))
      .def_static("dephasing", &NoiseChannel::dephasing, py::arg("lam"))
      .def_static("composed", &NoiseChannel::composed, py::arg("channels"));

  m.def("choi_from_superop", &choi_from_superop, py::arg("superop"));
  m.def("channel_process_infidelity", &channel_process_infidelity,
        py::arg("channel"));
  m.def("channel_from_pulse", &channel_from_pulse, py::arg("model"),
        py::arg("pulse"), py::arg("target"),
        py::call_guard<py::gil_scoped_release>());

  m.def(
      "sample_clifford",
      [](int n_qubits, std::uint64_t seed, int count) {
        std::mt19937_64 rng(seed);
        std::vector<std::pair<CMatrix, long>> out;
        for (int i = 0; i < count; ++i) {
          Clifford c = sample_clifford(n_qubits, rng);
          out.emplace_back(std::move(c.unitary), c.index);
        }
        return out;
      },
      py::arg("n_qubits"), py::arg("seed") = 0, py::arg("count") = 1);
  m.def("single_qubit_cliffords", []() { return single_qubit_cliffords(); });

  py::class_<DecayFit>(m, "DecayFit")
      .def_readonly("amplitude", &DecayFit::amplitude)
      .def_readonly("baseline", &DecayFit::baseline)
      .def_readonly("alpha", &DecayFit::alpha)
      .def_readonly("amplitude_err", &DecayFit::amplitude_err)
      .def_readonly("baseline_err", &DecayFit::baseline_err)
      .def_readonly("alpha_err", &DecayFit::alpha_err)
      .def_readonly("converged", &DecayFit::converged);

  m.def("fit_rb_decay", &fit_rb_decay, py::arg("lengths"), py::arg("survival"),
        py::arg("amplitude0") = 0.5, py::arg("baseline0") = 0.5,
        py::arg("alpha0") = 0.99);

  py::class_<RbReport>(m, "RbReport")
      .def_readonly("lengths", &RbReport::lengths)
      .def_readonly("survival_std", &RbReport::survival_std)
      .def_readonly("survival_std_err", &RbReport::survival_std_err)
      .def_readonly("survival_int", &RbReport::survival_int)
      .def_readonly("survival_int_err", &RbReport::survival_int_err)
      .def_readonly("alpha", &RbReport::alpha)
      .def_readonly("alpha_err", &RbReport::alpha_err)
      .def_readonly("alpha_c", &RbReport::alpha_c)
      .def_readonly("alpha_c_err", &RbReport::alpha_c_err)
      .def_readonly("epc", &RbReport::epc)
      .def_readonly("interleaved_error", &RbReport::interleaved_error)
      .def_readonly("interleaved_error_err", &RbReport::interleaved_error_err)
      .def_readonly("fit_std", &RbReport::fit_std)
      .def_readonly("fit_int", &RbReport::fit_int)
      .def_readonly("interleaved", &RbReport::interleaved)
      .def_readonly("dim", &RbReport::dim)
      .def("to_json", &rb_report_to_json_string)
      .def("curves_csv", &rb_curves_csv);

  m.def(
      "run_rb",
      [](const NoiseChannel& noise, std::vector<int> lengths, int n_seeds,
         long shots, std::uint64_t seed, int jobs,
         std::optional<std::tuple<std::string, CMatrix, NoiseChannel>> interleaved) {
        RbConfig cfg;
        cfg.lengths = std::move(lengths);
        cfg.n_seeds = n_seeds;
        cfg.shots = shots;
        cfg.seed = seed;
        cfg.jobs = jobs;
        std::optional<InterleavedGate> gate;
        if (interleaved.has_value()) {
          gate = InterleavedGate{std::get<0>(*interleaved),
                                 std::get<1>(*interleaved),
                                 std::get<2>(*interleaved)};
        }
        return run_rb(noise, gate, cfg);
      },
      py::arg("noise_per_clifford"), py::arg("lengths"), py::arg("n_seeds") = 30,
      py::arg("shots") = 0, py::arg("seed") = 0, py::arg("jobs") = 1,
      py::arg("interleaved") = std::nullopt,
      py::call_guard<py::gil_scoped_release>());

  py::class_<ScheduleChannel>(m, "ScheduleChannel")
      .def_readonly("name", &ScheduleChannel::name)
      .def_readonly("samples", &ScheduleChannel::samples);

  py::class_<ScheduleDoc>(m, "ScheduleDoc")
      .def_readonly("dt_ns", &ScheduleDoc::dt_ns)
      .def_readonly("channels", &ScheduleDoc::channels)
      .def_readonly("gate", &ScheduleDoc::gate)
      .def_readonly("spec_hash", &ScheduleDoc::spec_hash)
      .def_readonly("version", &ScheduleDoc::version)
      .def("to_json", &schedule_to_json_string);

  m.def("export_schedule", &export_schedule, py::arg("pulse"), py::arg("gate"),
        py::arg("spec_hash") = std::string("0000000000000000"),
        py::arg("channel_map") = default_channel_map());
  m.def("import_schedule", &import_schedule, py::arg("doc"),
        py::arg("labels") = std::vector<std::string>{},
        py::arg("bounds") = std::vector<Bounds>{},
        py::arg("channel_map") = default_channel_map());
  m.def("save_schedule", &save_schedule, py::arg("path"), py::arg("doc"));
  m.def("load_schedule", &load_schedule, py::arg("path"));
  m.def("default_channel_map", &default_channel_map);
}
