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

#include "pulsekit/model.hpp"

#include <cmath>

#include <json.hpp>

#include "pulsekit/errors.hpp"
#include "pulsekit/jsonio.hpp"

namespace pulsekit {

namespace {

constexpr double kUsToNs = 1000.0;

/// Collapse operators for one qubit: sqrt(1/T1) a and sqrt(1/(2 T_phi)) ad a
/// with 1/T_phi = 1/T2 - 1/(2 T1). Times arrive in us.
std::vector<CMatrix> qubit_collapse_ops(const QubitSpec& q, Eigen::Index levels) {
  const double t1_ns = q.t1_us * kUsToNs;
  const double t2_ns = q.t2_us * kUsToNs;
  const double dephasing_rate = 1.0 / t2_ns - 1.0 / (2.0 * t1_ns);
  if (dephasing_rate < -1e-15) {
    throw NonPhysicalT2Error("T2 exceeds 2*T1; pure-dephasing rate negative");
  }
  const CMatrix a = lowering(levels);
  std::vector<CMatrix> ops;
  ops.push_back(std::sqrt(1.0 / t1_ns) * a);
  if (dephasing_rate > 0.0) {
    ops.push_back(std::sqrt(0.5 * dephasing_rate) * (a.adjoint() * a));
  }
  return ops;
}

}  // namespace

void DeviceSpec::validate() const {
  if (qubits.empty()) throw ValidationError("device spec lists no qubits");
  if (dt_ns <= 0.0) throw ValidationError("dt_ns must be strictly positive");
  if (levels != 2 && levels != 3) throw ValidationError("levels must be 2 or 3");
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    const auto& q = qubits[i];
    const std::string tag = "qubit " + std::to_string(i) + ": ";
    if (q.freq_ghz <= 0.0) throw ValidationError(tag + "freq_ghz must be positive");
    if (q.t1_us <= 0.0) throw ValidationError(tag + "t1_us must be positive");
    if (q.t2_us <= 0.0) throw ValidationError(tag + "t2_us must be positive");
    if (q.t2_us > 2.0 * q.t1_us + 1e-12) {
      throw ValidationError(tag + "t2_us must not exceed 2*t1_us");
    }
  }
  for (const auto& c : couplings) {
    const int n = static_cast<int>(qubits.size());
    if (c.q0 < 0 || c.q0 >= n || c.q1 < 0 || c.q1 >= n || c.q0 == c.q1) {
      throw ValidationError("coupling pair indices out of range");
    }
  }
}

double DeviceSpec::coupling_mhz(int a, int b) const {
  for (const auto& c : couplings) {
    if ((c.q0 == a && c.q1 == b) || (c.q0 == b && c.q1 == a)) return c.j_mhz;
  }
  throw ValidationError("no coupling declared for qubit pair (" +
                        std::to_string(a) + ", " + std::to_string(b) + ")");
}

DeviceSpec device_spec_from_json_string(const std::string& text,
                                        const std::string& origin) {
  const nlohmann::json j = parse_json(text, origin);
  DeviceSpec spec;
  try {
    for (const auto& jq : j.at("qubits")) {
      QubitSpec q;
      q.freq_ghz = jq.at("freq_ghz").get<double>();
      if (jq.contains("anharm_ghz")) q.anharm_ghz = jq["anharm_ghz"].get<double>();
      q.t1_us = jq.at("t1_us").get<double>();
      q.t2_us = jq.at("t2_us").get<double>();
      spec.qubits.push_back(q);
    }
    for (const auto& jc : j.at("coupling")) {
      CouplingSpec c;
      c.q0 = jc.at("pair").at(0).get<int>();
      c.q1 = jc.at("pair").at(1).get<int>();
      c.j_mhz = jc.at("j_mhz").get<double>();
      spec.couplings.push_back(c);
    }
    spec.dt_ns = j.at("dt_ns").get<double>();
    spec.levels = j.at("levels").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(origin + ": " + e.what());
  }
  spec.validate();
  return spec;
}

DeviceSpec load_device_spec(const std::filesystem::path& path) {
  return device_spec_from_json_string(read_text_file(path), path.string());
}

std::vector<std::string> HamiltonianModel::control_labels() const {
  std::vector<std::string> labels;
  labels.reserve(controls.size());
  for (const auto& [label, op] : controls) labels.push_back(label);
  return labels;
}

const CMatrix* HamiltonianModel::control(const std::string& label) const {
  for (const auto& [l, op] : controls) {
    if (l == label) return &op;
  }
  return nullptr;
}

HamiltonianModel build_single_qubit(const DeviceSpec& spec, int qubit,
                                    const SingleQubitOptions& opts) {
  spec.validate();
  if (qubit < 0 || qubit >= static_cast<int>(spec.qubits.size())) {
    throw ValidationError("qubit index out of range");
  }
  const QubitSpec& q = spec.qubits[qubit];

  HamiltonianModel model;
  model.frame = Frame::rotating;
  model.dim = spec.levels;
  const double detuning = kTwoPi * opts.detuning_ghz;

  if (spec.levels == 2) {
    model.drift = detuning * 0.5 * sigma_z();
    if (opts.controls != SingleQubitControls::y) {
      model.controls.emplace_back("X", opts.rabi_rate * 0.5 * sigma_x());
    }
    if (opts.controls != SingleQubitControls::x) {
      model.controls.emplace_back("Y", opts.rabi_rate * 0.5 * sigma_y());
    }
  } else {
    if (!q.anharm_ghz.has_value()) {
      throw MissingAnharmonicityError(
          "3-level model requires anharm_ghz for qubit " + std::to_string(qubit));
    }
    const double delta = kTwoPi * *q.anharm_ghz;
    const CMatrix a = lowering(3);
    const CMatrix n_op = a.adjoint() * a;
    model.drift = detuning * n_op +
                  0.5 * delta * (a.adjoint() * a.adjoint() * a * a);
    const complexd i_unit(0.0, 1.0);
    if (opts.controls != SingleQubitControls::y) {
      model.controls.emplace_back("X", opts.rabi_rate * 0.5 * (a + a.adjoint()));
    }
    if (opts.controls != SingleQubitControls::x) {
      model.controls.emplace_back(
          "Y", CMatrix(opts.rabi_rate * 0.5 * i_unit * (a - a.adjoint())));
    }
  }

  if (opts.open_system) {
    model.collapse_ops = qubit_collapse_ops(q, spec.levels);
  }
  return model;
}

CRModel cr_parameters(const DeviceSpec& spec, int control_qubit,
                      int target_qubit) {
  spec.validate();
  const int n = static_cast<int>(spec.qubits.size());
  if (control_qubit < 0 || control_qubit >= n || target_qubit < 0 ||
      target_qubit >= n || control_qubit == target_qubit) {
    throw ValidationError("cross-resonance pair indices invalid");
  }
  CRModel cr;
  cr.w1_tilde = kTwoPi * spec.qubits[control_qubit].freq_ghz;
  cr.w2_tilde = kTwoPi * spec.qubits[target_qubit].freq_ghz;
  cr.coupling_j = kTwoPi * spec.coupling_mhz(control_qubit, target_qubit) * 1e-3;
  cr.delta12 = cr.w1_tilde - cr.w2_tilde;
  if (std::abs(cr.delta12) < 1e-12) {
    throw ZeroDetuningError("qubit pair is degenerate; ZX coefficient J/delta12 diverges");
  }
  return cr;
}

HamiltonianModel build_cr_two_qubit(const DeviceSpec& spec, int control_qubit,
                                    int target_qubit, const CrOptions& opts) {
  const CRModel cr = cr_parameters(spec, control_qubit, target_qubit);

  const CMatrix id2 = identity(2);
  const CMatrix x1 = kron(sigma_x(), id2);
  const CMatrix x2 = kron(id2, sigma_x());
  const CMatrix zx = kron(sigma_z(), sigma_x());
  const CMatrix z1 = kron(sigma_z(), id2);
  const double eta = cr.zx_coefficient();

  HamiltonianModel model;
  model.frame = Frame::rotating;
  model.dim = 4;
  if (opts.frame == CrFrame::drive_at_target) {
    // Both qubits viewed from the target-frequency drive frame: the control
    // qubit keeps a delta12 detuning, the target sits on resonance.
    model.drift = 0.5 * cr.delta12 * z1;
  } else {
    model.drift = CMatrix::Zero(4, 4);
  }

  if (opts.grouping == CrGrouping::grouped) {
    model.controls.emplace_back("X1", opts.rabi_rate * (x1 + eta * zx));
    model.controls.emplace_back("X2", opts.rabi_rate * x2);
  } else {
    model.controls.emplace_back("X1", opts.rabi_rate * x1);
    model.controls.emplace_back("X2", opts.rabi_rate * x2);
    model.controls.emplace_back("ZX", opts.rabi_rate * eta * zx);
  }

  if (opts.open_system) {
    const auto ops_c = qubit_collapse_ops(spec.qubits[control_qubit], 2);
    const auto ops_t = qubit_collapse_ops(spec.qubits[target_qubit], 2);
    for (const auto& op : ops_c) model.collapse_ops.push_back(kron(op, id2));
    for (const auto& op : ops_t) model.collapse_ops.push_back(kron(id2, op));
  }
  return model;
}

}  // namespace pulsekit
