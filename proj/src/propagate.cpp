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

#include "pulsekit/propagate.hpp"

#include <algorithm>
#include <cmath>

#include "pulsekit/errors.hpp"

namespace pulsekit {

namespace {

bool is_unitary(const CMatrix& u, double tol) {
  return max_abs(u.adjoint() * u - identity(u.rows())) <= tol;
}

/// Channel amplitudes matched to model controls, in model control order.
/// Requires the label sets to coincide.
std::vector<const Eigen::VectorXd*> match_channels(const HamiltonianModel& model,
                                                   const PulseProgram& pulse) {
  if (pulse.channels.size() != model.controls.size()) {
    throw LabelMismatchError("pulse has " + std::to_string(pulse.channels.size()) +
                             " channels but the model has " +
                             std::to_string(model.controls.size()) + " controls");
  }
  std::vector<const Eigen::VectorXd*> matched;
  for (const auto& [label, op] : model.controls) {
    const PulseChannel* ch = pulse.channel(label);
    if (ch == nullptr) {
      throw LabelMismatchError("pulse is missing channel for control " + label);
    }
    matched.push_back(&ch->samples);
  }
  return matched;
}

CMatrix slot_hamiltonian(const HamiltonianModel& model,
                         const std::vector<const Eigen::VectorXd*>& amps,
                         Eigen::Index k) {
  CMatrix h = model.drift;
  for (std::size_t i = 0; i < model.controls.size(); ++i) {
    h += (*amps[i])[k] * model.controls[i].second;
  }
  return h;
}

}  // namespace

void GateTarget::validate() const {
  if (unitary.rows() != unitary.cols() || unitary.rows() < 2) {
    throw ValidationError("gate target must be a square matrix of dim >= 2");
  }
  if (!is_unitary(unitary, 1e-10)) {
    throw ValidationError("gate target is not unitary within 1e-10");
  }
}

GateTarget GateTarget::embedded(Eigen::Index new_dim) const {
  if (new_dim < dim()) {
    throw DimensionMismatchError("cannot embed a gate into a smaller space");
  }
  if (new_dim == dim()) return *this;
  CMatrix u = identity(new_dim);
  u.topLeftCorner(dim(), dim()) = unitary;
  return {name, u};
}

GateTarget make_gate_target(const std::string& name) {
  std::string upper = name;
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  if (upper == "X") return {"X", sigma_x()};
  if (upper == "SX") {
    CMatrix u(2, 2);
    u << complexd(0.5, 0.5), complexd(0.5, -0.5), complexd(0.5, -0.5),
        complexd(0.5, 0.5);
    return {"SX", u};
  }
  if (upper == "H") {
    const double s = 1.0 / std::sqrt(2.0);
    CMatrix u(2, 2);
    u << s, s, s, -s;
    return {"H", u};
  }
  if (upper == "CNOT" || upper == "CX") {
    CMatrix u = CMatrix::Zero(4, 4);
    u(0, 0) = 1;
    u(1, 1) = 1;
    u(2, 3) = 1;
    u(3, 2) = 1;
    return {"CNOT", u};
  }
  std::string supported;
  for (const auto& g : supported_gate_names()) supported += " " + g;
  throw UsageError("unknown gate '" + name + "'; supported gates:" + supported);
}

std::vector<std::string> supported_gate_names() {
  return {"X", "SX", "H", "CNOT"};
}

GateTarget gate_target_from_unitary(const std::string& name, CMatrix u) {
  GateTarget t{name, std::move(u)};
  t.validate();
  return t;
}

PropagationResult propagate_closed(const HamiltonianModel& model,
                                   const PulseProgram& pulse) {
  if (model.open_system()) {
    throw ValidationError("propagate_closed requires an empty collapse-operator list");
  }
  pulse.validate();
  const auto amps = match_channels(model, pulse);
  const Eigen::Index n = pulse.n_slots();
  const complexd minus_i_dt(0.0, -pulse.dt);

  PropagationResult result;
  result.open = false;
  result.dim = model.dim;
  result.slot_ops.reserve(n);
  CMatrix u_total = identity(model.dim);
  for (Eigen::Index k = 0; k < n; ++k) {
    CMatrix u_k = expm_hermitian_scaled(slot_hamiltonian(model, amps, k), minus_i_dt);
    u_total = u_k * u_total;  // time-ordered, later slots on the left
    result.slot_ops.push_back(std::move(u_k));
  }
  result.final_op = std::move(u_total);
  return result;
}

PropagationResult propagate_closed(const HamiltonianModel& model,
                                   const PulseProgram& pulse,
                                   const GateTarget& target) {
  PropagationResult result = propagate_closed(model, pulse);
  result.infidelity = gate_infidelity(result, target);
  return result;
}

CMatrix unitary_superop(const CMatrix& u) { return kron(u.conjugate(), u); }

CMatrix lindblad_superop(const CMatrix& h,
                         const std::vector<CMatrix>& collapse_ops) {
  const Eigen::Index d = h.rows();
  const CMatrix id = identity(d);
  const complexd i_unit(0.0, 1.0);
  CMatrix lind = -i_unit * (kron(id, h) - kron(h.transpose(), id));
  for (const CMatrix& c : collapse_ops) {
    const CMatrix cdc = c.adjoint() * c;
    lind += kron(c.conjugate(), c) -
            0.5 * (kron(id, cdc) + kron(cdc.transpose(), id));
  }
  return lind;
}

CMatrix apply_superop(const CMatrix& superop, const CMatrix& rho) {
  return unvec(superop * vec(rho), rho.rows(), rho.cols());
}

PropagationResult propagate_open(const HamiltonianModel& model,
                                 const PulseProgram& pulse) {
  if (!model.open_system()) {
    throw ValidationError("propagate_open requires collapse operators; "
                          "use propagate_closed instead");
  }
  pulse.validate();
  const auto amps = match_channels(model, pulse);
  const Eigen::Index n = pulse.n_slots();

  PropagationResult result;
  result.open = true;
  result.dim = model.dim;
  result.slot_ops.reserve(n);
  CMatrix s_total = identity(model.dim * model.dim);
  for (Eigen::Index k = 0; k < n; ++k) {
    const CMatrix lind =
        lindblad_superop(slot_hamiltonian(model, amps, k), model.collapse_ops);
    CMatrix s_k = expm_general(pulse.dt * lind);
    s_total = s_k * s_total;
    result.slot_ops.push_back(std::move(s_k));
  }
  result.final_op = std::move(s_total);
  return result;
}

PropagationResult propagate_open(const HamiltonianModel& model,
                                 const PulseProgram& pulse,
                                 const GateTarget& target) {
  PropagationResult result = propagate_open(model, pulse);
  result.infidelity = gate_infidelity(result, target);
  return result;
}

double gate_infidelity(const PropagationResult& result, const GateTarget& target) {
  if (result.dim != target.dim()) {
    throw DimensionMismatchError("propagation dim " + std::to_string(result.dim) +
                                 " does not match target dim " +
                                 std::to_string(target.dim()));
  }
  double fidelity = 0.0;
  if (result.open) {
    const CMatrix s_target = unitary_superop(target.unitary);
    fidelity = (s_target.adjoint() * result.final_op).trace().real() / target.norm();
  } else {
    const complexd overlap = (target.unitary.adjoint() * result.final_op).trace();
    fidelity = std::norm(overlap) / target.norm();
  }
  return std::clamp(1.0 - fidelity, 0.0, 1.0);
}

}  // namespace pulsekit
