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

#pragma once

#include <limits>
#include <string>
#include <vector>

#include "pulsekit/model.hpp"
#include "pulsekit/pulse.hpp"
#include "pulsekit/qmath.hpp"

namespace pulsekit {

/// Target gate plus the fidelity normalization (dim^2, so a perfect gate
/// scores fidelity 1). The unitary must be unitary within 1e-10.
struct GateTarget {
  std::string name;
  CMatrix unitary;

  Eigen::Index dim() const { return unitary.rows(); }
  double norm() const { return static_cast<double>(dim() * dim()); }
  void validate() const;

  /// Embeds into a larger Hilbert space (identity on the extra levels),
  /// e.g. a 2-level gate on a 3-level transmon model.
  GateTarget embedded(Eigen::Index new_dim) const;
};

/// Named standard targets: X, SX, H, CNOT (case-insensitive).
GateTarget make_gate_target(const std::string& name);
std::vector<std::string> supported_gate_names();
GateTarget gate_target_from_unitary(const std::string& name, CMatrix u);

struct PropagationResult {
  /// U_f (dim x dim) for closed systems; the composed superoperator
  /// (dim^2 x dim^2, column stacking) for open systems.
  CMatrix final_op;
  /// Per-slot propagators, in time order (index 0 acts first).
  std::vector<CMatrix> slot_ops;
  bool open = false;
  Eigen::Index dim = 0;
  /// Filled by the target-aware overloads; NaN otherwise.
  double infidelity = std::numeric_limits<double>::quiet_NaN();
};

/// Closed-system evolution: per slot k, H_k = H0 + sum_i u_i[k] C_i and
/// U_k = exp(-i H_k dt); the final unitary composes right-to-left.
/// Throws LabelMismatchError if pulse channels and model controls differ.
PropagationResult propagate_closed(const HamiltonianModel& model,
                                   const PulseProgram& pulse);
PropagationResult propagate_closed(const HamiltonianModel& model,
                                   const PulseProgram& pulse,
                                   const GateTarget& target);

/// Lindblad evolution of the process superoperator, slot by slot via the
/// exponential of the vectorized generator.
PropagationResult propagate_open(const HamiltonianModel& model,
                                 const PulseProgram& pulse);
PropagationResult propagate_open(const HamiltonianModel& model,
                                 const PulseProgram& pulse,
                                 const GateTarget& target);

/// Gate infidelity 1 - |Tr(U_t^dag U_f)|^2 / dim^2 for closed results;
/// 1 - Re Tr(S_t^dag S_f) / dim^2 for open results. Clamped to [0, 1].
double gate_infidelity(const PropagationResult& result, const GateTarget& target);

/// Superoperator of rho -> U rho U^dag in column-stacking convention
/// (conj(U) otimes U).
CMatrix unitary_superop(const CMatrix& u);

/// Vectorized Lindblad generator: -i(I (x) H - H^T (x) I) plus dissipators
/// conj(c) (x) c - (I (x) c^dag c + (c^dag c)^T (x) I)/2.
CMatrix lindblad_superop(const CMatrix& h, const std::vector<CMatrix>& collapse_ops);

/// Applies a superoperator to a density matrix.
CMatrix apply_superop(const CMatrix& superop, const CMatrix& rho);

}  // namespace pulsekit
