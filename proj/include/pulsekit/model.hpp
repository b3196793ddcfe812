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

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pulsekit/qmath.hpp"

namespace pulsekit {

struct QubitSpec {
  double freq_ghz = 0.0;
  std::optional<double> anharm_ghz;  // Duffing anharmonicity
  double t1_us = 0.0;
  double t2_us = 0.0;
};

struct CouplingSpec {
  int q0 = 0;
  int q1 = 1;
  double j_mhz = 0.0;
};

/// Static device description (frequencies, coherence times, sample period).
/// Loaded from JSON; see load_device_spec for the schema.
struct DeviceSpec {
  std::vector<QubitSpec> qubits;
  std::vector<CouplingSpec> couplings;
  double dt_ns = 0.0;
  int levels = 2;

  /// Throws ValidationError naming the violated invariant.
  void validate() const;
  /// Coupling between a pair, in MHz; throws ValidationError if undeclared.
  double coupling_mhz(int a, int b) const;
};

DeviceSpec device_spec_from_json_string(const std::string& text,
                                        const std::string& origin = "device spec");
DeviceSpec load_device_spec(const std::filesystem::path& path);

enum class Frame { lab, rotating };

/// Drift + control decomposition of the system Hamiltonian, plus optional
/// Lindblad collapse operators. Drift and controls are in rad/ns; collapse
/// operators in 1/sqrt(ns). Immutable by convention after construction.
struct HamiltonianModel {
  Eigen::Index dim = 0;
  CMatrix drift;
  std::vector<std::pair<std::string, CMatrix>> controls;
  std::vector<CMatrix> collapse_ops;
  Frame frame = Frame::rotating;

  bool open_system() const { return !collapse_ops.empty(); }
  std::vector<std::string> control_labels() const;
  const CMatrix* control(const std::string& label) const;
};

enum class SingleQubitControls { x, y, xy };

struct SingleQubitOptions {
  SingleQubitControls controls = SingleQubitControls::xy;
  bool open_system = false;
  /// Peak Rabi angular rate multiplying unit amplitude, rad/ns.
  double rabi_rate = kTwoPi * 0.05;
  /// Drive-frame detuning in GHz; zero keeps the rotating-frame drift zero.
  double detuning_ghz = 0.0;
};

/// Rotating-frame single-qubit model. Two levels: zero drift, controls
/// rabi_rate * sigma_{x,y}/2. Three levels: Duffing drift
/// (delta/2) ad ad a a plus controls rabi_rate * (a + ad)/2 and
/// rabi_rate * i(a - ad)/2.
HamiltonianModel build_single_qubit(const DeviceSpec& spec, int qubit,
                                    const SingleQubitOptions& opts = {});

/// Frame for the cross-resonance pair. drive_at_target puts both qubits in
/// the frame rotating at the target qubit's drive, leaving the control
/// qubit detuned by delta12 (the frame the effective CR Hamiltonian is
/// written in). own_frequencies zeroes the drift entirely.
enum class CrFrame { drive_at_target, own_frequencies };

/// grouped keeps the control-qubit drive and the ZX term under one shared
/// amplitude, exactly as the effective Hamiltonian groups them; independent
/// splits them into separate X1 / ZX channels.
enum class CrGrouping { grouped, independent };

struct CrOptions {
  bool open_system = false;
  double rabi_rate = kTwoPi * 0.05;
  CrFrame frame = CrFrame::drive_at_target;
  CrGrouping grouping = CrGrouping::grouped;
};

/// Two-qubit cross-resonance model on the (control, target) pair. The ZX
/// coefficient is J/delta12; throws ZeroDetuningError when the pair is
/// degenerate.
HamiltonianModel build_cr_two_qubit(const DeviceSpec& spec, int control_qubit,
                                    int target_qubit,
                                    const CrOptions& opts = {});

/// Derived cross-resonance quantities for a qubit pair (all rad/ns).
struct CRModel {
  double w1_tilde = 0.0;
  double w2_tilde = 0.0;
  double coupling_j = 0.0;
  double delta12 = 0.0;
  double zx_coefficient() const { return coupling_j / delta12; }
};

CRModel cr_parameters(const DeviceSpec& spec, int control_qubit,
                      int target_qubit);

}  // namespace pulsekit
