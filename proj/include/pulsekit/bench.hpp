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

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pulsekit/model.hpp"
#include "pulsekit/propagate.hpp"
#include "pulsekit/pulse.hpp"
#include "pulsekit/qmath.hpp"

namespace pulsekit {

enum class ChannelKind { depolarizing, amplitude_damping, dephasing, composed, from_pulse, identity };

/// A quantum channel as a column-stacking superoperator, validated CPTP at
/// construction (trace preservation within 1e-10, Choi eigenvalues above
/// -1e-9).
struct NoiseChannel {
  ChannelKind kind = ChannelKind::identity;
  double p = 0.0;       // depolarizing probability
  double gamma = 0.0;   // amplitude-damping strength
  double lambda = 0.0;  // dephasing probability
  CMatrix superop;

  Eigen::Index dim() const;

  static NoiseChannel identity_channel(Eigen::Index d);
  /// rho -> (1-p) rho + p I/d, so the RB depolarizing parameter is
  /// alpha = 1 - p exactly (the composition oracle below checks this).
  static NoiseChannel depolarizing(Eigen::Index d, double p);
  static NoiseChannel amplitude_damping(double gamma);
  /// rho -> (1-lambda) rho + lambda Z rho Z.
  static NoiseChannel dephasing(double lambda);
  /// Applies channels left to right: composed({c1, c2}) acts as c2 after c1.
  static NoiseChannel composed(const std::vector<NoiseChannel>& channels);
  static NoiseChannel from_superop(ChannelKind kind, CMatrix superop);
};

/// Choi matrix of a column-stacking superoperator (unnormalized; trace d for
/// a TP map).
CMatrix choi_from_superop(const CMatrix& superop);

/// Trace-preservation defect and smallest Choi eigenvalue.
void cptp_check(const CMatrix& superop, double* tp_error, double* choi_min_eig);

/// Process infidelity of a channel against the identity,
/// 1 - Re Tr(S)/d^2, clamped to [0, 1].
double channel_process_infidelity(const NoiseChannel& channel);

struct Clifford {
  CMatrix unitary;
  long index = 0;
};

/// The 24 single-qubit Cliffords, enumerated once from the {H, S}
/// generators and cached (order is deterministic).
const std::vector<CMatrix>& single_qubit_cliffords();

/// Uniform sample from the 1- or 2-qubit Clifford group. Two-qubit sampling
/// uses the layered decomposition (local x local, entangling class, axis
/// permutations) with class weights 576 : 5184 : 5184 : 576 out of 11520.
Clifford sample_clifford(int n_qubits, std::mt19937_64& rng);

/// Least-squares fit of survival = A alpha^m + B with parameter
/// uncertainties from the Jacobian covariance.
struct DecayFit {
  double amplitude = 0.0;   // A
  double baseline = 0.0;    // B
  double alpha = 1.0;
  double amplitude_err = 0.0;
  double baseline_err = 0.0;
  double alpha_err = 0.0;
  bool converged = false;
};

DecayFit fit_rb_decay(const std::vector<double>& lengths,
                      const std::vector<double>& survival, double amplitude0,
                      double baseline0, double alpha0);

struct InterleavedGate {
  std::string name;
  CMatrix unitary;
  NoiseChannel channel;
};

struct RbConfig {
  std::vector<int> lengths;
  int n_seeds = 30;
  long shots = 0;  // 0 = exact probabilities
  std::uint64_t seed = 0;
  int jobs = 1;
  /// Optional SPAM imperfection, applied at preparation and before readout.
  std::optional<NoiseChannel> spam_prep;
  std::optional<NoiseChannel> spam_meas;
};

struct RbReport {
  std::vector<int> lengths;
  std::vector<double> survival_std;
  std::vector<double> survival_std_err;
  std::vector<double> survival_int;
  std::vector<double> survival_int_err;
  double alpha = 1.0;
  double alpha_err = 0.0;
  double alpha_c = 0.0;
  double alpha_c_err = 0.0;
  double epc = 0.0;
  double interleaved_error = 0.0;
  double interleaved_error_err = 0.0;
  DecayFit fit_std;
  DecayFit fit_int;
  bool interleaved = false;
  Eigen::Index dim = 2;
};

/// Standard (and optionally interleaved) randomized benchmarking with the
/// given per-Clifford noise channel. Each random Clifford is followed by
/// the noise; in interleaved mode the gate and its channel follow each
/// Clifford; the exact inverse of the whole sequence closes it noise-free.
RbReport run_rb(const NoiseChannel& noise_per_clifford,
                const std::optional<InterleavedGate>& interleaved,
                const RbConfig& cfg);

/// Residual error channel of a pulse: propagate (Lindblad if the model is
/// open, unitary otherwise), then undo the target gate. A perfect pulse
/// yields the identity channel.
NoiseChannel channel_from_pulse(const HamiltonianModel& model,
                                const PulseProgram& pulse,
                                const GateTarget& target);

std::string rb_report_to_json_string(const RbReport& report);
std::string rb_curves_csv(const RbReport& report);

}  // namespace pulsekit
