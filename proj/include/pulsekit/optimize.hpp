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
#include <string>
#include <vector>

#include "pulsekit/model.hpp"
#include "pulsekit/propagate.hpp"
#include "pulsekit/pulse.hpp"

namespace pulsekit {

enum class OptMethod { lbfgsb, spsa };
enum class Termination { target_reached, grad_tol, iter_limit, line_search_failure };

OptMethod opt_method_from_string(const std::string& name);
std::string to_string(Termination t);

/// SPSA gain-sequence parameters: a_k = a/(A+k+1)^alpha, c_k = c/(k+1)^gamma.
/// a == 0 auto-tunes the first step to ~0.01; A == 0 becomes 0.1*max_iters.
struct SpsaParams {
  double a = 0.0;
  double c = 0.01;
  double big_a = 0.0;
  double alpha = 0.602;
  double gamma = 0.101;
};

struct OptConfig {
  OptMethod method = OptMethod::lbfgsb;
  int max_iters = 200;
  double fid_err_target = 1e-10;
  double grad_tol = 1e-9;
  int lbfgs_memory = 10;
  SpsaParams spsa;
  std::uint64_t seed = 0;
  /// Central finite-difference step for open-system gradients.
  double fd_step = 1e-7;

  void validate() const;
};

struct OptResult {
  PulseProgram pulse;
  std::vector<double> infidelity_trace;  // accepted iterates, initial first
  double final_infidelity = 1.0;
  Termination termination = Termination::iter_limit;
  long n_cost_evals = 0;
  long n_grad_evals = 0;
  /// Wall-clock statistics; kept out of serialized artifacts so identical
  /// seeded runs stay byte-identical.
  double wall_seconds = 0.0;
};

/// Exact GRAPE gradient of the closed-system gate infidelity with respect
/// to every pulse amplitude, one row per control, one column per slot.
/// Exactness comes from the eigendecomposition Frechet derivative of each
/// slot propagator. Throws OpenSystemExactGradientUnsupportedError for
/// models with collapse operators (those use finite differences inside the
/// optimizers instead).
Eigen::MatrixXd grape_gradient(const HamiltonianModel& model,
                               const PulseProgram& pulse,
                               const GateTarget& target);

/// Infidelity of a flat amplitude vector (control-major layout) without
/// bounds checking; shared by the optimizers and test oracles.
double pulse_vector_infidelity(const HamiltonianModel& model,
                               const PulseProgram& reference,
                               const GateTarget& target,
                               const Eigen::VectorXd& amplitudes);

OptResult optimize_lbfgsb(const HamiltonianModel& model,
                          const PulseProgram& pulse0, const GateTarget& target,
                          const OptConfig& cfg);

OptResult optimize_spsa(const HamiltonianModel& model, const PulseProgram& pulse0,
                        const GateTarget& target, const OptConfig& cfg);

/// Dispatches on cfg.method.
OptResult optimize_pulse(const HamiltonianModel& model, const PulseProgram& pulse0,
                         const GateTarget& target, const OptConfig& cfg);

}  // namespace pulsekit
