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

#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Dense>

namespace pulsekit {

/// Evaluates the objective and writes the gradient in one call.
using BoxObjective =
    std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd& grad)>;

struct BoxMinOptions {
  int memory = 10;
  int max_iters = 1000;
  /// Projected-gradient infinity-norm stopping threshold.
  double grad_tol = 1e-9;
  /// Stop as soon as f drops to or below this value.
  double f_target = -std::numeric_limits<double>::infinity();
  int max_linesearch = 20;
  double wolfe_c1 = 1e-4;
  double wolfe_c2 = 0.9;
};

enum class BoxMinStatus { target_reached, grad_tol, iter_limit, line_search_failure };

struct BoxMinResult {
  Eigen::VectorXd x;
  double f = 0.0;
  Eigen::VectorXd grad;
  /// Objective value of each accepted iterate, starting with the initial point.
  std::vector<double> f_trace;
  BoxMinStatus status = BoxMinStatus::iter_limit;
  int iterations = 0;
  long n_evals = 0;
};

/// Box-constrained L-BFGS-B: gradient projection identifies the active set,
/// a limited-memory BFGS step moves the free variables, and a strong-Wolfe
/// line search (capped at the first bound breakpoint) picks the step.
/// Throws NaNCostError if the objective returns a non-finite value.
BoxMinResult minimize_lbfgsb(const BoxObjective& objective, Eigen::VectorXd x0,
                             const Eigen::VectorXd& lower,
                             const Eigen::VectorXd& upper,
                             const BoxMinOptions& options = {});

}  // namespace pulsekit
