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

#include "pulsekit/lbfgsb.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "pulsekit/errors.hpp"

namespace pulsekit {

namespace {

using Eigen::VectorXd;

struct Pair {
  VectorXd s;
  VectorXd y;
  double rho;  // 1 / (y . s)
};

VectorXd clamp_to_box(VectorXd x, const VectorXd& lo, const VectorXd& hi) {
  return x.cwiseMax(lo).cwiseMin(hi);
}

/// ||P(x - g) - x||_inf, the first-order optimality measure on a box.
double projected_gradient_norm(const VectorXd& x, const VectorXd& g,
                               const VectorXd& lo, const VectorXd& hi) {
  double norm = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double step = std::clamp(x[i] - g[i], lo[i], hi[i]) - x[i];
    norm = std::max(norm, std::abs(step));
  }
  return norm;
}

/// Two-loop recursion; returns -H*q for the current memory.
VectorXd two_loop_direction(const std::deque<Pair>& memory, VectorXd q) {
  std::vector<double> alpha(memory.size());
  for (std::size_t i = memory.size(); i-- > 0;) {
    alpha[i] = memory[i].rho * memory[i].s.dot(q);
    q -= alpha[i] * memory[i].y;
  }
  if (!memory.empty()) {
    const Pair& last = memory.back();
    q *= last.s.dot(last.y) / last.y.squaredNorm();
  }
  for (std::size_t i = 0; i < memory.size(); ++i) {
    const double beta = memory[i].rho * memory[i].y.dot(q);
    q += (alpha[i] - beta) * memory[i].s;
  }
  return -q;
}

struct LineEval {
  double f;
  VectorXd g;
  double slope;  // g . d
};

}  // namespace

BoxMinResult minimize_lbfgsb(const BoxObjective& objective, VectorXd x0,
                             const VectorXd& lower, const VectorXd& upper,
                             const BoxMinOptions& options) {
  const Eigen::Index n = x0.size();
  if (lower.size() != n || upper.size() != n) {
    throw DimensionMismatchError("bound vectors do not match variable count");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (lower[i] > upper[i]) {
      throw ValidationError("lower bound exceeds upper bound at index " +
                            std::to_string(i));
    }
  }

  BoxMinResult result;
  result.x = clamp_to_box(std::move(x0), lower, upper);
  result.grad.resize(n);

  auto evaluate = [&](const VectorXd& x, VectorXd& g) {
    const double f = objective(x, g);
    ++result.n_evals;
    if (!std::isfinite(f)) {
      throw NaNCostError("objective returned a non-finite value");
    }
    return f;
  };

  result.f = evaluate(result.x, result.grad);
  result.f_trace.push_back(result.f);

  std::deque<Pair> memory;
  const double bound_eps = 1e-12;

  for (int iter = 1; iter <= options.max_iters; ++iter) {
    if (result.f <= options.f_target) {
      result.status = BoxMinStatus::target_reached;
      return result;
    }
    if (projected_gradient_norm(result.x, result.grad, lower, upper) <=
        options.grad_tol) {
      result.status = BoxMinStatus::grad_tol;
      return result;
    }
    result.iterations = iter;

    // Gradient projection fixes the active set for this iteration.
    std::vector<bool> active(n, false);
    VectorXd masked = result.grad;
    for (Eigen::Index i = 0; i < n; ++i) {
      const bool at_lo = result.x[i] <= lower[i] + bound_eps && result.grad[i] > 0;
      const bool at_hi = result.x[i] >= upper[i] - bound_eps && result.grad[i] < 0;
      if (at_lo || at_hi) {
        active[i] = true;
        masked[i] = 0.0;
      }
    }

    // Keep the search direction feasible: zero it on the active set and
    // wherever it would immediately push a variable out of the box.
    auto project_direction = [&](VectorXd& dir) {
      for (Eigen::Index i = 0; i < n; ++i) {
        if (active[i]) dir[i] = 0.0;
        if (result.x[i] <= lower[i] + bound_eps && dir[i] < 0) dir[i] = 0.0;
        if (result.x[i] >= upper[i] - bound_eps && dir[i] > 0) dir[i] = 0.0;
      }
    };

    VectorXd d = two_loop_direction(memory, masked);
    project_direction(d);
    double slope0 = d.dot(result.grad);
    if (!(slope0 < 0.0)) {
      // Memory no longer models the local curvature; restart from steepest
      // descent on the free variables.
      memory.clear();
      d = -masked;
      project_direction(d);
      slope0 = d.dot(result.grad);
      if (!(slope0 < 0.0)) {
        result.status = BoxMinStatus::grad_tol;
        return result;
      }
    }

    // Largest step keeping every variable inside the box.
    double alpha_bound = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (d[i] > 0) {
        alpha_bound = std::min(alpha_bound, (upper[i] - result.x[i]) / d[i]);
      } else if (d[i] < 0) {
        alpha_bound = std::min(alpha_bound, (lower[i] - result.x[i]) / d[i]);
      }
    }
    alpha_bound = std::max(alpha_bound, 0.0);

    const double f0 = result.f;
    auto phi = [&](double alpha) -> LineEval {
      VectorXd x_trial = clamp_to_box(result.x + alpha * d, lower, upper);
      VectorXd g_trial(n);
      const double f_trial = evaluate(x_trial, g_trial);
      return {f_trial, std::move(g_trial), 0.0};
    };

    const double c1 = options.wolfe_c1;
    const double c2 = options.wolfe_c2;
    auto armijo_ok = [&](double alpha, double f) {
      return f <= f0 + c1 * alpha * slope0;
    };

    double alpha = std::min(1.0, alpha_bound);
    bool accepted = false;
    double f_acc = 0.0;
    VectorXd g_acc;
    double alpha_acc = 0.0;

    // Strong-Wolfe search: bracket then zoom, with the box cap treated as a
    // valid terminal step when it still gives sufficient decrease.
    double alpha_prev = 0.0;
    double f_prev = f0;
    double lo_a = -1.0, hi_a = -1.0;  // zoom bracket
    double f_lo = 0.0;
    bool zooming = false;
    int ls_iters = 0;

    while (ls_iters < options.max_linesearch) {
      ++ls_iters;
      LineEval ev = phi(alpha);
      ev.slope = ev.g.dot(d);

      if (!zooming) {
        if (!armijo_ok(alpha, ev.f) || (ls_iters > 1 && ev.f >= f_prev)) {
          lo_a = alpha_prev;
          hi_a = alpha;
          f_lo = f_prev;
          zooming = true;
        } else if (std::abs(ev.slope) <= -c2 * slope0) {
          accepted = true;
        } else if (ev.slope >= 0.0) {
          lo_a = alpha;
          hi_a = alpha_prev;
          f_lo = ev.f;
          zooming = true;
        } else if (alpha >= alpha_bound * (1.0 - 1e-12)) {
          // Hit the box; curvature cannot improve further along d.
          accepted = true;
        } else {
          alpha_prev = alpha;
          f_prev = ev.f;
          alpha = std::min(2.0 * alpha, alpha_bound);
          continue;
        }
      } else {
        if (!armijo_ok(alpha, ev.f) || ev.f >= f_lo) {
          hi_a = alpha;
        } else if (std::abs(ev.slope) <= -c2 * slope0) {
          accepted = true;
        } else {
          if (ev.slope * (hi_a - lo_a) >= 0.0) hi_a = lo_a;
          lo_a = alpha;
          f_lo = ev.f;
        }
      }

      if (accepted) {
        f_acc = ev.f;
        g_acc = std::move(ev.g);
        alpha_acc = alpha;
        break;
      }
      if (zooming) {
        if (std::abs(hi_a - lo_a) <= 1e-14 * std::max(1.0, std::abs(lo_a))) {
          // Bracket collapsed; take the best admissible end if it decreases f.
          if (armijo_ok(lo_a, f_lo) && lo_a > 0.0) {
            LineEval best = phi(lo_a);
            f_acc = best.f;
            g_acc = std::move(best.g);
            alpha_acc = lo_a;
            accepted = true;
          }
          break;
        }
        alpha = 0.5 * (lo_a + hi_a);  // bisection zoom
      }
    }

    if (!accepted) {
      // Fall back to the last Armijo-satisfying point found, if any.
      if (zooming && lo_a > 0.0 && armijo_ok(lo_a, f_lo)) {
        LineEval best = phi(lo_a);
        f_acc = best.f;
        g_acc = std::move(best.g);
        alpha_acc = lo_a;
        accepted = true;
      }
    }
    if (!accepted || alpha_acc <= 0.0) {
      result.status = BoxMinStatus::line_search_failure;
      return result;
    }

    VectorXd x_new = clamp_to_box(result.x + alpha_acc * d, lower, upper);
    VectorXd s = x_new - result.x;
    VectorXd y = g_acc - result.grad;
    const double sy = s.dot(y);
    if (sy > 1e-10 * s.norm() * y.norm()) {
      memory.push_back({std::move(s), std::move(y), 1.0 / sy});
      if (static_cast<int>(memory.size()) > options.memory) memory.pop_front();
    }

    result.x = std::move(x_new);
    result.f = f_acc;
    result.grad = std::move(g_acc);
    result.f_trace.push_back(result.f);
  }

  if (result.f <= options.f_target) {
    result.status = BoxMinStatus::target_reached;
  } else {
    result.status = BoxMinStatus::iter_limit;
  }
  return result;
}

}  // namespace pulsekit
