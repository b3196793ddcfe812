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

#include "pulsekit/optimize.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include "pulsekit/errors.hpp"
#include "pulsekit/lbfgsb.hpp"

namespace pulsekit {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

double sinc(double x) {
  if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

/// Pulse amplitudes flattened control-major: x[i*n_slots + k].
VectorXd flatten(const PulseProgram& p, const HamiltonianModel& model) {
  const Eigen::Index n = p.n_slots();
  VectorXd x(static_cast<Eigen::Index>(model.controls.size()) * n);
  for (std::size_t i = 0; i < model.controls.size(); ++i) {
    const PulseChannel* ch = p.channel(model.controls[i].first);
    if (ch == nullptr) {
      throw LabelMismatchError("pulse is missing channel for control " +
                               model.controls[i].first);
    }
    x.segment(static_cast<Eigen::Index>(i) * n, n) = ch->samples;
  }
  return x;
}

PulseProgram unflatten(const VectorXd& x, const PulseProgram& reference,
                       const HamiltonianModel& model) {
  PulseProgram p = reference;
  const Eigen::Index n = reference.n_slots();
  for (std::size_t i = 0; i < model.controls.size(); ++i) {
    for (auto& ch : p.channels) {
      if (ch.label == model.controls[i].first) {
        ch.samples = x.segment(static_cast<Eigen::Index>(i) * n, n);
      }
    }
  }
  return p;
}

void bound_vectors(const PulseProgram& p, const HamiltonianModel& model,
                   VectorXd& lo, VectorXd& hi) {
  const Eigen::Index n = p.n_slots();
  lo.resize(static_cast<Eigen::Index>(model.controls.size()) * n);
  hi.resize(lo.size());
  for (std::size_t i = 0; i < model.controls.size(); ++i) {
    const PulseChannel* ch = p.channel(model.controls[i].first);
    lo.segment(static_cast<Eigen::Index>(i) * n, n).setConstant(ch->bounds.lo);
    hi.segment(static_cast<Eigen::Index>(i) * n, n).setConstant(ch->bounds.hi);
  }
}

/// Closed-system cost and exact gradient in the flattened layout.
class ClosedCost {
 public:
  ClosedCost(const HamiltonianModel& model, const GateTarget& target, double dt,
             Eigen::Index n_slots)
      : model_(model), target_(target), dt_(dt), n_(n_slots) {
    if (model.open_system()) {
      throw OpenSystemExactGradientUnsupportedError(
          "exact GRAPE gradients require a closed-system model");
    }
    if (model.dim != target.dim()) {
      throw DimensionMismatchError("model and target dimensions differ");
    }
  }

  Eigen::Index size() const {
    return static_cast<Eigen::Index>(model_.controls.size()) * n_;
  }

  double cost(const VectorXd& x) const {
    const Eigen::Index d = model_.dim;
    CMatrix u_total = identity(d);
    for (Eigen::Index k = 0; k < n_; ++k) {
      u_total = expm_hermitian_scaled(slot_h(x, k), complexd(0, -dt_)) * u_total;
    }
    const complexd z = (target_.unitary.adjoint() * u_total).trace();
    return 1.0 - std::norm(z) / target_.norm();
  }

  double cost_grad(const VectorXd& x, VectorXd& grad) const {
    const Eigen::Index d = model_.dim;
    const std::size_t n_ctrl = model_.controls.size();

    std::vector<EigHermitian> eigs(n_);
    std::vector<CMatrix> props(n_);
    for (Eigen::Index k = 0; k < n_; ++k) {
      eigs[k] = eig_hermitian(slot_h(x, k));
      CVector phases(d);
      for (Eigen::Index a = 0; a < d; ++a) {
        phases[a] = std::exp(complexd(0, -dt_ * eigs[k].values[a]));
      }
      props[k] = eigs[k].vectors * phases.asDiagonal() * eigs[k].vectors.adjoint();
    }

    // Cumulative products: fwd[k] = U_k ... U_1 (fwd[0] = I) and
    // bwd[k] = U_M ... U_{k+1} (bwd[n] = I).
    std::vector<CMatrix> fwd(n_ + 1), bwd(n_ + 1);
    fwd[0] = identity(d);
    for (Eigen::Index k = 0; k < n_; ++k) fwd[k + 1] = props[k] * fwd[k];
    bwd[n_] = identity(d);
    for (Eigen::Index k = n_ - 1; k >= 0; --k) bwd[k] = bwd[k + 1] * props[k];

    const complexd z = (target_.unitary.adjoint() * fwd[n_]).trace();
    const double cost = 1.0 - std::norm(z) / target_.norm();

    grad.resize(size());
    CMatrix freq(d, d);
    for (Eigen::Index k = 0; k < n_; ++k) {
      const CMatrix& v = eigs[k].vectors;
      const RVector& lam = eigs[k].values;
      // Divided differences of exp(-i lam dt) in a cancellation-free form.
      for (Eigen::Index a = 0; a < d; ++a) {
        for (Eigen::Index b = 0; b < d; ++b) {
          const double mean = 0.5 * (lam[a] + lam[b]);
          const double half_gap = 0.5 * (lam[a] - lam[b]) * dt_;
          freq(a, b) = complexd(0, -dt_) * std::exp(complexd(0, -dt_ * mean)) *
                       sinc(half_gap);
        }
      }
      const CMatrix x_k = fwd[k] * target_.unitary.adjoint() * bwd[k + 1];
      const CMatrix y = (v.adjoint() * x_k * v).transpose();
      for (std::size_t i = 0; i < n_ctrl; ++i) {
        const CMatrix gi = v.adjoint() * model_.controls[i].second * v;
        const complexd dz = y.cwiseProduct(freq).cwiseProduct(gi).sum();
        grad[static_cast<Eigen::Index>(i) * n_ + k] =
            -2.0 / target_.norm() * (std::conj(z) * dz).real();
      }
    }
    return cost;
  }

 private:
  CMatrix slot_h(const VectorXd& x, Eigen::Index k) const {
    CMatrix h = model_.drift;
    for (std::size_t i = 0; i < model_.controls.size(); ++i) {
      h += x[static_cast<Eigen::Index>(i) * n_ + k] * model_.controls[i].second;
    }
    return h;
  }

  const HamiltonianModel& model_;
  const GateTarget& target_;
  double dt_;
  Eigen::Index n_;
};

/// Open-system cost via the Lindblad superoperator product.
class OpenCost {
 public:
  OpenCost(const HamiltonianModel& model, const GateTarget& target, double dt,
           Eigen::Index n_slots)
      : model_(model), target_superop_(unitary_superop(target.unitary)),
        norm_(target.norm()), dt_(dt), n_(n_slots) {}

  double cost(const VectorXd& x) const {
    const Eigen::Index d = model_.dim;
    CMatrix s_total = identity(d * d);
    for (Eigen::Index k = 0; k < n_; ++k) {
      CMatrix h = model_.drift;
      for (std::size_t i = 0; i < model_.controls.size(); ++i) {
        h += x[static_cast<Eigen::Index>(i) * n_ + k] * model_.controls[i].second;
      }
      s_total = expm_general(dt_ * lindblad_superop(h, model_.collapse_ops)) * s_total;
    }
    const double fid = (target_superop_.adjoint() * s_total).trace().real() / norm_;
    return std::clamp(1.0 - fid, 0.0, 1.0);
  }

 private:
  const HamiltonianModel& model_;
  CMatrix target_superop_;
  double norm_;
  double dt_;
  Eigen::Index n_;
};

Termination to_termination(BoxMinStatus status) {
  switch (status) {
    case BoxMinStatus::target_reached: return Termination::target_reached;
    case BoxMinStatus::grad_tol: return Termination::grad_tol;
    case BoxMinStatus::iter_limit: return Termination::iter_limit;
    case BoxMinStatus::line_search_failure: return Termination::line_search_failure;
  }
  return Termination::iter_limit;
}

}  // namespace

OptMethod opt_method_from_string(const std::string& name) {
  if (name == "lbfgsb") return OptMethod::lbfgsb;
  if (name == "spsa") return OptMethod::spsa;
  throw UsageError("unknown optimizer '" + name + "'; expected lbfgsb or spsa");
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::target_reached: return "target_reached";
    case Termination::grad_tol: return "grad_tol";
    case Termination::iter_limit: return "iter_limit";
    case Termination::line_search_failure: return "line_search_failure";
  }
  return "iter_limit";
}

void OptConfig::validate() const {
  if (!(fid_err_target > 0.0 && fid_err_target < 1.0)) {
    throw ValidationError("fid_err_target must lie in (0, 1)");
  }
  if (max_iters < 1) throw ValidationError("max_iters must be >= 1");
}

Eigen::MatrixXd grape_gradient(const HamiltonianModel& model,
                               const PulseProgram& pulse,
                               const GateTarget& target) {
  pulse.validate();
  const Eigen::Index n = pulse.n_slots();
  ClosedCost evaluator(model, target, pulse.dt, n);
  const VectorXd x = flatten(pulse, model);
  VectorXd grad;
  evaluator.cost_grad(x, grad);
  const Eigen::Index n_ctrl = static_cast<Eigen::Index>(model.controls.size());
  MatrixXd out(n_ctrl, n);
  for (Eigen::Index i = 0; i < n_ctrl; ++i) {
    out.row(i) = grad.segment(i * n, n).transpose();
  }
  return out;
}

double pulse_vector_infidelity(const HamiltonianModel& model,
                               const PulseProgram& reference,
                               const GateTarget& target,
                               const Eigen::VectorXd& amplitudes) {
  const Eigen::Index n = reference.n_slots();
  if (model.open_system()) {
    return OpenCost(model, target, reference.dt, n).cost(amplitudes);
  }
  return ClosedCost(model, target, reference.dt, n).cost(amplitudes);
}

OptResult optimize_lbfgsb(const HamiltonianModel& model,
                          const PulseProgram& pulse0, const GateTarget& target,
                          const OptConfig& cfg) {
  cfg.validate();
  pulse0.validate();
  const auto wall_start = std::chrono::steady_clock::now();
  const Eigen::Index n = pulse0.n_slots();
  VectorXd lo, hi;
  bound_vectors(pulse0, model, lo, hi);

  OptResult result;
  BoxObjective objective;
  if (model.open_system()) {
    // Exact Lindblad gradients are out of proportion for these dimensions;
    // use central finite differences over the superoperator cost.
    OpenCost evaluator(model, target, pulse0.dt, n);
    objective = [&result, evaluator, step = cfg.fd_step](const VectorXd& x,
                                                         VectorXd& grad) {
      grad.resize(x.size());
      VectorXd probe = x;
      for (Eigen::Index j = 0; j < x.size(); ++j) {
        probe[j] = x[j] + step;
        const double fp = evaluator.cost(probe);
        probe[j] = x[j] - step;
        const double fm = evaluator.cost(probe);
        probe[j] = x[j];
        grad[j] = (fp - fm) / (2.0 * step);
      }
      result.n_cost_evals += 2 * x.size() + 1;
      ++result.n_grad_evals;
      return evaluator.cost(x);
    };
  } else {
    auto evaluator = std::make_shared<ClosedCost>(model, target, pulse0.dt, n);
    objective = [&result, evaluator](const VectorXd& x, VectorXd& grad) {
      ++result.n_cost_evals;
      ++result.n_grad_evals;
      return evaluator->cost_grad(x, grad);
    };
  }

  BoxMinOptions options;
  options.memory = cfg.lbfgs_memory;
  options.max_iters = cfg.max_iters;
  options.grad_tol = cfg.grad_tol;
  options.f_target = cfg.fid_err_target;
  const BoxMinResult min = minimize_lbfgsb(objective, flatten(pulse0, model),
                                           lo, hi, options);

  result.pulse = unflatten(min.x, pulse0, model);
  result.infidelity_trace = min.f_trace;
  result.final_infidelity = min.f;
  result.termination = to_termination(min.status);
  result.wall_seconds = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - wall_start)
                            .count();
  return result;
}

OptResult optimize_spsa(const HamiltonianModel& model, const PulseProgram& pulse0,
                        const GateTarget& target, const OptConfig& cfg) {
  cfg.validate();
  pulse0.validate();
  const auto wall_start = std::chrono::steady_clock::now();
  const Eigen::Index n = pulse0.n_slots();
  VectorXd lo, hi;
  bound_vectors(pulse0, model, lo, hi);

  OptResult result;
  long cost_evals = 0;
  std::function<double(const VectorXd&)> cost;
  if (model.open_system()) {
    OpenCost evaluator(model, target, pulse0.dt, n);
    cost = [evaluator, &cost_evals](const VectorXd& x) {
      ++cost_evals;
      return evaluator.cost(x);
    };
  } else {
    auto evaluator = std::make_shared<ClosedCost>(model, target, pulse0.dt, n);
    cost = [evaluator, &cost_evals](const VectorXd& x) {
      ++cost_evals;
      return evaluator->cost(x);
    };
  }
  auto checked = [&cost](const VectorXd& x) {
    const double f = cost(x);
    if (!std::isfinite(f)) throw NaNCostError("SPSA cost is non-finite");
    return f;
  };

  std::mt19937_64 rng(cfg.seed);
  auto rademacher = [&rng](Eigen::Index size) {
    VectorXd delta(size);
    for (Eigen::Index i = 0; i < size; ++i) {
      delta[i] = (rng() & 1ull) ? 1.0 : -1.0;
    }
    return delta;
  };

  VectorXd x = flatten(pulse0, model).cwiseMax(lo).cwiseMin(hi);
  double f = checked(x);
  VectorXd best_x = x;
  double best_f = f;
  result.infidelity_trace.push_back(f);

  SpsaParams p = cfg.spsa;
  if (p.big_a <= 0.0) p.big_a = 0.1 * cfg.max_iters;
  if (p.a <= 0.0) {
    // Calibrate `a` so the first update has magnitude ~0.01 per coordinate.
    double mean_mag = 0.0;
    const int probes = 3;
    for (int t = 0; t < probes; ++t) {
      const VectorXd delta = rademacher(x.size());
      const double fp = checked(x + p.c * delta);
      const double fm = checked(x - p.c * delta);
      mean_mag += std::abs((fp - fm) / (2.0 * p.c)) / probes;
    }
    p.a = mean_mag > 1e-12
              ? 0.01 * std::pow(p.big_a + 1.0, p.alpha) / mean_mag
              : 0.01;
  }

  Termination termination = Termination::iter_limit;
  for (int k = 0; k < cfg.max_iters; ++k) {
    if (best_f <= cfg.fid_err_target) {
      termination = Termination::target_reached;
      break;
    }
    const double ak = p.a / std::pow(p.big_a + k + 1.0, p.alpha);
    const double ck = p.c / std::pow(k + 1.0, p.gamma);
    const VectorXd delta = rademacher(x.size());
    const double fp = checked(x + ck * delta);
    const double fm = checked(x - ck * delta);
    const double scale = (fp - fm) / (2.0 * ck);
    // 1/delta_i == delta_i for Rademacher perturbations.
    x = (x - ak * scale * delta).cwiseMax(lo).cwiseMin(hi);
    f = checked(x);
    result.infidelity_trace.push_back(f);
    if (f < best_f) {
      best_f = f;
      best_x = x;
    }
  }
  if (best_f <= cfg.fid_err_target) termination = Termination::target_reached;

  result.pulse = unflatten(best_x, pulse0, model);
  result.final_infidelity = best_f;
  result.termination = termination;
  result.n_cost_evals = cost_evals;
  result.n_grad_evals = 0;
  result.wall_seconds = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - wall_start)
                            .count();
  return result;
}

OptResult optimize_pulse(const HamiltonianModel& model, const PulseProgram& pulse0,
                         const GateTarget& target, const OptConfig& cfg) {
  return cfg.method == OptMethod::lbfgsb
             ? optimize_lbfgsb(model, pulse0, target, cfg)
             : optimize_spsa(model, pulse0, target, cfg);
}

}  // namespace pulsekit
