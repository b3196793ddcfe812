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

#include "pulsekit/bench.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "pulsekit/errors.hpp"
#include "pulsekit/jsonio.hpp"

namespace pulsekit {

namespace {

constexpr double kTpTol = 1e-10;
constexpr double kChoiTol = -1e-9;

/// splitmix64; decorrelates per-sequence RNG streams from a master seed.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ull * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

NoiseChannel make_validated(ChannelKind kind, CMatrix superop) {
  double tp_error = 0.0;
  double choi_min = 0.0;
  cptp_check(superop, &tp_error, &choi_min);
  if (tp_error > kTpTol) {
    throw ValidationError("channel is not trace preserving (defect " +
                          std::to_string(tp_error) + ")");
  }
  if (choi_min < kChoiTol) {
    throw ValidationError("channel is not completely positive (Choi eig " +
                          std::to_string(choi_min) + ")");
  }
  NoiseChannel ch;
  ch.kind = kind;
  ch.superop = std::move(superop);
  return ch;
}

}  // namespace

Eigen::Index NoiseChannel::dim() const {
  return static_cast<Eigen::Index>(std::llround(std::sqrt(
      static_cast<double>(superop.rows()))));
}

NoiseChannel NoiseChannel::identity_channel(Eigen::Index d) {
  NoiseChannel ch = make_validated(ChannelKind::identity, identity(d * d));
  return ch;
}

NoiseChannel NoiseChannel::depolarizing(Eigen::Index d, double p) {
  if (p < 0.0 || p > 1.0) throw ValidationError("depolarizing p must lie in [0, 1]");
  const CVector vec_id = vec(identity(d));
  CMatrix s = (1.0 - p) * identity(d * d) +
              (p / static_cast<double>(d)) * (vec_id * vec_id.adjoint());
  NoiseChannel ch = make_validated(ChannelKind::depolarizing, std::move(s));
  ch.p = p;
  return ch;
}

NoiseChannel NoiseChannel::amplitude_damping(double gamma) {
  if (gamma < 0.0 || gamma > 1.0) throw ValidationError("gamma must lie in [0, 1]");
  CMatrix k0(2, 2), k1(2, 2);
  k0 << 1, 0, 0, std::sqrt(1.0 - gamma);
  k1 << 0, std::sqrt(gamma), 0, 0;
  CMatrix s = kron(k0.conjugate(), k0) + kron(k1.conjugate(), k1);
  NoiseChannel ch = make_validated(ChannelKind::amplitude_damping, std::move(s));
  ch.gamma = gamma;
  return ch;
}

NoiseChannel NoiseChannel::dephasing(double lambda) {
  if (lambda < 0.0 || lambda > 1.0) throw ValidationError("lambda must lie in [0, 1]");
  const CMatrix z = sigma_z();
  CMatrix s = (1.0 - lambda) * identity(4) + lambda * kron(z.conjugate(), z);
  NoiseChannel ch = make_validated(ChannelKind::dephasing, std::move(s));
  ch.lambda = lambda;
  return ch;
}

NoiseChannel NoiseChannel::composed(const std::vector<NoiseChannel>& channels) {
  if (channels.empty()) throw ValidationError("cannot compose zero channels");
  CMatrix s = channels.front().superop;
  for (std::size_t i = 1; i < channels.size(); ++i) {
    if (channels[i].superop.rows() != s.rows()) {
      throw DimensionMismatchError("composed channels must share a dimension");
    }
    s = channels[i].superop * s;
  }
  return make_validated(ChannelKind::composed, std::move(s));
}

NoiseChannel NoiseChannel::from_superop(ChannelKind kind, CMatrix superop) {
  return make_validated(kind, std::move(superop));
}

CMatrix choi_from_superop(const CMatrix& superop) {
  const Eigen::Index d = static_cast<Eigen::Index>(
      std::llround(std::sqrt(static_cast<double>(superop.rows()))));
  if (d * d != superop.rows() || superop.rows() != superop.cols()) {
    throw DimensionMismatchError("superoperator must be d^2 x d^2");
  }
  CMatrix choi(d * d, d * d);
  // J[(i d + r),(j d + s)] = S[(s d + r),(j d + i)] in column stacking.
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index r = 0; r < d; ++r) {
      for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index s = 0; s < d; ++s) {
          choi(i * d + r, j * d + s) = superop(s * d + r, j * d + i);
        }
      }
    }
  }
  return choi;
}

void cptp_check(const CMatrix& superop, double* tp_error, double* choi_min_eig) {
  const Eigen::Index d = static_cast<Eigen::Index>(
      std::llround(std::sqrt(static_cast<double>(superop.rows()))));
  const CVector vec_id = vec(identity(d));
  if (tp_error != nullptr) {
    *tp_error = (superop.adjoint() * vec_id - vec_id).cwiseAbs().maxCoeff();
  }
  if (choi_min_eig != nullptr) {
    CMatrix choi = choi_from_superop(superop);
    // The Choi matrix is Hermitian up to roundoff; symmetrize before solving.
    choi = 0.5 * (choi + choi.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(choi);
    if (solver.info() != Eigen::Success) {
      throw NoConvergenceError("Choi eigendecomposition failed");
    }
    *choi_min_eig = solver.eigenvalues().minCoeff();
  }
}

double channel_process_infidelity(const NoiseChannel& channel) {
  const double d2 = static_cast<double>(channel.superop.rows());
  const double fid = channel.superop.trace().real() / d2;
  return std::clamp(1.0 - fid, 0.0, 1.0);
}

DecayFit fit_rb_decay(const std::vector<double>& lengths,
                      const std::vector<double>& survival, double amplitude0,
                      double baseline0, double alpha0) {
  if (lengths.size() != survival.size() || lengths.size() < 3) {
    throw InsufficientLengthsError("decay fit needs at least 3 points");
  }
  const int n = static_cast<int>(lengths.size());

  const auto [min_it, max_it] = std::minmax_element(survival.begin(), survival.end());
  if (*max_it - *min_it < 1e-12) {
    // Perfectly flat curve: alpha = 1 exactly, no decaying component.
    DecayFit fit;
    fit.amplitude = 0.0;
    fit.baseline = std::accumulate(survival.begin(), survival.end(), 0.0) / n;
    fit.alpha = 1.0;
    fit.converged = true;
    return fit;
  }

  Eigen::Vector3d theta(amplitude0, baseline0, alpha0);
  auto residuals = [&](const Eigen::Vector3d& t, Eigen::VectorXd& r,
                       Eigen::MatrixXd* jac) {
    r.resize(n);
    if (jac != nullptr) jac->resize(n, 3);
    for (int i = 0; i < n; ++i) {
      const double am = std::pow(t[2], lengths[i]);
      r[i] = t[0] * am + t[1] - survival[i];
      if (jac != nullptr) {
        (*jac)(i, 0) = am;
        (*jac)(i, 1) = 1.0;
        (*jac)(i, 2) = t[0] * lengths[i] * std::pow(t[2], lengths[i] - 1.0);
      }
    }
  };

  // Levenberg-Marquardt with adaptive damping.
  Eigen::VectorXd r;
  Eigen::MatrixXd jac;
  residuals(theta, r, &jac);
  double ssr = r.squaredNorm();
  double damping = 1e-3;
  bool converged = false;
  for (int iter = 0; iter < 200; ++iter) {
    const Eigen::Matrix3d jtj = jac.transpose() * jac;
    const Eigen::Vector3d jtr = jac.transpose() * r;
    Eigen::Matrix3d lhs = jtj;
    lhs.diagonal() += damping * jtj.diagonal().cwiseMax(1e-12);
    const Eigen::Vector3d step = lhs.ldlt().solve(-jtr);
    Eigen::Vector3d trial = theta + step;
    trial[2] = std::clamp(trial[2], 0.0, 1.0);
    Eigen::VectorXd r_trial;
    residuals(trial, r_trial, nullptr);
    const double ssr_trial = r_trial.squaredNorm();
    if (std::isfinite(ssr_trial) && ssr_trial < ssr) {
      const double improvement = ssr - ssr_trial;
      theta = trial;
      ssr = ssr_trial;
      residuals(theta, r, &jac);
      damping = std::max(damping * 0.3, 1e-12);
      if (improvement < 1e-16 * (1.0 + ssr) || step.norm() < 1e-13) {
        converged = true;
        break;
      }
    } else {
      damping *= 10.0;
      if (damping > 1e12) break;
    }
  }
  if (!std::isfinite(ssr)) {
    throw FitDivergenceError("decay fit produced non-finite residuals");
  }
  // Near-zero final gradients also count as converged.
  if (!converged) {
    const Eigen::Vector3d jtr = jac.transpose() * r;
    converged = jtr.norm() < 1e-8 * (1.0 + ssr);
  }

  DecayFit fit;
  fit.amplitude = theta[0];
  fit.baseline = theta[1];
  fit.alpha = theta[2];
  fit.converged = converged;
  const Eigen::Matrix3d jtj = jac.transpose() * jac;
  const auto lu = jtj.fullPivLu();
  if (lu.isInvertible()) {
    const double dof = std::max(1, n - 3);
    const Eigen::Matrix3d cov = (ssr / dof) * lu.inverse();
    auto sane = [](double v) { return std::isfinite(v) && v > 0.0 ? std::sqrt(v) : 0.0; };
    fit.amplitude_err = sane(cov(0, 0));
    fit.baseline_err = sane(cov(1, 1));
    fit.alpha_err = sane(cov(2, 2));
  }
  return fit;
}

namespace {

struct SequenceOutcome {
  double survival_std = 0.0;
  double survival_int = 0.0;
};

/// One random sequence of length m, evaluated for the standard curve and
/// (when requested) the interleaved curve built from the same Cliffords.
SequenceOutcome run_sequence(int m, int n_qubits, const NoiseChannel& noise,
                             const InterleavedGate* inter,
                             const RbConfig& cfg, std::mt19937_64& rng) {
  const Eigen::Index d = n_qubits == 1 ? 2 : 4;
  std::vector<CMatrix> cliffords;
  cliffords.reserve(m);
  for (int j = 0; j < m; ++j) {
    cliffords.push_back(sample_clifford(n_qubits, rng).unitary);
  }

  CMatrix rho0 = CMatrix::Zero(d, d);
  rho0(0, 0) = 1.0;
  if (cfg.spam_prep.has_value()) {
    rho0 = apply_superop(cfg.spam_prep->superop, rho0);
  }

  auto survival = [&](bool interleave) {
    CMatrix rho = rho0;
    CMatrix net = identity(d);
    for (int j = 0; j < m; ++j) {
      rho = cliffords[j] * rho * cliffords[j].adjoint();
      rho = apply_superop(noise.superop, rho);
      net = cliffords[j] * net;
      if (interleave) {
        rho = inter->unitary * rho * inter->unitary.adjoint();
        rho = apply_superop(inter->channel.superop, rho);
        net = inter->unitary * net;
      }
    }
    // Exact inverse of the whole sequence, applied noise-free.
    rho = net.adjoint() * rho * net;
    if (cfg.spam_meas.has_value()) {
      rho = apply_superop(cfg.spam_meas->superop, rho);
    }
    return std::clamp(rho(0, 0).real(), 0.0, 1.0);
  };

  SequenceOutcome out;
  out.survival_std = survival(false);
  if (inter != nullptr) out.survival_int = survival(true);
  return out;
}

double binomial_mean(double p, long shots, std::mt19937_64& rng) {
  std::binomial_distribution<long> dist(shots, p);
  return static_cast<double>(dist(rng)) / static_cast<double>(shots);
}

}  // namespace

RbReport run_rb(const NoiseChannel& noise_per_clifford,
                const std::optional<InterleavedGate>& interleaved,
                const RbConfig& cfg) {
  const Eigen::Index d = noise_per_clifford.dim();
  if (d != 2 && d != 4) {
    throw ValidationError("run_rb supports single- or two-qubit channels");
  }
  const int n_qubits = d == 2 ? 1 : 2;
  if (interleaved.has_value() && interleaved->unitary.rows() != d) {
    throw DimensionMismatchError("interleaved gate dimension does not match noise");
  }
  if (cfg.lengths.size() < 3) {
    throw InsufficientLengthsError("need at least 3 distinct sequence lengths");
  }
  for (std::size_t i = 0; i + 1 < cfg.lengths.size(); ++i) {
    if (cfg.lengths[i + 1] <= cfg.lengths[i]) {
      throw ValidationError("sequence lengths must be strictly ascending");
    }
  }
  if (cfg.lengths.front() < 1) throw ValidationError("sequence lengths must be >= 1");
  if (cfg.n_seeds < 1) throw ValidationError("n_seeds must be >= 1");

  const int n_len = static_cast<int>(cfg.lengths.size());
  const InterleavedGate* inter =
      interleaved.has_value() ? &interleaved.value() : nullptr;

  // survivals[curve][length][seed]
  std::vector<std::vector<double>> surv_std(n_len,
                                            std::vector<double>(cfg.n_seeds));
  std::vector<std::vector<double>> surv_int(n_len,
                                            std::vector<double>(cfg.n_seeds));

  auto worker = [&](int seed_begin, int seed_end) {
    for (int s = seed_begin; s < seed_end; ++s) {
      for (int li = 0; li < n_len; ++li) {
        // Independent, schedule-invariant stream per (length, seed).
        std::mt19937_64 rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(li) *
                                                       1000003ull +
                                                   static_cast<std::uint64_t>(s)));
        SequenceOutcome out = run_sequence(cfg.lengths[li], n_qubits,
                                           noise_per_clifford, inter, cfg, rng);
        if (cfg.shots > 0) {
          out.survival_std = binomial_mean(out.survival_std, cfg.shots, rng);
          if (inter != nullptr) {
            out.survival_int = binomial_mean(out.survival_int, cfg.shots, rng);
          }
        }
        surv_std[li][s] = out.survival_std;
        surv_int[li][s] = out.survival_int;
      }
    }
  };

  const int jobs = std::max(1, cfg.jobs);
  if (jobs == 1 || cfg.n_seeds == 1) {
    worker(0, cfg.n_seeds);
  } else {
    std::vector<std::thread> pool;
    const int chunk = (cfg.n_seeds + jobs - 1) / jobs;
    for (int t = 0; t < jobs; ++t) {
      const int begin = t * chunk;
      const int end = std::min(cfg.n_seeds, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(worker, begin, end);
    }
    for (auto& th : pool) th.join();
  }

  RbReport report;
  report.dim = d;
  report.lengths = cfg.lengths;
  report.interleaved = inter != nullptr;
  auto mean_and_stderr = [&](const std::vector<double>& xs, double* mean,
                             double* se) {
    const double m =
        std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    double var = 0.0;
    for (double x : xs) var += (x - m) * (x - m);
    var = xs.size() > 1 ? var / static_cast<double>(xs.size() - 1) : 0.0;
    *mean = m;
    *se = std::sqrt(var / static_cast<double>(xs.size()));
  };
  std::vector<double> lengths_d(cfg.lengths.begin(), cfg.lengths.end());
  for (int li = 0; li < n_len; ++li) {
    double m = 0.0, se = 0.0;
    mean_and_stderr(surv_std[li], &m, &se);
    report.survival_std.push_back(m);
    report.survival_std_err.push_back(se);
    if (inter != nullptr) {
      mean_and_stderr(surv_int[li], &m, &se);
      report.survival_int.push_back(m);
      report.survival_int_err.push_back(se);
    }
  }

  const double dd = static_cast<double>(d);
  const double a0 = d == 2 ? 0.5 : 0.75;
  const double b0 = d == 2 ? 0.5 : 0.25;
  report.fit_std = fit_rb_decay(lengths_d, report.survival_std, a0, b0, 0.99);
  report.alpha = report.fit_std.alpha;
  report.alpha_err = report.fit_std.alpha_err;
  report.epc = (dd - 1.0) / dd * (1.0 - report.alpha);

  if (inter != nullptr) {
    report.fit_int = fit_rb_decay(lengths_d, report.survival_int, a0, b0, 0.99);
    report.alpha_c = report.fit_int.alpha;
    report.alpha_c_err = report.fit_int.alpha_err;
    const double ratio = report.alpha > 0.0 ? report.alpha_c / report.alpha : 0.0;
    report.interleaved_error = (dd - 1.0) / dd * (1.0 - ratio);
    // First-order propagation through the alpha_c / alpha ratio.
    if (report.alpha > 0.0) {
      const double t1 = report.alpha_c_err / report.alpha;
      const double t2 =
          report.alpha_c * report.alpha_err / (report.alpha * report.alpha);
      report.interleaved_error_err =
          (dd - 1.0) / dd * std::sqrt(t1 * t1 + t2 * t2);
    }
  }
  return report;
}

NoiseChannel channel_from_pulse(const HamiltonianModel& model,
                                const PulseProgram& pulse,
                                const GateTarget& target) {
  CMatrix s_f;
  if (model.open_system()) {
    s_f = propagate_open(model, pulse).final_op;
  } else {
    s_f = unitary_superop(propagate_closed(model, pulse).final_op);
  }
  const CMatrix s_residual = unitary_superop(target.unitary).adjoint() * s_f;
  return NoiseChannel::from_superop(ChannelKind::from_pulse, s_residual);
}

std::string rb_report_to_json_string(const RbReport& report) {
  nlohmann::json j;
  j["dim"] = report.dim;
  j["lengths"] = report.lengths;
  j["survival_std"] = report.survival_std;
  j["survival_std_err"] = report.survival_std_err;
  j["alpha"] = report.alpha;
  j["alpha_err"] = report.alpha_err;
  j["epc"] = report.epc;
  j["fit_std"] = {{"A", report.fit_std.amplitude},
                  {"A_err", report.fit_std.amplitude_err},
                  {"B", report.fit_std.baseline},
                  {"B_err", report.fit_std.baseline_err},
                  {"converged", report.fit_std.converged}};
  j["interleaved"] = report.interleaved;
  if (report.interleaved) {
    j["survival_int"] = report.survival_int;
    j["survival_int_err"] = report.survival_int_err;
    j["alpha_c"] = report.alpha_c;
    j["alpha_c_err"] = report.alpha_c_err;
    j["interleaved_error"] = report.interleaved_error;
    j["interleaved_error_err"] = report.interleaved_error_err;
    j["fit_int"] = {{"A", report.fit_int.amplitude},
                    {"A_err", report.fit_int.amplitude_err},
                    {"B", report.fit_int.baseline},
                    {"B_err", report.fit_int.baseline_err},
                    {"converged", report.fit_int.converged}};
  }
  return canonical_dump(j);
}

std::string rb_curves_csv(const RbReport& report) {
  std::ostringstream out;
  out << "length,mean_survival,stderr,curve\n";
  out.precision(17);
  for (std::size_t i = 0; i < report.lengths.size(); ++i) {
    out << report.lengths[i] << "," << report.survival_std[i] << ","
        << report.survival_std_err[i] << ",standard\n";
  }
  if (report.interleaved) {
    for (std::size_t i = 0; i < report.lengths.size(); ++i) {
      out << report.lengths[i] << "," << report.survival_int[i] << ","
          << report.survival_int_err[i] << ",interleaved\n";
    }
  }
  return out.str();
}

}  // namespace pulsekit
