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
//
// Acceptance suite: each numbered check prints one PASS/FAIL line with the
// measured values pinned against its stated tolerance.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "pulsekit/bench.hpp"
#include "pulsekit/jsonio.hpp"
#include "pulsekit/model.hpp"
#include "pulsekit/optimize.hpp"
#include "pulsekit/propagate.hpp"
#include "pulsekit/pulse.hpp"
#include "pulsekit/schedule.hpp"

namespace fs = std::filesystem;
using namespace pulsekit;

namespace {

int g_failures = 0;

void report(int id, bool pass, const std::string& label,
            const std::string& detail, double seconds) {
  std::printf("[%s] criterion %d: %s (%s; %.1fs)\n", pass ? "PASS" : "FAIL", id,
              label.c_str(), detail.c_str(), seconds);
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

DeviceSpec montreal_like() {
  DeviceSpec spec;
  spec.qubits.push_back({4.911, -0.33, 86.76, 71.5});
  spec.dt_ns = 0.2222;
  spec.levels = 2;
  return spec;
}

DeviceSpec cr_pair() {
  DeviceSpec spec;
  spec.qubits.push_back({4.911, -0.33, 86.76, 71.5});
  spec.qubits.push_back({4.811, -0.33, 83.52, 76.0});
  spec.couplings.push_back({0, 1, 3.0});
  spec.dt_ns = 0.2222;
  spec.levels = 2;
  return spec;
}

PulseProgram drag_start(Eigen::Index n_slots, double dt,
                        const std::vector<std::string>& labels) {
  ShapeSpec shape;
  shape.kind = ShapeKind::drag;
  shape.amplitude = 0.2;
  shape.sigma = static_cast<double>(n_slots) * dt / 8.0;
  return make_initial(shape, n_slots, dt, labels);
}

Eigen::VectorXd flatten_for(const HamiltonianModel& model, const PulseProgram& p) {
  const Eigen::Index n = p.n_slots();
  Eigen::VectorXd x(static_cast<Eigen::Index>(model.controls.size()) * n);
  for (std::size_t i = 0; i < model.controls.size(); ++i) {
    x.segment(static_cast<Eigen::Index>(i) * n, n) =
        p.channel(model.controls[i].first)->samples;
  }
  return x;
}

// --- criterion 1: exact gradients vs central finite differences ------------

void criterion_gradients() {
  Stopwatch watch;
  const double fd_step = 1e-6;
  std::mt19937_64 rng(20260809);
  int checked = 0;
  double worst_rel = 0.0;
  double smallest_checked = 1e300;
  bool pass = true;

  for (int instance = 0; instance < 20; ++instance) {
    const bool two_qubit = instance % 2 == 1;
    const HamiltonianModel model =
        two_qubit ? build_cr_two_qubit(cr_pair(), 0, 1)
                  : build_single_qubit(montreal_like(), 0, {});
    const GateTarget target =
        two_qubit ? make_gate_target("CNOT")
                  : make_gate_target(instance % 4 == 0 ? "X" : "H");
    // Slot counts span 8..64 (the larger ones on the cheaper 2-dim systems).
    const Eigen::Index n_slots = two_qubit ? 8 + 4 * instance : 8 + 7 * instance;
    ShapeSpec shape;
    shape.kind = ShapeKind::random;
    shape.amplitude = 0.8;
    shape.seed = 9000 + instance;
    const PulseProgram pulse =
        make_initial(shape, n_slots, 0.3, model.control_labels());

    const Eigen::MatrixXd exact = grape_gradient(model, pulse, target);
    const oracle::ClosedOracle oracle_eval(model, target.unitary, pulse.dt,
                                           n_slots);
    const Eigen::VectorXd x = flatten_for(model, pulse);
    for (Eigen::Index i = 0; i < exact.rows(); ++i) {
      for (Eigen::Index k = 0; k < n_slots; ++k) {
        const double g = exact(i, k);
        if (std::abs(g) <= 1e-10) continue;
        const double fd =
            static_cast<double>(oracle_eval.fd_gradient(x, i * n_slots + k, fd_step));
        const double rel = std::abs(g - fd) / std::abs(g);
        worst_rel = std::max(worst_rel, rel);
        smallest_checked = std::min(smallest_checked, std::abs(g));
        ++checked;
        if (rel >= 1e-6) pass = false;
      }
    }
  }
  std::ostringstream detail;
  detail << checked << " components over 20 instances, worst rel err "
         << worst_rel << ", smallest |g| " << smallest_checked;
  pass = pass && watch.seconds() < 30.0;
  report(1, pass, "exact GRAPE gradients match central finite differences",
         detail.str(), watch.seconds());
}

// --- criterion 2: unitarity and CPTP invariants -----------------------------

void criterion_physicality() {
  Stopwatch watch;
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> dim_pick(0, 1);
  std::uniform_int_distribution<Eigen::Index> slot_pick(4, 24);
  std::uniform_real_distribution<double> dt_pick(0.1, 0.5);

  double worst_unitarity = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::Index d = dim_pick(rng) == 0 ? 2 : 4;
    HamiltonianModel model;
    model.dim = d;
    model.drift = oracle::random_hermitian(d, rng);
    model.controls.emplace_back("X", oracle::random_hermitian(d, rng));
    PulseProgram pulse;
    pulse.dt = dt_pick(rng);
    ShapeSpec shape;
    shape.kind = ShapeKind::random;
    shape.amplitude = 1.0;
    shape.seed = trial;
    pulse = make_initial(shape, slot_pick(rng), pulse.dt, {"X"});
    const CMatrix u = propagate_closed(model, pulse).final_op;
    worst_unitarity =
        std::max(worst_unitarity, max_abs(u.adjoint() * u - identity(d)));
  }

  double worst_tp = 0.0;
  double worst_choi = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index d = dim_pick(rng) == 0 ? 2 : 4;
    HamiltonianModel model;
    model.dim = d;
    model.drift = oracle::random_hermitian(d, rng);
    model.controls.emplace_back("X", oracle::random_hermitian(d, rng));
    // Random collapse operators at physically plausible rates.
    std::uniform_real_distribution<double> rate(0.001, 0.05);
    CMatrix c = CMatrix::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) {
        std::normal_distribution<double> gauss(0.0, 1.0);
        c(i, j) = complexd(gauss(rng), gauss(rng));
      }
    }
    model.collapse_ops.push_back(std::sqrt(rate(rng)) * c);
    ShapeSpec shape;
    shape.kind = ShapeKind::random;
    shape.amplitude = 1.0;
    shape.seed = 5000 + trial;
    const PulseProgram pulse = make_initial(shape, 8, 0.25, {"X"});
    const CMatrix s = propagate_open(model, pulse).final_op;
    double tp = 0.0;
    double choi_min = 0.0;
    cptp_check(s, &tp, &choi_min);
    worst_tp = std::max(worst_tp, tp);
    worst_choi = std::min(worst_choi, choi_min);
  }

  std::ostringstream detail;
  detail << "1000 closed: max ||UdU - I|| = " << worst_unitarity
         << "; 200 open: max TP defect = " << worst_tp << ", min Choi eig = "
         << worst_choi;
  const bool pass = worst_unitarity < 1e-9 && worst_tp < 1e-8 &&
                    worst_choi >= -1e-9 && watch.seconds() < 60.0;
  report(2, pass, "propagators stay unitary / CPTP", detail.str(),
         watch.seconds());
}

// --- criterion 3: analytic pi pulse -----------------------------------------

void criterion_pi_pulse() {
  Stopwatch watch;
  SingleQubitOptions opts;
  opts.controls = SingleQubitControls::x;
  const HamiltonianModel model = build_single_qubit(montreal_like(), 0, opts);
  const Eigen::Index n = 480;
  const double dt = 0.2222;
  const double amplitude = M_PI / (opts.rabi_rate * n * dt);
  ShapeSpec shape;
  shape.kind = ShapeKind::constant;
  shape.amplitude = amplitude;
  const PulseProgram pulse = make_initial(shape, n, dt, {"X"});
  const double infid =
      propagate_closed(model, pulse, make_gate_target("X")).infidelity;
  std::ostringstream detail;
  detail << "constant resonant drive, area pi: infidelity = " << infid;
  report(3, infid < 1e-12 && watch.seconds() < 1.0,
         "analytic pi pulse realizes X without optimization", detail.str(),
         watch.seconds());
}

// --- criterion 4: optimizer convergence on the paper's instances ------------

void criterion_convergence() {
  Stopwatch watch;
  std::ostringstream detail;
  bool pass = true;
  const double dt = 0.2222;

  {
    const HamiltonianModel m = build_single_qubit(montreal_like(), 0, {});
    OptConfig cfg;
    cfg.max_iters = 200;
    cfg.fid_err_target = 1e-9;
    const OptResult r = optimize_lbfgsb(m, drag_start(480, dt, {"X", "Y"}),
                                        make_gate_target("X"), cfg);
    pass = pass && r.final_infidelity < 1e-8;
    detail << "X(480): " << r.final_infidelity << " in "
           << r.infidelity_trace.size() - 1 << " it";
  }
  {
    SingleQubitOptions opts;
    opts.controls = SingleQubitControls::x;
    const HamiltonianModel m = build_single_qubit(montreal_like(), 0, opts);
    OptConfig cfg;
    cfg.max_iters = 200;
    cfg.fid_err_target = 1e-9;
    const OptResult r = optimize_lbfgsb(m, drag_start(736, dt, {"X"}),
                                        make_gate_target("SX"), cfg);
    pass = pass && r.final_infidelity < 1e-8;
    detail << "; SX(736): " << r.final_infidelity << " in "
           << r.infidelity_trace.size() - 1 << " it";
  }
  {
    const HamiltonianModel m = build_single_qubit(montreal_like(), 0, {});
    OptConfig cfg;
    cfg.max_iters = 500;
    cfg.fid_err_target = 1e-9;
    const OptResult r = optimize_lbfgsb(m, drag_start(1216, dt, {"X", "Y"}),
                                        make_gate_target("H"), cfg);
    pass = pass && r.final_infidelity < 1e-8;
    detail << "; H(1216): " << r.final_infidelity << " in "
           << r.infidelity_trace.size() - 1 << " it";
  }
  {
    const HamiltonianModel m = build_cr_two_qubit(cr_pair(), 0, 1);
    const Eigen::Index n = 1024;
    const double total = n * dt;
    ShapeSpec shape;
    shape.kind = ShapeKind::gaussian_square;
    shape.amplitude = 0.5;
    shape.sigma = 0.05 * total;
    shape.width = 0.7 * total;
    const PulseProgram p0 = make_initial(shape, n, dt, {"X1", "X2"});
    OptConfig cfg;
    cfg.max_iters = 2000;
    cfg.fid_err_target = 1e-6;
    const OptResult r = optimize_lbfgsb(m, p0, make_gate_target("CNOT"), cfg);
    pass = pass && r.final_infidelity < 1e-4;
    detail << "; CNOT(1024, CR): " << r.final_infidelity << " in "
           << r.infidelity_trace.size() - 1 << " it";
  }
  pass = pass && watch.seconds() < 600.0;
  report(4, pass, "L-BFGS-B converges on the X / SX / H / CNOT instances",
         detail.str(), watch.seconds());
}

// --- criterion 5: L-BFGS-B beats SPSA on a matched budget --------------------

void criterion_method_ordering() {
  Stopwatch watch;
  const HamiltonianModel m = build_single_qubit(montreal_like(), 0, {});
  const GateTarget x = make_gate_target("X");
  const PulseProgram p0 = drag_start(480, 0.2222, {"X", "Y"});

  OptConfig lb;
  lb.max_iters = 200;
  const OptResult quasi_newton = optimize_lbfgsb(m, p0, x, lb);

  int wins = 0;
  long budget = 0;
  for (int seed = 0; seed < 5; ++seed) {
    OptConfig sp;
    sp.method = OptMethod::spsa;
    sp.seed = static_cast<std::uint64_t>(seed);
    // At 3 cost evaluations per iteration this grants SPSA several hundred
    // times the evaluations the quasi-Newton run consumed.
    sp.max_iters = 1000;
    const OptResult stochastic = optimize_spsa(m, p0, x, sp);
    budget = stochastic.n_cost_evals;
    if (stochastic.final_infidelity > quasi_newton.final_infidelity) ++wins;
  }
  std::ostringstream detail;
  detail << "L-BFGS-B " << quasi_newton.final_infidelity << " with "
         << quasi_newton.n_cost_evals << " evals; SPSA wins over it in "
         << (5 - wins) << "/5 runs at " << budget << " evals each";
  report(5, wins >= 3, "SPSA trails L-BFGS-B at a matched evaluation budget",
         detail.str(), watch.seconds());
}

// --- criterion 6: RB recovers injected depolarizing noise --------------------

void criterion_rb_oracle() {
  Stopwatch watch;
  RbConfig cfg;
  cfg.lengths = {1, 10, 25, 50, 100, 150};
  cfg.n_seeds = 30;
  cfg.seed = 404;

  const double p = 0.01;  // alpha_true = 0.99 under rho -> (1-p) rho + p I/d
  const RbReport standard =
      run_rb(NoiseChannel::depolarizing(2, p), std::nullopt, cfg);
  const double alpha_err = std::abs(standard.alpha - 0.99);

  const double r_injected = 1e-3;
  InterleavedGate gate{"X", sigma_x(),
                       NoiseChannel::depolarizing(2, 2.0 * r_injected)};
  const RbReport irb = run_rb(NoiseChannel::depolarizing(2, p), gate, cfg);
  const double r_rel_err =
      std::abs(irb.interleaved_error - r_injected) / r_injected;

  std::ostringstream detail;
  detail << "fitted alpha " << standard.alpha << " (|err| = " << alpha_err
         << " vs +/-0.002); interleaved error " << irb.interleaved_error
         << " (rel err " << r_rel_err << " vs 30%)";
  const bool pass =
      alpha_err < 0.002 && r_rel_err < 0.30 && watch.seconds() < 120.0;
  report(6, pass, "RB and IRB recover injected depolarizing errors",
         detail.str(), watch.seconds());
}

// --- criterion 7: IRB null test ----------------------------------------------

void criterion_irb_null() {
  Stopwatch watch;
  RbConfig cfg;
  cfg.lengths = {1, 10, 25, 50, 100, 150};
  cfg.n_seeds = 30;
  cfg.seed = 505;
  InterleavedGate perfect{"I", identity(2), NoiseChannel::identity_channel(2)};
  const RbReport report_rb =
      run_rb(NoiseChannel::depolarizing(2, 0.01), perfect, cfg);
  std::ostringstream detail;
  detail << "interleaved_error = " << report_rb.interleaved_error;
  report(7, std::abs(report_rb.interleaved_error) < 1e-6,
         "interleaving a perfect gate yields zero gate error", detail.str(),
         watch.seconds());
}

// --- criterion 8: open-system sanity -----------------------------------------

void criterion_open_sanity() {
  Stopwatch watch;
  DeviceSpec spec = montreal_like();
  spec.qubits[0].t2_us = 2.0 * spec.qubits[0].t1_us;  // pure T1 channel
  SingleQubitOptions opts;
  opts.controls = SingleQubitControls::x;
  opts.open_system = true;
  const HamiltonianModel open_model = build_single_qubit(spec, 0, opts);

  // Free decay of |1><1| over 100 ns.
  ShapeSpec zero;
  zero.kind = ShapeKind::constant;
  zero.amplitude = 0.0;
  const PulseProgram idle = make_initial(zero, 50, 2.0, {"X"});
  const CMatrix s = propagate_open(open_model, idle).final_op;
  CMatrix rho = CMatrix::Zero(2, 2);
  rho(1, 1) = 1.0;
  const double survival = apply_superop(s, rho)(1, 1).real();
  const double expected = std::exp(-100.0 / 86760.0);
  const double decay_rel_err = std::abs(survival - expected) / expected;

  // Residual channel of a 105-ns analytic X pulse under T1.
  const Eigen::Index n = 480;
  const double dt = 0.2222;
  ShapeSpec flat;
  flat.kind = ShapeKind::constant;
  flat.amplitude = M_PI / (opts.rabi_rate * n * dt);
  const PulseProgram pi_pulse = make_initial(flat, n, dt, {"X"});
  const NoiseChannel residual =
      channel_from_pulse(open_model, pi_pulse, make_gate_target("X"));
  const double infid = channel_process_infidelity(residual);

  std::ostringstream detail;
  detail << "survival rel err " << decay_rel_err
         << " (vs 1e-6); residual infidelity " << infid << " (vs (0, 1e-2))";
  const bool pass = decay_rel_err < 1e-6 && infid > 0.0 && infid < 1e-2;
  report(8, pass, "T1 decay law and pulse-derived residual channel",
         detail.str(), watch.seconds());
}

// --- criterion 9: round trips and run determinism ----------------------------

void criterion_determinism(const std::string& cli_path,
                           const std::string& spec_path) {
  Stopwatch watch;
  bool pass = true;
  std::ostringstream detail;

  // Library-level byte stability.
  ShapeSpec shape;
  shape.kind = ShapeKind::random;
  shape.amplitude = 0.7;
  shape.seed = 31415;
  const PulseProgram p = make_initial(shape, 64, 0.2222, {"X", "Y"});
  const std::string pulse_text = pulse_to_json_string(p);
  pass = pass && pulse_to_json_string(pulse_from_json_string(pulse_text)) ==
                     pulse_text;
  const ScheduleDoc doc = export_schedule(p, "X", "abc123");
  const std::string sched_text = schedule_to_json_string(doc);
  pass = pass && schedule_to_json_string(schedule_from_json_string(sched_text)) ==
                     sched_text;
  const PulseProgram back = import_schedule(doc, {"X", "Y"});
  for (std::size_t c = 0; c < p.channels.size(); ++c) {
    pass = pass && (p.channels[c].samples - back.channels[c].samples)
                           .cwiseAbs()
                           .maxCoeff() == 0.0;
  }
  detail << "pulse/schedule round trips byte-stable";

  // Whole-run determinism through the CLI.
  const fs::path base = fs::temp_directory_path() / "pulsekit_accept";
  fs::remove_all(base);
  fs::create_directories(base);
  auto run_once = [&](const std::string& out_dir) {
    const std::string cmd = cli_path + " optimize --spec " + spec_path +
                            " --gate X --slots 64 --seed 7 --out " +
                            (base / out_dir).string() + " > /dev/null 2>&1";
    return std::system(cmd.c_str()) == 0;
  };
  if (run_once("a") && run_once("b")) {
    for (const char* name : {"pulse.json", "schedule.json", "summary.json",
                             "trace.csv"}) {
      const std::string first = read_text_file(base / "a" / name);
      const std::string second = read_text_file(base / "b" / name);
      if (first != second) {
        pass = false;
        detail << "; " << name << " differs between identical runs";
      }
    }
    detail << "; identical CLI runs byte-identical";
  } else {
    pass = false;
    detail << "; CLI invocation failed";
  }
  report(9, pass, "round trips and seeded runs are byte-stable", detail.str(),
         watch.seconds());
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli_path = argc > 1 ? argv[1] : PULSEKIT_CLI_PATH;
  const std::string spec_path = argc > 2 ? argv[2] : PULSEKIT_SPEC_DIR
      "/montreal_q0.json";

  criterion_gradients();
  criterion_physicality();
  criterion_pi_pulse();
  criterion_convergence();
  criterion_method_ordering();
  criterion_rb_oracle();
  criterion_irb_null();
  criterion_open_sanity();
  criterion_determinism(cli_path, spec_path);

  if (g_failures == 0) {
    std::printf("all acceptance criteria passed\n");
  } else {
    std::printf("%d acceptance criteria FAILED\n", g_failures);
  }
  return g_failures == 0 ? 0 : 1;
}
