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

#include <atomic>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pulsekit/bench.hpp"
#include "pulsekit/errors.hpp"
#include "pulsekit/jsonio.hpp"
#include "pulsekit/model.hpp"
#include "pulsekit/optimize.hpp"
#include "pulsekit/propagate.hpp"
#include "pulsekit/pulse.hpp"
#include "pulsekit/schedule.hpp"

namespace fs = std::filesystem;
using namespace pulsekit;

namespace {

struct OptimizeArgs {
  std::string spec_path;
  std::string gate;
  long slots = 0;
  double duration_ns = 0.0;
  std::string shape = "drag";
  double amplitude = 0.2;
  double sigma_ns = 0.0;
  double beta = 0.2;
  double width_ns = 0.0;
  double periods = 1.0;
  std::string bounds = "bipolar";
  std::string controls = "xy";
  std::string method = "lbfgsb";
  int max_iters = 1000;
  double fid_target = 1e-10;
  double grad_tol = 1e-9;
  int restarts = 1;
  bool open_system = false;
  int qubit = 0;
  int control_qubit = 0;
  int target_qubit = 1;
  std::string cr_grouping = "grouped";
  double rabi_mhz = 50.0;
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string out_dir = ".";
};

struct BenchArgs {
  std::string spec_path;
  std::string pulse_path;
  std::string gate;
  std::string noise = "depolarizing";
  double noise_p = 0.01;
  double noise_gamma = 0.0;
  double noise_lambda = 0.0;
  double interleaved_p = -1.0;
  std::string lengths = "1,10,25,50,100,150";
  int rb_seeds = 30;
  long shots = 0;
  bool open_system = false;
  int qubit = 0;
  int control_qubit = 0;
  int target_qubit = 1;
  double rabi_mhz = 50.0;
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string out_dir = ".";
};

struct ExportArgs {
  std::string pulse_path;
  std::string spec_path;
  std::string gate = "custom";
  std::string map_spec;
  std::string out_dir = ".";
};

std::vector<int> parse_lengths(const std::string& text) {
  std::vector<int> lengths;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) lengths.push_back(std::stoi(item));
  }
  return lengths;
}

GateTarget resolve_gate(const std::string& name) {
  // Either a named standard gate or a JSON file with a custom unitary.
  if (fs::exists(name) && fs::path(name).extension() == ".json") {
    const nlohmann::json j = read_json_file(name);
    const auto rows = j.at("unitary");
    const Eigen::Index d = static_cast<Eigen::Index>(rows.size());
    CMatrix u(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index k = 0; k < d; ++k) {
        const auto& cell = rows.at(i).at(k);
        u(i, k) = complexd(cell.at(0).get<double>(), cell.at(1).get<double>());
      }
    }
    return gate_target_from_unitary(j.value("name", "custom"), std::move(u));
  }
  return make_gate_target(name);
}

HamiltonianModel build_model_for_gate(const DeviceSpec& spec,
                                      const GateTarget& target, bool open_system,
                                      double rabi_mhz, const std::string& controls,
                                      int qubit, int control_qubit,
                                      int target_qubit,
                                      const std::string& cr_grouping) {
  const double rabi_rate = kTwoPi * rabi_mhz * 1e-3;
  if (target.dim() >= 4) {
    CrOptions opts;
    opts.open_system = open_system;
    opts.rabi_rate = rabi_rate;
    if (cr_grouping == "independent") {
      opts.grouping = CrGrouping::independent;
    } else if (cr_grouping != "grouped") {
      throw UsageError("--cr-grouping must be grouped or independent");
    }
    return build_cr_two_qubit(spec, control_qubit, target_qubit, opts);
  }
  SingleQubitOptions opts;
  opts.open_system = open_system;
  opts.rabi_rate = rabi_rate;
  if (controls == "x") {
    opts.controls = SingleQubitControls::x;
  } else if (controls == "y") {
    opts.controls = SingleQubitControls::y;
  } else if (controls == "xy") {
    opts.controls = SingleQubitControls::xy;
  } else {
    throw UsageError("--controls must be x, y or xy");
  }
  return build_single_qubit(spec, qubit, opts);
}

std::string trace_csv(const std::vector<double>& trace) {
  std::ostringstream out;
  out.precision(17);
  out << "iteration,infidelity\n";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    out << i << "," << trace[i] << "\n";
  }
  return out.str();
}

int cmd_optimize(const OptimizeArgs& args) {
  const DeviceSpec spec = load_device_spec(args.spec_path);
  GateTarget target = resolve_gate(args.gate);
  if (spec.levels == 3 && target.dim() == 2) target = target.embedded(3);

  HamiltonianModel model = build_model_for_gate(
      spec, target, args.open_system, args.rabi_mhz, args.controls, args.qubit,
      args.control_qubit, args.target_qubit, args.cr_grouping);

  Eigen::Index n_slots = args.slots;
  if (n_slots <= 0) {
    if (args.duration_ns <= 0.0) {
      throw UsageError("provide --slots N or --duration-ns X");
    }
    n_slots = std::max<Eigen::Index>(
        1, static_cast<Eigen::Index>(std::llround(args.duration_ns / spec.dt_ns)));
  }
  const double total_ns = static_cast<double>(n_slots) * spec.dt_ns;

  ShapeSpec shape;
  shape.kind = shape_kind_from_string(args.shape);
  shape.amplitude = args.amplitude;
  shape.sigma = args.sigma_ns > 0.0 ? args.sigma_ns : total_ns / 8.0;
  shape.beta = args.beta;
  shape.width = args.width_ns > 0.0 ? args.width_ns : 0.7 * total_ns;
  shape.periods = args.periods;
  shape.seed = args.seed;

  Bounds bounds;
  if (args.bounds == "unit") {
    bounds = unit_bounds();
  } else if (args.bounds != "bipolar") {
    throw UsageError("--bounds must be bipolar or unit");
  }
  const std::vector<std::string> labels = model.control_labels();
  const std::vector<Bounds> channel_bounds(labels.size(), bounds);

  OptConfig cfg;
  cfg.method = opt_method_from_string(args.method);
  cfg.max_iters = args.max_iters;
  cfg.fid_err_target = args.fid_target;
  cfg.grad_tol = args.grad_tol;
  cfg.seed = args.seed;

  // Restarts: the configured shape first, then seeded random shapes; the
  // best final infidelity wins. Runs are independent, so --jobs bounds a
  // thread pool over attempts without changing any result.
  const int n_attempts = std::max(1, args.restarts);
  std::vector<OptResult> attempts(n_attempts);
  auto run_attempt = [&](int attempt) {
    ShapeSpec start = shape;
    if (attempt > 0) {
      start.kind = ShapeKind::random;
      start.seed = args.seed + 1000 + static_cast<std::uint64_t>(attempt);
    }
    const PulseProgram p0 =
        make_initial(start, n_slots, spec.dt_ns, labels, channel_bounds);
    OptConfig attempt_cfg = cfg;
    attempt_cfg.seed = cfg.seed + static_cast<std::uint64_t>(attempt);
    attempts[attempt] = optimize_pulse(model, p0, target, attempt_cfg);
  };
  const int workers = std::max(1, std::min(args.jobs, n_attempts));
  if (workers == 1) {
    for (int attempt = 0; attempt < n_attempts; ++attempt) run_attempt(attempt);
  } else {
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int i = next.fetch_add(1); i < n_attempts; i = next.fetch_add(1)) {
          run_attempt(i);
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  int best_index = 0;
  for (int i = 1; i < n_attempts; ++i) {
    if (attempts[i].final_infidelity < attempts[best_index].final_infidelity) {
      best_index = i;
    }
  }
  OptResult& result = attempts[best_index];

  fs::create_directories(args.out_dir);
  const fs::path out(args.out_dir);
  save_pulse(out / "pulse.json", result.pulse);
  const std::string spec_hash = fnv1a_hex(read_text_file(args.spec_path));
  save_schedule(out / "schedule.json",
                export_schedule(result.pulse, target.name, spec_hash));
  write_text_file(out / "trace.csv", trace_csv(result.infidelity_trace));

  nlohmann::json summary;
  summary["gate"] = target.name;
  summary["method"] = args.method;
  summary["final_infidelity"] = result.final_infidelity;
  summary["termination"] = to_string(result.termination);
  summary["iterations"] = result.infidelity_trace.empty()
                              ? 0
                              : result.infidelity_trace.size() - 1;
  summary["n_cost_evals"] = result.n_cost_evals;
  summary["n_grad_evals"] = result.n_grad_evals;
  summary["n_slots"] = n_slots;
  summary["dt_ns"] = spec.dt_ns;
  summary["duration_ns"] = total_ns;
  summary["open_system"] = args.open_system;
  summary["seed"] = args.seed;
  summary["restarts"] = args.restarts;
  summary["spec_hash"] = spec_hash;
  summary["version"] = PULSEKIT_VERSION;
  write_text_file(out / "summary.json", canonical_dump(summary));

  std::cout << "gate " << target.name << ": infidelity "
            << result.final_infidelity << " (" << to_string(result.termination)
            << ") -> " << (out / "summary.json").string() << "\n";
  return 0;
}

int cmd_bench(const BenchArgs& args) {
  RbConfig cfg;
  cfg.lengths = parse_lengths(args.lengths);
  cfg.n_seeds = args.rb_seeds;
  cfg.shots = args.shots;
  cfg.seed = args.seed;
  cfg.jobs = args.jobs;

  NoiseChannel per_clifford = NoiseChannel::identity_channel(2);
  std::optional<InterleavedGate> interleaved;

  if (!args.pulse_path.empty()) {
    // Pulse-derived residual channel, interleaved against a depolarizing
    // background of strength --noise-p.
    if (args.spec_path.empty() || args.gate.empty()) {
      throw UsageError("--pulse mode needs --spec and --gate");
    }
    const DeviceSpec spec = load_device_spec(args.spec_path);
    GateTarget target = resolve_gate(args.gate);
    if (spec.levels == 3 && target.dim() == 2) target = target.embedded(3);
    const PulseProgram pulse = load_pulse(args.pulse_path);
    const std::string controls = pulse.channels.size() == 1 ? "x" : "xy";
    // A three-channel CR pulse implies the independent X1/X2/ZX grouping.
    const std::string grouping =
        target.dim() >= 4 && pulse.channels.size() == 3 ? "independent"
                                                        : "grouped";
    HamiltonianModel model = build_model_for_gate(
        spec, target, args.open_system, args.rabi_mhz, controls, args.qubit,
        args.control_qubit, args.target_qubit, grouping);
    const NoiseChannel residual = channel_from_pulse(model, pulse, target);
    per_clifford = NoiseChannel::depolarizing(target.dim(), args.noise_p);
    interleaved = InterleavedGate{target.name, target.unitary, residual};
  } else {
    if (args.noise == "depolarizing") {
      per_clifford = NoiseChannel::depolarizing(2, args.noise_p);
    } else if (args.noise == "amplitude_damping") {
      per_clifford = NoiseChannel::amplitude_damping(args.noise_gamma);
    } else if (args.noise == "dephasing") {
      per_clifford = NoiseChannel::dephasing(args.noise_lambda);
    } else {
      throw UsageError(
          "--noise must be depolarizing, amplitude_damping or dephasing");
    }
    if (args.interleaved_p >= 0.0) {
      GateTarget gate = args.gate.empty()
                            ? gate_target_from_unitary("I", identity(2))
                            : resolve_gate(args.gate);
      interleaved = InterleavedGate{
          gate.name, gate.unitary,
          NoiseChannel::depolarizing(gate.dim(), args.interleaved_p)};
    }
  }

  const RbReport report = run_rb(per_clifford, interleaved, cfg);

  fs::create_directories(args.out_dir);
  const fs::path out(args.out_dir);
  write_text_file(out / "rb_report.json", rb_report_to_json_string(report));
  write_text_file(out / "rb_curves.csv", rb_curves_csv(report));

  std::cout << "alpha " << report.alpha << " (epc " << report.epc << ")";
  if (report.interleaved) {
    std::cout << ", interleaved error " << report.interleaved_error << " +/- "
              << report.interleaved_error_err;
  }
  std::cout << " -> " << (out / "rb_report.json").string() << "\n";
  return 0;
}

int cmd_export(const ExportArgs& args) {
  const PulseProgram pulse = load_pulse(args.pulse_path);
  std::string spec_hash = "0000000000000000";
  if (!args.spec_path.empty()) {
    load_device_spec(args.spec_path);  // validates
    spec_hash = fnv1a_hex(read_text_file(args.spec_path));
  }
  auto channel_map = default_channel_map();
  if (!args.map_spec.empty()) {
    std::stringstream ss(args.map_spec);
    std::string pair;
    while (std::getline(ss, pair, ',')) {
      const auto eq = pair.find('=');
      if (eq == std::string::npos) {
        throw UsageError("--map entries look like LABEL=channel");
      }
      channel_map[pair.substr(0, eq)] = pair.substr(eq + 1);
    }
  }
  fs::create_directories(args.out_dir);
  const fs::path out_file = fs::path(args.out_dir) / "schedule.json";
  save_schedule(out_file,
                export_schedule(pulse, args.gate, spec_hash, channel_map));
  std::cout << "wrote " << out_file.string() << "\n";
  return 0;
}

int cmd_report(const std::string& dir) {
  const fs::path out(dir);
  bool found = false;
  if (fs::exists(out / "summary.json")) {
    found = true;
    const nlohmann::json j = read_json_file(out / "summary.json");
    std::cout << "optimization summary (" << (out / "summary.json").string()
              << ")\n";
    std::cout << "  gate:             " << j.value("gate", "?") << "\n";
    std::cout << "  method:           " << j.value("method", "?") << "\n";
    std::cout << "  final infidelity: " << j.value("final_infidelity", 0.0)
              << "\n";
    std::cout << "  termination:      " << j.value("termination", "?") << "\n";
    std::cout << "  iterations:       " << j.value("iterations", 0) << "\n";
    std::cout << "  duration:         " << j.value("duration_ns", 0.0) << " ns ("
              << j.value("n_slots", 0) << " slots)\n";
  }
  if (fs::exists(out / "rb_report.json")) {
    found = true;
    const nlohmann::json j = read_json_file(out / "rb_report.json");
    std::cout << "benchmark report (" << (out / "rb_report.json").string()
              << ")\n";
    std::cout << "  alpha:   " << j.value("alpha", 0.0) << " +/- "
              << j.value("alpha_err", 0.0) << "\n";
    std::cout << "  epc:     " << j.value("epc", 0.0) << "\n";
    if (j.value("interleaved", false)) {
      std::cout << "  alpha_c: " << j.value("alpha_c", 0.0) << " +/- "
                << j.value("alpha_c_err", 0.0) << "\n";
      std::cout << "  gate error (IRB): " << j.value("interleaved_error", 0.0)
                << " +/- " << j.value("interleaved_error_err", 0.0) << "\n";
    }
  }
  if (!found) {
    throw UsageError("no summary.json or rb_report.json under " + dir);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pulse-level quantum gate synthesis and benchmarking"};
  app.require_subcommand(1);

  OptimizeArgs opt;
  CLI::App* optimize = app.add_subcommand(
      "optimize", "synthesize a control pulse for a target gate");
  optimize->add_option("--spec", opt.spec_path, "device spec JSON")->required();
  optimize->add_option("--gate", opt.gate, "X, SX, H, CNOT or a unitary JSON file")
      ->required();
  optimize->add_option("--slots", opt.slots, "number of dt timeslots");
  optimize->add_option("--duration-ns", opt.duration_ns, "pulse length in ns");
  optimize->add_option("--shape", opt.shape,
                       "drag|gaussian_square|sine|constant|random");
  optimize->add_option("--amp", opt.amplitude, "initial shape amplitude");
  optimize->add_option("--sigma-ns", opt.sigma_ns, "shape sigma (default T/8)");
  optimize->add_option("--beta", opt.beta, "drag quadrature weight");
  optimize->add_option("--width-ns", opt.width_ns,
                       "gaussian_square flat-top (default 0.7 T)");
  optimize->add_option("--periods", opt.periods, "sine periods");
  optimize->add_option("--bounds", opt.bounds, "bipolar [-1,1] or unit [0,1]");
  optimize->add_option("--controls", opt.controls, "x, y or xy drive lines");
  optimize->add_option("--method", opt.method, "lbfgsb or spsa");
  optimize->add_option("--max-iters", opt.max_iters, "iteration cap");
  optimize->add_option("--fid-target", opt.fid_target,
                       "stop below this infidelity");
  optimize->add_option("--grad-tol", opt.grad_tol, "projected-gradient tolerance");
  optimize->add_option("--restarts", opt.restarts,
                       "extra seeded random-shape starts");
  optimize->add_flag("--open-system", opt.open_system,
                     "include T1/T2 collapse operators");
  optimize->add_option("--qubit", opt.qubit, "qubit index for 1q gates");
  optimize->add_option("--control-qubit", opt.control_qubit, "CR control qubit");
  optimize->add_option("--target-qubit", opt.target_qubit, "CR target qubit");
  optimize->add_option("--cr-grouping", opt.cr_grouping,
                       "grouped (shared CR amplitude) or independent");
  optimize->add_option("--rabi-mhz", opt.rabi_mhz, "peak Rabi rate / 2pi");
  optimize->add_option("--seed", opt.seed, "run seed");
  optimize->add_option("--jobs", opt.jobs, "parallel workers");
  optimize->add_option("--out", opt.out_dir, "output directory");

  BenchArgs bench;
  CLI::App* bench_cmd = app.add_subcommand(
      "bench", "standard + interleaved randomized benchmarking");
  bench_cmd->add_option("--spec", bench.spec_path, "device spec JSON");
  bench_cmd->add_option("--pulse", bench.pulse_path,
                        "pulse JSON for a pulse-derived gate channel");
  bench_cmd->add_option("--gate", bench.gate, "gate under test");
  bench_cmd->add_option("--noise", bench.noise,
                        "per-Clifford noise kind (explicit mode)");
  bench_cmd->add_option("--noise-p", bench.noise_p, "depolarizing probability");
  bench_cmd->add_option("--noise-gamma", bench.noise_gamma, "damping strength");
  bench_cmd->add_option("--noise-lambda", bench.noise_lambda,
                        "dephasing strength");
  bench_cmd->add_option("--int-p", bench.interleaved_p,
                        "interleave a gate carrying this depolarizing error");
  bench_cmd->add_option("--lengths", bench.lengths,
                        "comma list of sequence lengths");
  bench_cmd->add_option("--rb-seeds", bench.rb_seeds,
                        "random sequences per length");
  bench_cmd->add_option("--shots", bench.shots, "0 = exact probabilities");
  bench_cmd->add_flag("--open-system", bench.open_system,
                      "Lindblad propagation for the pulse channel");
  bench_cmd->add_option("--qubit", bench.qubit, "qubit index");
  bench_cmd->add_option("--control-qubit", bench.control_qubit,
                        "CR control qubit");
  bench_cmd->add_option("--target-qubit", bench.target_qubit, "CR target qubit");
  bench_cmd->add_option("--rabi-mhz", bench.rabi_mhz, "peak Rabi rate / 2pi");
  bench_cmd->add_option("--seed", bench.seed, "run seed");
  bench_cmd->add_option("--jobs", bench.jobs, "parallel workers");
  bench_cmd->add_option("--out", bench.out_dir, "output directory");

  ExportArgs exp;
  CLI::App* export_cmd = app.add_subcommand(
      "export", "render a pulse as an OpenPulse-style schedule document");
  export_cmd->add_option("--pulse", exp.pulse_path, "pulse JSON")->required();
  export_cmd->add_option("--spec", exp.spec_path, "device spec (for the hash)");
  export_cmd->add_option("--gate", exp.gate, "gate name for the metadata");
  export_cmd->add_option("--map", exp.map_spec, "overrides, e.g. X1=d0,ZX=u0");
  export_cmd->add_option("--out", exp.out_dir, "output directory");

  std::string report_dir = ".";
  CLI::App* report_cmd =
      app.add_subcommand("report", "print a digest of run artifacts");
  report_cmd->add_option("--out", report_dir, "directory holding artifacts");

  CLI11_PARSE(app, argc, argv);

  try {
    if (optimize->parsed()) return cmd_optimize(opt);
    if (bench_cmd->parsed()) return cmd_bench(bench);
    if (export_cmd->parsed()) return cmd_export(exp);
    if (report_cmd->parsed()) return cmd_report(report_dir);
  } catch (const UsageError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "InternalError: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
