# Copyright 2026 The pulsekit authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""CLI integration driver: exercises optimize / bench / export / report and
the documented error exits against the built binary.

Usage: test_cli.py <cli-binary> <spec-dir>
"""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

CLI = Path(sys.argv[1])
SPEC_DIR = Path(sys.argv[2])
FAILURES = []


def run(*args, expect=0):
    proc = subprocess.run([str(CLI), *args], capture_output=True, text=True)
    if proc.returncode != expect:
        FAILURES.append(
            f"{' '.join(args)} -> exit {proc.returncode} (wanted {expect}); "
            f"stderr: {proc.stderr.strip()}")
    return proc


def check(cond, label):
    if not cond:
        FAILURES.append(label)


def main():
    tmp = Path(tempfile.mkdtemp(prefix="pulsekit_cli_"))
    spec = str(SPEC_DIR / "montreal_q0.json")
    pair = str(SPEC_DIR / "cr_pair.json")

    # optimize: X at the documented 480-slot setup.
    out1 = tmp / "x_run"
    run("optimize", "--spec", spec, "--gate", "X", "--slots", "480",
        "--seed", "3", "--out", str(out1))
    summary = json.loads((out1 / "summary.json").read_text())
    check(summary["final_infidelity"] < 1e-8, "X infidelity < 1e-8")
    check(summary["gate"] == "X", "summary gate name")
    for name in ("pulse.json", "schedule.json", "trace.csv"):
        check((out1 / name).exists(), f"{name} written")

    # optimize: duration in ns resolves to slots.
    out2 = tmp / "sx_run"
    run("optimize", "--spec", spec, "--gate", "SX", "--controls", "x",
        "--duration-ns", "163.5", "--seed", "3", "--out", str(out2))
    summary2 = json.loads((out2 / "summary.json").read_text())
    check(summary2["n_slots"] == 736, "163.5 ns resolves to 736 slots")
    check(summary2["final_infidelity"] < 1e-8, "SX infidelity < 1e-8")

    # optimize: H directly (not decomposed) with both quadratures active.
    out_h = tmp / "h_run"
    run("optimize", "--spec", spec, "--gate", "H", "--slots", "1216",
        "--seed", "3", "--max-iters", "500", "--out", str(out_h))
    summary_h = json.loads((out_h / "summary.json").read_text())
    check(summary_h["final_infidelity"] < 1e-8, "H infidelity < 1e-8")
    pulse_h = json.loads((out_h / "pulse.json").read_text())
    for ch in pulse_h["channels"]:
        check(any(s != 0.0 for s in ch["samples"]),
              f"H channel {ch['label']} nonzero")

    # optimize: CNOT on the CR pair (shortened for test runtime).
    out3 = tmp / "cx_run"
    run("optimize", "--spec", pair, "--gate", "CNOT", "--slots", "1024",
        "--shape", "gaussian_square", "--amp", "0.5", "--seed", "3",
        "--fid-target", "1e-6", "--max-iters", "2000", "--out", str(out3))
    summary3 = json.loads((out3 / "summary.json").read_text())
    check(summary3["final_infidelity"] < 1e-4, "CNOT infidelity < 1e-4")
    schedule3 = json.loads((out3 / "schedule.json").read_text())
    check([c["name"] for c in schedule3["channels"]] == ["d0", "d1"],
          "grouped CNOT exports d0/d1")

    # export: independent CR channels map to d0, d1, u0.
    pulse3 = json.loads((out3 / "pulse.json").read_text())
    pulse3["channels"].append({
        "label": "ZX",
        "samples": [0.0] * len(pulse3["channels"][0]["samples"]),
    })
    pulse3["bounds"]["ZX"] = [-1.0, 1.0]
    three_channel = tmp / "three_channel.json"
    three_channel.write_text(json.dumps(pulse3))
    out4 = tmp / "export_run"
    run("export", "--pulse", str(three_channel), "--spec", pair, "--gate",
        "CNOT", "--out", str(out4))
    exported = json.loads((out4 / "schedule.json").read_text())
    check([c["name"] for c in exported["channels"]] == ["d0", "d1", "u0"],
          "X1/X2/ZX map to d0/d1/u0")

    # bench: pulse-derived channel from the converged closed-system X pulse.
    run("bench", "--spec", spec, "--pulse", str(out1 / "pulse.json"),
        "--gate", "X", "--rb-seeds", "10", "--seed", "5", "--out", str(out1))
    rb = json.loads((out1 / "rb_report.json").read_text())
    check(abs(rb["interleaved_error"]) < 1e-9,
          "closed-system pulse interleaved error < 1e-9")
    check((out1 / "rb_curves.csv").read_text().startswith(
        "length,mean_survival,stderr,curve"), "curves CSV header")

    # bench: explicit depolarizing noise oracle.
    out5 = tmp / "bench_run"
    run("bench", "--noise", "depolarizing", "--noise-p", "0.01",
        "--rb-seeds", "30", "--seed", "6", "--out", str(out5))
    rb5 = json.loads((out5 / "rb_report.json").read_text())
    check(abs(rb5["alpha"] - 0.99) < 0.002, "explicit depolarizing alpha")

    # optimize: custom unitary loaded from a JSON file (Y gate). The
    # symmetric drag start sits on a zero-overlap plateau of the |Tr|^2
    # cost for this target, so a random restart does the work.
    gate_file = tmp / "ygate.json"
    gate_file.write_text(json.dumps({
        "name": "Y",
        "unitary": [[[0, 0], [0, -1]], [[0, 1], [0, 0]]],
    }))
    out6 = tmp / "y_run"
    run("optimize", "--spec", spec, "--gate", str(gate_file), "--slots", "256",
        "--seed", "4", "--restarts", "2", "--out", str(out6))
    summary6 = json.loads((out6 / "summary.json").read_text())
    check(summary6["gate"] == "Y", "custom gate name from file")
    check(summary6["final_infidelity"] < 1e-8, "custom Y gate converges")

    # report prints both digests.
    proc = run("report", "--out", str(out1))
    check("final infidelity" in proc.stdout, "report shows optimization")
    check("alpha" in proc.stdout, "report shows benchmark")

    # documented error exits
    run("optimize", "--spec", spec, "--gate", "NOT_A_GATE", "--slots", "8",
        "--out", str(tmp / "err"), expect=2)
    run("bench", "--noise", "depolarizing", "--lengths", "1,10",
        "--out", str(tmp / "err"), expect=1)
    proc = run("bench", "--noise", "depolarizing", "--lengths", "1,10",
               "--out", str(tmp / "err"), expect=1)
    check("InsufficientLengths" in proc.stderr, "error class named on stderr")

    if FAILURES:
        print("CLI driver failures:")
        for f in FAILURES:
            print(" -", f)
        return 1
    print("CLI driver: all checks passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
