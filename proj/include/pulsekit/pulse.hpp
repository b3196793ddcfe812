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
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace pulsekit {

/// Per-channel amplitude box.
struct Bounds {
  double lo = -1.0;
  double hi = 1.0;
};

/// Preset matching the unipolar amplitude convention of single-channel
/// drives; bipolar is the default (required for quadrature shaping).
inline Bounds unit_bounds() { return {0.0, 1.0}; }

struct PulseChannel {
  std::string label;
  Eigen::VectorXd samples;  // dimensionless, one value per timeslot
  Bounds bounds;
};

/// Piecewise-constant pulse program on a uniform dt grid. Amplitudes are
/// dimensionless; the Hamiltonian model supplies the physical scale.
struct PulseProgram {
  double dt = 0.0;  // ns
  std::vector<PulseChannel> channels;

  Eigen::Index n_slots() const {
    return channels.empty() ? 0 : channels.front().samples.size();
  }
  double duration() const { return static_cast<double>(n_slots()) * dt; }
  const PulseChannel* channel(const std::string& label) const;

  /// Throws ValidationError if channels disagree on length or any sample
  /// leaves its bounds.
  void validate() const;
};

enum class ShapeKind { drag, gaussian_square, sine, constant, random };

ShapeKind shape_kind_from_string(const std::string& name);
std::string to_string(ShapeKind kind);

/// Analytic initial-shape description. Only the parameters relevant to
/// `kind` are read.
struct ShapeSpec {
  ShapeKind kind = ShapeKind::constant;
  double amplitude = 0.0;  // dimensionless peak
  double sigma = 0.0;      // ns (drag, gaussian_square)
  double beta = 0.2;       // drag quadrature weight
  double width = 0.0;      // gaussian_square flat-top, ns
  double periods = 1.0;    // sine
  std::uint64_t seed = 0;  // random
};

/// Samples the named shape at slot midpoints (k + 1/2)*dt and clips into
/// bounds. For drag, channels labeled "Y" receive beta * sigma * d/dt of
/// the in-phase Gaussian; every other channel receives the Gaussian.
/// `bounds` may be empty (all channels default) or match `channels`.
PulseProgram make_initial(const ShapeSpec& shape, Eigen::Index n_slots,
                          double dt, const std::vector<std::string>& channels,
                          const std::vector<Bounds>& bounds = {});

/// Nearest-neighbor resampling onto `new_n_slots` slots at the same dt;
/// slot j copies input slot floor(j * n_in / n_out).
PulseProgram resample(const PulseProgram& p, Eigen::Index new_n_slots);

std::string pulse_to_json_string(const PulseProgram& p);
PulseProgram pulse_from_json_string(const std::string& text);
void save_pulse(const std::filesystem::path& path, const PulseProgram& p);
PulseProgram load_pulse(const std::filesystem::path& path);

}  // namespace pulsekit
