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

#include "pulsekit/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include <json.hpp>

#include "pulsekit/errors.hpp"
#include "pulsekit/jsonio.hpp"
#include "pulsekit/qmath.hpp"

namespace pulsekit {

namespace {

double clip(double x, const Bounds& b) { return std::clamp(x, b.lo, b.hi); }

void check_amplitude(double amplitude, const Bounds& b) {
  const double margin = 0.1 * (b.hi - b.lo);
  if (amplitude > b.hi + margin || amplitude < b.lo - margin) {
    throw BadShapeParamsError("shape amplitude " + std::to_string(amplitude) +
                              " exceeds channel bounds by more than 10%");
  }
}

double gaussian(double t, double mu, double sigma) {
  const double z = (t - mu) / sigma;
  return std::exp(-0.5 * z * z);
}

}  // namespace

const PulseChannel* PulseProgram::channel(const std::string& label) const {
  for (const auto& ch : channels) {
    if (ch.label == label) return &ch;
  }
  return nullptr;
}

void PulseProgram::validate() const {
  if (dt <= 0.0) throw ValidationError("dt must be strictly positive");
  if (channels.empty()) throw ValidationError("pulse has no channels");
  const Eigen::Index n = channels.front().samples.size();
  if (n < 1) throw ValidationError("n_slots must be >= 1");
  for (const auto& ch : channels) {
    if (ch.samples.size() != n) {
      throw ValidationError("channel " + ch.label +
                            " length differs from the first channel");
    }
    if (ch.bounds.lo > ch.bounds.hi) {
      throw ValidationError("channel " + ch.label + " has lo > hi");
    }
    for (Eigen::Index k = 0; k < n; ++k) {
      if (ch.samples[k] < ch.bounds.lo - 1e-12 ||
          ch.samples[k] > ch.bounds.hi + 1e-12) {
        throw ValidationError("channel " + ch.label + " sample " +
                              std::to_string(k) + " leaves its bounds");
      }
    }
  }
}

ShapeKind shape_kind_from_string(const std::string& name) {
  if (name == "drag") return ShapeKind::drag;
  if (name == "gaussian_square") return ShapeKind::gaussian_square;
  if (name == "sine") return ShapeKind::sine;
  if (name == "constant") return ShapeKind::constant;
  if (name == "random") return ShapeKind::random;
  throw BadShapeParamsError("unknown shape kind: " + name);
}

std::string to_string(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::drag: return "drag";
    case ShapeKind::gaussian_square: return "gaussian_square";
    case ShapeKind::sine: return "sine";
    case ShapeKind::constant: return "constant";
    case ShapeKind::random: return "random";
  }
  return "constant";
}

PulseProgram make_initial(const ShapeSpec& shape, Eigen::Index n_slots,
                          double dt, const std::vector<std::string>& channels,
                          const std::vector<Bounds>& bounds) {
  if (n_slots < 1) throw BadShapeParamsError("n_slots must be >= 1");
  if (dt <= 0.0) throw BadShapeParamsError("dt must be strictly positive");
  if (channels.empty()) throw BadShapeParamsError("no channels requested");
  if (!bounds.empty() && bounds.size() != channels.size()) {
    throw BadShapeParamsError("bounds list does not match channel list");
  }
  const bool needs_sigma =
      shape.kind == ShapeKind::drag || shape.kind == ShapeKind::gaussian_square;
  if (needs_sigma && shape.sigma <= 0.0) {
    throw BadShapeParamsError("sigma must be strictly positive");
  }
  if (shape.kind == ShapeKind::gaussian_square &&
      (shape.width < 0.0 || shape.width > n_slots * dt)) {
    throw BadShapeParamsError("flat-top width must lie within the pulse");
  }

  const double total = static_cast<double>(n_slots) * dt;
  const double mu = 0.5 * total;

  PulseProgram p;
  p.dt = dt;
  std::mt19937_64 rng(shape.seed);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);

  for (std::size_t c = 0; c < channels.size(); ++c) {
    PulseChannel ch;
    ch.label = channels[c];
    ch.bounds = bounds.empty() ? Bounds{} : bounds[c];
    check_amplitude(shape.amplitude, ch.bounds);
    ch.samples.resize(n_slots);
    for (Eigen::Index k = 0; k < n_slots; ++k) {
      const double t = (static_cast<double>(k) + 0.5) * dt;  // slot midpoint
      double v = 0.0;
      switch (shape.kind) {
        case ShapeKind::constant:
          v = shape.amplitude;
          break;
        case ShapeKind::sine:
          v = shape.amplitude * std::sin(kTwoPi * shape.periods * t / total);
          break;
        case ShapeKind::drag: {
          const double g = gaussian(t, mu, shape.sigma);
          if (ch.label == "Y") {
            // beta * sigma * d/dt of the in-phase Gaussian, kept dimensionless.
            v = -shape.beta * shape.amplitude * ((t - mu) / shape.sigma) * g;
          } else {
            v = shape.amplitude * g;
          }
          break;
        }
        case ShapeKind::gaussian_square: {
          const double rise = 0.5 * (total - shape.width);
          if (t < rise) {
            v = shape.amplitude * gaussian(t, rise, shape.sigma);
          } else if (t > rise + shape.width) {
            v = shape.amplitude * gaussian(t, rise + shape.width, shape.sigma);
          } else {
            v = shape.amplitude;
          }
          break;
        }
        case ShapeKind::random:
          v = shape.amplitude * uniform(rng);
          break;
      }
      ch.samples[k] = clip(v, ch.bounds);
    }
    p.channels.push_back(std::move(ch));
  }
  p.validate();
  return p;
}

PulseProgram resample(const PulseProgram& p, Eigen::Index new_n_slots) {
  if (new_n_slots < 1) throw BadShapeParamsError("new_n_slots must be >= 1");
  const Eigen::Index n_in = p.n_slots();
  PulseProgram out;
  out.dt = p.dt;
  for (const auto& ch : p.channels) {
    PulseChannel nc;
    nc.label = ch.label;
    nc.bounds = ch.bounds;
    nc.samples.resize(new_n_slots);
    for (Eigen::Index j = 0; j < new_n_slots; ++j) {
      nc.samples[j] = ch.samples[(j * n_in) / new_n_slots];
    }
    out.channels.push_back(std::move(nc));
  }
  return out;
}

std::string pulse_to_json_string(const PulseProgram& p) {
  nlohmann::json j;
  j["dt_ns"] = p.dt;
  j["channels"] = nlohmann::json::array();
  nlohmann::json bounds = nlohmann::json::object();
  for (const auto& ch : p.channels) {
    nlohmann::json jc;
    jc["label"] = ch.label;
    jc["samples"] = std::vector<double>(ch.samples.begin(), ch.samples.end());
    j["channels"].push_back(jc);
    bounds[ch.label] = {ch.bounds.lo, ch.bounds.hi};
  }
  j["bounds"] = bounds;
  return canonical_dump(j);
}

PulseProgram pulse_from_json_string(const std::string& text) {
  const nlohmann::json j = parse_json(text, "pulse");
  PulseProgram p;
  try {
    p.dt = j.at("dt_ns").get<double>();
    for (const auto& jc : j.at("channels")) {
      PulseChannel ch;
      ch.label = jc.at("label").get<std::string>();
      const auto samples = jc.at("samples").get<std::vector<double>>();
      ch.samples = Eigen::Map<const Eigen::VectorXd>(
          samples.data(), static_cast<Eigen::Index>(samples.size()));
      if (j.contains("bounds") && j["bounds"].contains(ch.label)) {
        const auto& b = j["bounds"][ch.label];
        ch.bounds = {b.at(0).get<double>(), b.at(1).get<double>()};
      }
      p.channels.push_back(std::move(ch));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("pulse JSON: ") + e.what());
  }
  p.validate();
  return p;
}

void save_pulse(const std::filesystem::path& path, const PulseProgram& p) {
  write_text_file(path, pulse_to_json_string(p));
}

PulseProgram load_pulse(const std::filesystem::path& path) {
  return pulse_from_json_string(read_text_file(path));
}

}  // namespace pulsekit
