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

#include "pulsekit/schedule.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "pulsekit/errors.hpp"
#include "pulsekit/jsonio.hpp"

namespace pulsekit {

void ScheduleDoc::validate() const {
  if (dt_ns <= 0.0) throw ValidationError("schedule dt_ns must be positive");
  for (const auto& ch : channels) {
    for (const auto& s : ch.samples) {
      if (std::abs(s) > 1.0 + 1e-9) {
        throw ValidationError("channel " + ch.name +
                              " sample magnitude exceeds 1");
      }
    }
  }
}

std::map<std::string, std::string> default_channel_map() {
  return {{"X", "d0"}, {"Y", "d0"}, {"X1", "d0"}, {"X2", "d1"}, {"ZX", "u0"}};
}

ScheduleDoc export_schedule(const PulseProgram& pulse, const std::string& gate,
                            const std::string& spec_hash,
                            const std::map<std::string, std::string>& channel_map) {
  pulse.validate();
  const Eigen::Index n = pulse.n_slots();

  // Group pulse channels by hardware channel; X fills the real part, Y the
  // imaginary part of the shared drive samples.
  std::map<std::string, std::vector<std::complex<double>>> grouped;
  std::vector<std::string> order;
  for (const auto& ch : pulse.channels) {
    const auto it = channel_map.find(ch.label);
    if (it == channel_map.end()) {
      throw UnmappedChannelError("no hardware channel mapped for pulse channel " +
                                 ch.label);
    }
    auto [slot, inserted] = grouped.try_emplace(
        it->second, std::vector<std::complex<double>>(n, {0.0, 0.0}));
    if (inserted) order.push_back(it->second);
    const bool quadrature = ch.label == "Y";
    for (Eigen::Index k = 0; k < n; ++k) {
      if (quadrature) {
        slot->second[k] += std::complex<double>(0.0, ch.samples[k]);
      } else {
        slot->second[k] += std::complex<double>(ch.samples[k], 0.0);
      }
    }
  }

  ScheduleDoc doc;
  doc.dt_ns = pulse.dt;
  doc.gate = gate;
  doc.spec_hash = spec_hash;
  doc.version = PULSEKIT_VERSION;
  std::sort(order.begin(), order.end());
  for (const auto& name : order) {
    doc.channels.push_back({name, std::move(grouped[name])});
  }
  doc.validate();
  return doc;
}

PulseProgram import_schedule(const ScheduleDoc& doc,
                             const std::vector<std::string>& labels,
                             const std::vector<Bounds>& bounds,
                             const std::map<std::string, std::string>& channel_map) {
  doc.validate();

  auto hardware_channel = [&](const std::string& name) -> const ScheduleChannel* {
    for (const auto& ch : doc.channels) {
      if (ch.name == name) return &ch;
    }
    return nullptr;
  };

  std::vector<std::string> wanted = labels;
  if (wanted.empty()) {
    // Auto-detect: invert the map, splitting d0 into X (+ Y when any sample
    // has a quadrature component).
    for (const auto& ch : doc.channels) {
      std::vector<std::string> candidates;
      for (const auto& [label, hw] : channel_map) {
        if (hw == ch.name) candidates.push_back(label);
      }
      std::sort(candidates.begin(), candidates.end());
      if (candidates.empty()) {
        throw UnmappedChannelError("no pulse label mapped for hardware channel " +
                                   ch.name);
      }
      const bool has_quadrature =
          std::any_of(ch.samples.begin(), ch.samples.end(),
                      [](const std::complex<double>& s) { return s.imag() != 0.0; });
      for (const auto& label : candidates) {
        if (label == "Y" && !has_quadrature) continue;
        if (label == "X1" && std::find(candidates.begin(), candidates.end(),
                                       "X") != candidates.end()) {
          continue;  // single-qubit labels win for d0 on auto-detect
        }
        wanted.push_back(label);
      }
    }
  }
  if (!bounds.empty() && bounds.size() != wanted.size()) {
    throw ValidationError("bounds list does not match imported labels");
  }

  PulseProgram pulse;
  pulse.dt = doc.dt_ns;
  for (std::size_t i = 0; i < wanted.size(); ++i) {
    const auto& label = wanted[i];
    const auto it = channel_map.find(label);
    if (it == channel_map.end()) {
      throw UnmappedChannelError("no hardware channel mapped for label " + label);
    }
    const ScheduleChannel* hw = hardware_channel(it->second);
    if (hw == nullptr) {
      throw UnmappedChannelError("schedule lacks hardware channel " + it->second +
                                 " needed for label " + label);
    }
    PulseChannel ch;
    ch.label = label;
    ch.bounds = bounds.empty() ? Bounds{} : bounds[i];
    ch.samples.resize(static_cast<Eigen::Index>(hw->samples.size()));
    const bool quadrature = label == "Y";
    for (std::size_t k = 0; k < hw->samples.size(); ++k) {
      ch.samples[static_cast<Eigen::Index>(k)] =
          quadrature ? hw->samples[k].imag() : hw->samples[k].real();
    }
    pulse.channels.push_back(std::move(ch));
  }
  pulse.validate();
  return pulse;
}

std::string schedule_to_json_string(const ScheduleDoc& doc) {
  nlohmann::json j;
  j["dt_ns"] = doc.dt_ns;
  j["channels"] = nlohmann::json::array();
  for (const auto& ch : doc.channels) {
    nlohmann::json jc;
    jc["name"] = ch.name;
    auto samples = nlohmann::json::array();
    for (const auto& s : ch.samples) {
      samples.push_back({s.real(), s.imag()});
    }
    jc["samples"] = std::move(samples);
    j["channels"].push_back(std::move(jc));
  }
  j["meta"] = {{"gate", doc.gate},
               {"spec_hash", doc.spec_hash},
               {"version", doc.version}};
  return canonical_dump(j);
}

ScheduleDoc schedule_from_json_string(const std::string& text) {
  const nlohmann::json j = parse_json(text, "schedule");
  ScheduleDoc doc;
  try {
    doc.dt_ns = j.at("dt_ns").get<double>();
    for (const auto& jc : j.at("channels")) {
      ScheduleChannel ch;
      ch.name = jc.at("name").get<std::string>();
      for (const auto& js : jc.at("samples")) {
        ch.samples.emplace_back(js.at(0).get<double>(), js.at(1).get<double>());
      }
      doc.channels.push_back(std::move(ch));
    }
    const auto& meta = j.at("meta");
    doc.gate = meta.at("gate").get<std::string>();
    doc.spec_hash = meta.at("spec_hash").get<std::string>();
    doc.version = meta.at("version").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("schedule JSON: ") + e.what());
  }
  doc.validate();
  return doc;
}

void save_schedule(const std::filesystem::path& path, const ScheduleDoc& doc) {
  write_text_file(path, schedule_to_json_string(doc));
}

ScheduleDoc load_schedule(const std::filesystem::path& path) {
  return schedule_from_json_string(read_text_file(path));
}

}  // namespace pulsekit
