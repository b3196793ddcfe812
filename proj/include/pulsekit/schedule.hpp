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

#include <complex>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "pulsekit/pulse.hpp"

namespace pulsekit {

/// One hardware channel of complex drive samples (|sample| <= 1).
struct ScheduleChannel {
  std::string name;  // d0, d1, u0, ...
  std::vector<std::complex<double>> samples;
};

/// OpenPulse-style schedule document: named channels of complex samples on
/// the device dt grid, plus provenance metadata.
struct ScheduleDoc {
  double dt_ns = 0.0;
  std::vector<ScheduleChannel> channels;
  std::string gate;
  std::string spec_hash;
  std::string version;

  void validate() const;
};

/// Default control-label -> hardware-channel table. X/Y quadratures fold
/// into one complex d0 sample (X + iY); the two-qubit labels map X1 -> d0,
/// X2 -> d1 and the cross-resonance line ZX -> u0.
std::map<std::string, std::string> default_channel_map();

/// Renders a pulse into a schedule document. Throws UnmappedChannelError if
/// a pulse channel has no entry in the map.
ScheduleDoc export_schedule(const PulseProgram& pulse, const std::string& gate,
                            const std::string& spec_hash,
                            const std::map<std::string, std::string>& channel_map =
                                default_channel_map());

/// Inverse of export_schedule. `labels` selects which control labels to
/// reconstruct (required to distinguish an X-only pulse from an X/Y pulse
/// whose quadrature is identically zero); empty means auto-detect. Bounds
/// are not stored in the schedule, so callers may pass them back in.
PulseProgram import_schedule(const ScheduleDoc& doc,
                             const std::vector<std::string>& labels = {},
                             const std::vector<Bounds>& bounds = {},
                             const std::map<std::string, std::string>& channel_map =
                                 default_channel_map());

std::string schedule_to_json_string(const ScheduleDoc& doc);
ScheduleDoc schedule_from_json_string(const std::string& text);
void save_schedule(const std::filesystem::path& path, const ScheduleDoc& doc);
ScheduleDoc load_schedule(const std::filesystem::path& path);

}  // namespace pulsekit
