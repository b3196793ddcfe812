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

#include <filesystem>
#include <string>

#include <json.hpp>

namespace pulsekit {

/// Canonical serialization: keys sorted (nlohmann's ordered map), two-space
/// indent, shortest round-trip floats, trailing newline. Identical values
/// always produce identical bytes.
std::string canonical_dump(const nlohmann::json& j);

/// Parse with ParseError wrapping (includes byte position and file name).
nlohmann::json parse_json(const std::string& text, const std::string& origin);
nlohmann::json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

/// 64-bit FNV-1a content hash, hex-encoded; stamps exported schedules with
/// the device spec they were built against.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace pulsekit
