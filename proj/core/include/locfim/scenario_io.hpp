// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the locfim authors
//
// Scenario files and run manifests. Scenario files are schema-checked JSON
// with units in the field names; power-like quantities may be given in dBm
// and are converted to linear SI at parse time. Serialization is canonical
// (plain SI, explicit element offsets) and round-trips exactly.
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// of the License at http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "locfim/bounds.hpp"
#include "locfim/sweep.hpp"

namespace locfim {

// A parsed scenario file: the scene, the waveform, and run defaults.
struct ScenarioDoc {
  Scenario scenario;
  SignalConfig config;
  std::uint64_t seed = 1;
  double reflection_power = 0.7;
  GridAxis sweep_x;  // defaults to (0, 10] at n = 50
  GridAxis sweep_y;
  std::string source_path;  // informational, not serialized
};

// Parses scenario JSON. Throws ParseError with a line number for malformed
// JSON and with the offending field path for schema violations; geometry is
// validated too (GeometryError names the offending node).
ScenarioDoc parse_scenario_json(const std::string& text);
ScenarioDoc load_scenario_file(const std::string& path);

// Canonical serialization: SI units only, sorted keys, explicit offsets.
std::string serialize_scenario(const ScenarioDoc& doc);

// Provenance record written next to generated outputs.
struct RunManifest {
  std::string input_hash;  // fnv1a-64 of the input file bytes, hex
  std::uint64_t seed = 0;
  std::string tool_version;
  double wall_time_s = 0.0;
  std::vector<std::string> outputs;  // file names relative to the directory
};

// 64-bit FNV-1a of a byte string, lower-case hex.
std::string fnv1a64_hex(const std::string& bytes);

// Writes run_manifest.json into `directory` atomically (temp file + rename).
void write_manifest(const std::string& directory, const RunManifest& manifest);

}  // namespace locfim
