// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the locfim authors
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

#include "locfim/scenario_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "locfim/errors.hpp"
#include "locfim/version.hpp"

namespace locfim {

namespace {

using nlohmann::json;

constexpr const char* kSchema = "locfim-scenario-v1";

// Annotation keys tolerated anywhere without being part of the schema.
bool is_annotation(const std::string& key) {
  return key == "comment" || key == "notes" || key == "units";
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    if (is_annotation(item.key())) continue;
    if (std::find_if(allowed.begin(), allowed.end(),
                     [&](const char* k) { return item.key() == k; }) ==
        allowed.end()) {
      throw ParseError("unknown key \"" + item.key() + "\" in " + path);
    }
  }
}

const json& require(const json& obj, const std::string& path,
                    const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ParseError("missing field " + path + "." + key);
  }
  return *it;
}

double as_number(const json& value, const std::string& path) {
  if (!value.is_number()) throw ParseError(path + " must be a number");
  return value.get<double>();
}

int as_int(const json& value, const std::string& path) {
  if (!value.is_number_integer()) {
    throw ParseError(path + " must be an integer");
  }
  return value.get<int>();
}

Eigen::Vector2d as_vec2(const json& value, const std::string& path) {
  if (!value.is_array() || value.size() != 2) {
    throw ParseError(path + " must be an array of two numbers");
  }
  return {as_number(value[0], path + "[0]"), as_number(value[1], path + "[1]")};
}

// Shared layout of the anchor and mobile sections.
template <typename Node>
void parse_node(const json& obj, const std::string& path, double wavelength,
                Node* node) {
  if (!obj.is_object()) throw ParseError(path + " must be an object");
  check_keys(obj, path,
             {"position_m", "orientation_rad", "n_elements",
              "element_offsets_m"});
  node->position = as_vec2(require(obj, path, "position_m"),
                           path + ".position_m");
  node->orientation = as_number(require(obj, path, "orientation_rad"),
                                path + ".orientation_rad");
  const bool has_count = obj.contains("n_elements");
  const bool has_offsets = obj.contains("element_offsets_m");
  if (has_count == has_offsets) {
    throw ParseError(path + " needs exactly one of n_elements and "
                     "element_offsets_m");
  }
  if (has_count) {
    const int n = as_int(obj["n_elements"], path + ".n_elements");
    if (n < 1) throw ParseError(path + ".n_elements must be >= 1");
    node->element_offsets = half_wavelength_ula(n, wavelength);
  } else {
    const json& list = obj["element_offsets_m"];
    if (!list.is_array() || list.empty()) {
      throw ParseError(path + ".element_offsets_m must be a non-empty array");
    }
    node->element_offsets.clear();
    for (std::size_t i = 0; i < list.size(); ++i) {
      node->element_offsets.push_back(
          as_vec2(list[i], path + ".element_offsets_m[" + std::to_string(i) +
                               "]"));
    }
  }
}

double dbm_to_watts(double dbm) { return std::pow(10.0, dbm / 10.0) * 1e-3; }

SignalConfig parse_signal(const json& obj) {
  const std::string path = "signal";
  if (!obj.is_object()) throw ParseError(path + " must be an object");
  check_keys(obj, path,
             {"carrier_hz", "bandwidth_hz", "n_symbols", "n_beams",
              "symbol_time_s", "symbol_power_dbm", "symbol_energy_j",
              "noise_psd_dbm_hz", "noise_psd_w_hz"});
  SignalConfig config;
  config.carrier_hz = as_number(require(obj, path, "carrier_hz"),
                                "signal.carrier_hz");
  config.bandwidth_hz = as_number(require(obj, path, "bandwidth_hz"),
                                  "signal.bandwidth_hz");
  config.n_symbols = as_int(require(obj, path, "n_symbols"),
                            "signal.n_symbols");
  config.n_beams = as_int(require(obj, path, "n_beams"), "signal.n_beams");
  if (config.carrier_hz <= 0.0) {
    throw ParseError("signal.carrier_hz must be > 0");
  }
  if (config.bandwidth_hz <= 0.0) {
    throw ParseError("signal.bandwidth_hz must be > 0");
  }
  if (config.n_symbols < 1) throw ParseError("signal.n_symbols must be >= 1");
  if (config.n_beams < 1) throw ParseError("signal.n_beams must be >= 1");
  if (obj.contains("symbol_time_s")) {
    config.symbol_time_s = as_number(obj["symbol_time_s"],
                                     "signal.symbol_time_s");
    if (config.symbol_time_s <= 0.0) {
      throw ParseError("signal.symbol_time_s must be > 0");
    }
  }

  const bool has_dbm = obj.contains("symbol_power_dbm");
  const bool has_joule = obj.contains("symbol_energy_j");
  if (has_dbm == has_joule) {
    throw ParseError("signal needs exactly one of symbol_power_dbm and "
                     "symbol_energy_j");
  }
  config.symbol_energy_j =
      has_joule ? as_number(obj["symbol_energy_j"], "signal.symbol_energy_j")
                : dbm_to_watts(as_number(obj["symbol_power_dbm"],
                                         "signal.symbol_power_dbm")) *
                      config.symbol_time();
  if (config.symbol_energy_j <= 0.0) {
    throw ParseError("signal symbol energy must be > 0");
  }

  const bool has_psd_dbm = obj.contains("noise_psd_dbm_hz");
  const bool has_psd_w = obj.contains("noise_psd_w_hz");
  if (has_psd_dbm == has_psd_w) {
    throw ParseError("signal needs exactly one of noise_psd_dbm_hz and "
                     "noise_psd_w_hz");
  }
  config.noise_psd_w_hz =
      has_psd_w ? as_number(obj["noise_psd_w_hz"], "signal.noise_psd_w_hz")
                : dbm_to_watts(as_number(obj["noise_psd_dbm_hz"],
                                         "signal.noise_psd_dbm_hz"));
  if (config.noise_psd_w_hz <= 0.0) {
    throw ParseError("signal noise density must be > 0");
  }
  return config;
}

void parse_sweep(const json& obj, GridAxis* x, GridAxis* y) {
  if (!obj.is_object()) throw ParseError("sweep must be an object");
  check_keys(obj, "sweep",
             {"x_min_m", "x_max_m", "x_n", "y_min_m", "y_max_m", "y_n"});
  x->min = as_number(require(obj, "sweep", "x_min_m"), "sweep.x_min_m");
  x->max = as_number(require(obj, "sweep", "x_max_m"), "sweep.x_max_m");
  x->n = as_int(require(obj, "sweep", "x_n"), "sweep.x_n");
  y->min = as_number(require(obj, "sweep", "y_min_m"), "sweep.y_min_m");
  y->max = as_number(require(obj, "sweep", "y_max_m"), "sweep.y_max_m");
  y->n = as_int(require(obj, "sweep", "y_n"), "sweep.y_n");
  if (x->n < 1 || y->n < 1 || !(x->min < x->max) || !(y->min < y->max)) {
    throw ParseError("sweep axes need n >= 1 and min < max");
  }
}

int line_of_byte(const std::string& text, std::size_t byte) {
  const std::size_t end = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + end,
                                         '\n'));
}

}  // namespace

ScenarioDoc parse_scenario_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("malformed JSON at line " +
                     std::to_string(line_of_byte(text, e.byte)) + ": " +
                     e.what());
  }
  if (!root.is_object()) throw ParseError("top level must be an object");
  check_keys(root, "top level",
             {"schema", "anchor", "mobile", "incidence_points_m", "has_los",
              "signal", "reflection_power", "seed", "sweep"});

  const json& schema = require(root, "top level", "schema");
  if (!schema.is_string() || schema.get<std::string>() != kSchema) {
    throw ParseError(std::string("schema must be \"") + kSchema + "\"");
  }

  ScenarioDoc doc;
  doc.config = parse_signal(require(root, "top level", "signal"));
  const double wavelength = kSpeedOfLight / doc.config.carrier_hz;

  parse_node(require(root, "top level", "anchor"), "anchor", wavelength,
             &doc.scenario.anchor);
  parse_node(require(root, "top level", "mobile"), "mobile", wavelength,
             &doc.scenario.mobile);

  if (root.contains("incidence_points_m")) {
    const json& list = root["incidence_points_m"];
    if (!list.is_array()) {
      throw ParseError("incidence_points_m must be an array");
    }
    for (std::size_t i = 0; i < list.size(); ++i) {
      doc.scenario.incidence_points.push_back(as_vec2(
          list[i], "incidence_points_m[" + std::to_string(i) + "]"));
    }
  }
  if (root.contains("has_los")) {
    if (!root["has_los"].is_boolean()) {
      throw ParseError("has_los must be a boolean");
    }
    doc.scenario.has_los = root["has_los"].get<bool>();
  }
  if (root.contains("reflection_power")) {
    doc.reflection_power = as_number(root["reflection_power"],
                                     "reflection_power");
    if (doc.reflection_power <= 0.0 || doc.reflection_power > 1.0) {
      throw ParseError("reflection_power must be in (0, 1]");
    }
  }
  if (root.contains("seed")) {
    if (!root["seed"].is_number_unsigned()) {
      throw ParseError("seed must be a non-negative integer");
    }
    doc.seed = root["seed"].get<std::uint64_t>();
  }
  if (root.contains("sweep")) {
    parse_sweep(root["sweep"], &doc.sweep_x, &doc.sweep_y);
  }

  validate_scenario(doc.scenario);
  return doc;
}

ScenarioDoc load_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open scenario file " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    ScenarioDoc doc = parse_scenario_json(buffer.str());
    doc.source_path = path;
    return doc;
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string serialize_scenario(const ScenarioDoc& doc) {
  json root;
  root["schema"] = kSchema;

  auto node_json = [](const auto& node) {
    json n;
    n["position_m"] = {node.position.x(), node.position.y()};
    n["orientation_rad"] = node.orientation;
    json offsets = json::array();
    for (const Eigen::Vector2d& o : node.element_offsets) {
      offsets.push_back({o.x(), o.y()});
    }
    n["element_offsets_m"] = std::move(offsets);
    return n;
  };
  root["anchor"] = node_json(doc.scenario.anchor);
  root["mobile"] = node_json(doc.scenario.mobile);

  json points = json::array();
  for (const Eigen::Vector2d& s : doc.scenario.incidence_points) {
    points.push_back({s.x(), s.y()});
  }
  root["incidence_points_m"] = std::move(points);
  root["has_los"] = doc.scenario.has_los;

  json signal;
  signal["carrier_hz"] = doc.config.carrier_hz;
  signal["bandwidth_hz"] = doc.config.bandwidth_hz;
  signal["n_symbols"] = doc.config.n_symbols;
  signal["n_beams"] = doc.config.n_beams;
  if (doc.config.symbol_time_s > 0.0) {
    signal["symbol_time_s"] = doc.config.symbol_time_s;
  }
  signal["symbol_energy_j"] = doc.config.symbol_energy_j;
  signal["noise_psd_w_hz"] = doc.config.noise_psd_w_hz;
  root["signal"] = std::move(signal);

  root["reflection_power"] = doc.reflection_power;
  root["seed"] = doc.seed;
  root["sweep"] = {{"x_min_m", doc.sweep_x.min}, {"x_max_m", doc.sweep_x.max},
                   {"x_n", doc.sweep_x.n},       {"y_min_m", doc.sweep_y.min},
                   {"y_max_m", doc.sweep_y.max}, {"y_n", doc.sweep_y.n}};
  return root.dump(2) + "\n";
}

std::string fnv1a64_hex(const std::string& bytes) {
  std::uint64_t hash = 14695981039346656037ull;
  for (unsigned char byte : bytes) {
    hash ^= byte;
    hash *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(hash));
  return buf;
}

void write_manifest(const std::string& directory,
                    const RunManifest& manifest) {
  json j;
  j["schema"] = "locfim-run-manifest-v1";
  j["input_hash"] = manifest.input_hash;
  j["seed"] = manifest.seed;
  j["tool_version"] = manifest.tool_version;
  j["wall_time_s"] = manifest.wall_time_s;
  j["outputs"] = manifest.outputs;

  namespace fs = std::filesystem;
  const fs::path dir(directory);
  const fs::path tmp = dir / "run_manifest.json.tmp";
  const fs::path final_path = dir / "run_manifest.json";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) {
      throw std::runtime_error("cannot open " + tmp.string() +
                               " for writing");
    }
    out << j.dump(2) << "\n";
    if (!out.good()) throw std::runtime_error("short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, final_path, ec);
  if (ec) {
    throw std::runtime_error("cannot move manifest into place: " +
                             ec.message());
  }
}

}  // namespace locfim
