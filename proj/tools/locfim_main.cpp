// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the locfim authors
//
// Command line front end: decompose, bounds, sweep and compare subcommands
// over scenario JSON files.
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

#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "locfim/bounds.hpp"
#include "locfim/scenario_io.hpp"
#include "locfim/sweep.hpp"
#include "locfim/version.hpp"

namespace {

using nlohmann::json;

// printf-style formatting into a std::string (no std::format on this
// toolchain baseline).
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof buf, f, args);
  va_end(args);
  return buf;
}

struct CommonOptions {
  std::string file;
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool fast = false;
  bool as_json = false;
  int n_tx = 0;  // 0 keeps the scenario's anchor array
};

void add_common(CLI::App* cmd, CommonOptions* opts) {
  cmd->add_option("scenario", opts->file, "scenario JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", opts->seed, "override the scenario seed")
      ->each([opts](const std::string&) { opts->seed_set = true; });
  cmd->add_flag("--fast", opts->fast,
                "closed-form per-path accuracies (skips the full channel "
                "information matrix)");
  cmd->add_flag("--json", opts->as_json, "machine-readable output");
  cmd->add_option("--ntx", opts->n_tx,
                  "replace the anchor array by a half-wavelength uniform "
                  "line of this many elements")
      ->check(CLI::PositiveNumber);
}

locfim::ScenarioDoc load_doc(const CommonOptions& opts) {
  locfim::ScenarioDoc doc = locfim::load_scenario_file(opts.file);
  if (opts.seed_set) doc.seed = opts.seed;
  if (opts.n_tx > 0) {
    doc.scenario.anchor.element_offsets = locfim::half_wavelength_ula(
        opts.n_tx, locfim::kSpeedOfLight / doc.config.carrier_hz);
  }
  return doc;
}

locfim::PipelineOptions pipeline_options(const locfim::ScenarioDoc& doc,
                                         bool fast) {
  locfim::PipelineOptions options;
  options.seed = doc.seed;
  options.fast = fast;
  options.reflection_power = doc.reflection_power;
  return options;
}

void warn_narrowband(const locfim::ScenarioEvaluation& eval) {
  if (eval.narrowband_warning) {
    std::cerr << "warning: array aperture is not small against c/bandwidth; "
                 "the narrowband array model is strained\n";
  }
}

const char* source_name(locfim::TermSource source) {
  switch (source) {
    case locfim::TermSource::direct_delay:
      return "direct delay";
    case locfim::TermSource::direct_aod:
      return "direct departure";
    case locfim::TermSource::direct_aoa:
      return "direct arrival";
    case locfim::TermSource::reflected:
      return "reflected net";
  }
  return "?";
}

json term_json(const locfim::RankOneTerm& term) {
  const locfim::ProjectedGains gains = locfim::projected_gains(term);
  json t;
  t["source"] = source_name(term.source);
  t["path"] = term.path_index;
  t["magnitude"] = term.lam;
  t["direction"] = {term.v(0), term.v(1), term.v(2)};
  t["translation_gain"] = gains.lam_xy;
  t["rotation_gain"] = gains.lam_alpha;
  t["magnitude_capped"] = term.magnitude_capped;
  t["zero_cross_coupling"] = term.zero_cross_coupling;
  return t;
}

json report_json(const locfim::BoundReport& report) {
  json r;
  r["peb_m"] = report.peb;
  r["oeb_rad"] = report.oeb;
  r["efim_rank"] = report.efim_rank;
  r["condition_number"] = report.condition_number;
  return r;
}

void print_report_line(const locfim::BoundReport& report) {
  std::cout << fmt("PEB %.6g m   OEB %.6g rad   rank %d   condition %.3g\n",
                   report.peb, report.oeb, report.efim_rank,
                   report.condition_number);
}

int run_bounds(const CommonOptions& opts) {
  const locfim::ScenarioDoc doc = load_doc(opts);
  const locfim::ScenarioEvaluation eval = locfim::evaluate_scenario_full(
      doc.scenario, doc.config, pipeline_options(doc, opts.fast));
  warn_narrowband(eval);
  if (opts.as_json) {
    json out = report_json(eval.report);
    out["schema"] = "locfim-bounds-v1";
    out["narrowband_warning"] = eval.narrowband_warning;
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  std::cout << fmt("%s: %d path(s)%s\n", opts.file.c_str(),
                   doc.scenario.n_paths(),
                   doc.scenario.has_los ? ", direct path present" : "");
  print_report_line(eval.report);
  return 0;
}

int run_decompose(const CommonOptions& opts) {
  const locfim::ScenarioDoc doc = load_doc(opts);
  const locfim::ScenarioEvaluation eval = locfim::evaluate_scenario_full(
      doc.scenario, doc.config, pipeline_options(doc, opts.fast));
  warn_narrowband(eval);
  const locfim::EfimDecomposition& dec = eval.decomposition;

  if (opts.as_json) {
    json out;
    out["schema"] = "locfim-decompose-v1";
    out["bounds"] = report_json(eval.report);
    out["narrowband_warning"] = eval.narrowband_warning;
    json terms = json::array();
    for (const locfim::RankOneTerm& t : eval.report.terms) {
      terms.push_back(term_json(t));
    }
    out["terms"] = std::move(terms);
    for (int r = 0; r < 3; ++r) {
      out["efim"].push_back(
          {dec.efim(r, 0), dec.efim(r, 1), dec.efim(r, 2)});
    }
    std::cout << out.dump(2) << "\n";
    return 0;
  }

  std::cout << fmt("%s: %d path(s)%s\n", opts.file.c_str(),
                   doc.scenario.n_paths(),
                   doc.scenario.has_los ? ", direct path present" : "");
  print_report_line(eval.report);
  std::cout << "\nrank-one information terms (pose frame: x, y, rotation):\n";
  std::cout << fmt("%-18s %4s %12s %9s %9s %9s %12s %12s\n", "term", "path",
                   "magnitude", "v_x", "v_y", "v_rot", "trans_gain",
                   "rot_gain");
  for (const locfim::RankOneTerm& t : eval.report.terms) {
    const locfim::ProjectedGains gains = locfim::projected_gains(t);
    std::cout << fmt("%-18s %4d %12.5g %9.5f %9.5f %9.5f %12.5g %12.5g%s\n",
                     source_name(t.source), t.path_index, t.lam, t.v(0),
                     t.v(1), t.v(2), gains.lam_xy, gains.lam_alpha,
                     t.magnitude_capped ? "  (capped)" : "");
  }
  std::cout << "\nequivalent information matrix:\n";
  for (int r = 0; r < 3; ++r) {
    std::cout << fmt("  %13.6g %13.6g %13.6g\n", dec.efim(r, 0),
                     dec.efim(r, 1), dec.efim(r, 2));
  }
  return 0;
}

struct SweepOptions {
  CommonOptions common;
  std::string out_dir = ".";
  int grid = 0;  // 0 keeps the scenario's sweep grid
};

int run_sweep(const SweepOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  const locfim::ScenarioDoc doc = load_doc(opts.common);
  if (!doc.scenario.has_los || doc.scenario.n_reflected() != 0) {
    throw locfim::ParseError(
        "sweep needs a direct-path-only scenario (has_los true, no "
        "incidence points)");
  }
  locfim::GridAxis x = doc.sweep_x;
  locfim::GridAxis y = doc.sweep_y;
  if (opts.grid > 0) {
    x.n = opts.grid;
    y.n = opts.grid;
  }

  const locfim::SweepResult result = locfim::sweep_incidence_grid(
      doc.scenario, doc.config, pipeline_options(doc, opts.common.fast), x,
      y);

  namespace fs = std::filesystem;
  fs::create_directories(opts.out_dir);
  const fs::path dir(opts.out_dir);
  locfim::write_sweep_csv(result, (dir / "sweep.csv").string());
  locfim::write_sweep_svg(result, (dir / "sweep.svg").string());
  {
    std::ofstream summary(dir / "summary.json", std::ios::binary);
    summary << locfim::sweep_summary_json(result);
  }

  // Provenance: hash of the input bytes as given, plus what was written.
  std::ifstream in(opts.common.file, std::ios::binary);
  std::ostringstream bytes;
  bytes << in.rdbuf();
  locfim::RunManifest manifest;
  manifest.input_hash = locfim::fnv1a64_hex(bytes.str());
  manifest.seed = doc.seed;
  manifest.tool_version = locfim::kVersion;
  manifest.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  manifest.outputs = {"summary.json", "sweep.csv", "sweep.svg"};
  locfim::write_manifest(opts.out_dir, manifest);

  std::cout << fmt("baseline: PEB %.6g m, OEB %.6g rad over %dx%d cells "
                   "(%d valid)\n",
                   result.base_peb, result.base_oeb, x.n, y.n,
                   result.n_valid);
  std::cout << fmt("max translation gain %.6g at (%.3g, %.3g) m\n",
                   result.lam_xy_stats.max, result.lam_xy_stats.argmax_x,
                   result.lam_xy_stats.argmax_y);
  std::cout << fmt("max PEB improvement %.4g%% at (%.3g, %.3g) m\n",
                   100.0 * result.delta_peb_stats.max,
                   result.delta_peb_stats.argmax_x,
                   result.delta_peb_stats.argmax_y);
  std::cout << "wrote sweep.csv, sweep.svg, summary.json, run_manifest.json "
               "to "
            << opts.out_dir << "\n";
  return 0;
}

struct CompareOptions {
  CommonOptions common;  // common.file is the first scenario
  std::string file_b;
};

void require_same_signal(const locfim::SignalConfig& a,
                         const locfim::SignalConfig& b) {
  const bool same = a.carrier_hz == b.carrier_hz &&
                    a.bandwidth_hz == b.bandwidth_hz &&
                    a.n_symbols == b.n_symbols &&
                    a.symbol_time_s == b.symbol_time_s &&
                    a.symbol_energy_j == b.symbol_energy_j &&
                    a.noise_psd_w_hz == b.noise_psd_w_hz &&
                    a.n_beams == b.n_beams;
  if (!same) {
    throw locfim::ParseError(
        "compare needs identical signal sections in both scenarios");
  }
}

int run_compare(const CompareOptions& opts) {
  const locfim::ScenarioDoc doc_a = load_doc(opts.common);
  CommonOptions opts_b = opts.common;
  opts_b.file = opts.file_b;
  const locfim::ScenarioDoc doc_b = load_doc(opts_b);
  require_same_signal(doc_a.config, doc_b.config);

  const locfim::ScenarioEvaluation eval_a = locfim::evaluate_scenario_full(
      doc_a.scenario, doc_a.config, pipeline_options(doc_a,
                                                     opts.common.fast));
  const locfim::ScenarioEvaluation eval_b = locfim::evaluate_scenario_full(
      doc_b.scenario, doc_b.config, pipeline_options(doc_b,
                                                     opts.common.fast));
  warn_narrowband(eval_a);
  warn_narrowband(eval_b);

  const double peb_ratio = eval_b.report.peb / eval_a.report.peb;
  const double oeb_ratio = eval_b.report.oeb / eval_a.report.oeb;
  if (opts.common.as_json) {
    json out;
    out["schema"] = "locfim-compare-v1";
    out["a"] = report_json(eval_a.report);
    out["a"]["file"] = opts.common.file;
    out["b"] = report_json(eval_b.report);
    out["b"]["file"] = opts.file_b;
    out["peb_ratio"] = peb_ratio;
    out["oeb_ratio"] = oeb_ratio;
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  std::cout << fmt("%-40s ", opts.common.file.c_str());
  print_report_line(eval_a.report);
  std::cout << fmt("%-40s ", opts.file_b.c_str());
  print_report_line(eval_b.report);
  std::cout << fmt("PEB ratio (b/a) %.6g   OEB ratio (b/a) %.6g\n", peb_ratio,
                   oeb_ratio);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"position and orientation information bounds for a "
               "single-anchor scene with reflectors"};
  app.set_version_flag("--version", locfim::kVersion);
  app.require_subcommand(1);

  CommonOptions bounds_opts;
  CLI::App* bounds_cmd =
      app.add_subcommand("bounds", "position and orientation error bounds");
  add_common(bounds_cmd, &bounds_opts);

  CommonOptions decompose_opts;
  CLI::App* decompose_cmd = app.add_subcommand(
      "decompose", "rank-one decomposition of the location information");
  add_common(decompose_cmd, &decompose_opts);

  SweepOptions sweep_opts;
  CLI::App* sweep_cmd = app.add_subcommand(
      "sweep", "move one reflector over a grid and map its contribution");
  add_common(sweep_cmd, &sweep_opts.common);
  sweep_cmd->add_option("--out", sweep_opts.out_dir, "output directory")
      ->capture_default_str();
  sweep_cmd->add_option("--grid", sweep_opts.grid,
                        "override the number of cells per axis")
      ->check(CLI::PositiveNumber);

  CompareOptions compare_opts;
  CLI::App* compare_cmd = app.add_subcommand(
      "compare", "bounds of two scenarios sharing one signal configuration");
  add_common(compare_cmd, &compare_opts.common);
  compare_cmd
      ->add_option("scenario_b", compare_opts.file_b, "second scenario file")
      ->required()
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
    if (bounds_cmd->parsed()) return run_bounds(bounds_opts);
    if (decompose_cmd->parsed()) return run_decompose(decompose_opts);
    if (sweep_cmd->parsed()) return run_sweep(sweep_opts);
    if (compare_cmd->parsed()) return run_compare(compare_opts);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const locfim::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const locfim::GeometryError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const locfim::NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
