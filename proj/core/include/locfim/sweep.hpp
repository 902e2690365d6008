// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the locfim authors
//
// Incidence-point sweeps: move one reflector over a grid, record the net
// rank-one gain split and the bound improvement over the direct-only
// baseline, and render the results as CSV, SVG and a JSON summary.
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

#include <string>
#include <vector>

#include "locfim/bounds.hpp"

namespace locfim {

// Half-open axis (min, max]: n sample points at min + (i + 1) (max - min) / n.
struct GridAxis {
  double min = 0.0;  // [m]
  double max = 10.0; // [m]
  int n = 50;

  double coordinate(int i) const { return min + (i + 1) * (max - min) / n; }
};

struct SweepCell {
  double x = 0.0;          // incidence point [m]
  double y = 0.0;
  double lam_xy = 0.0;     // net translation gain of the swept reflector
  double lam_alpha = 0.0;  // net rotation gain
  double delta_peb = 0.0;  // relative PEB improvement over the baseline
  bool valid = false;      // false where the point collides with p or q
};

struct FieldStats {
  double max = 0.0;
  double min = 0.0;
  double argmax_x = 0.0;
  double argmax_y = 0.0;
};

struct SweepResult {
  GridAxis x_axis;
  GridAxis y_axis;
  std::vector<SweepCell> cells;  // row-major, index = iy * x_axis.n + ix
  Eigen::Vector2d anchor_position{0.0, 0.0};  // copied from the baseline [m]
  Eigen::Vector2d mobile_position{0.0, 0.0};
  double base_peb = 0.0;
  double base_oeb = 0.0;
  FieldStats lam_xy_stats;     // over valid cells
  FieldStats delta_peb_stats;  // over valid cells
  int n_valid = 0;

  const SweepCell& at(int ix, int iy) const {
    return cells[static_cast<std::size_t>(iy) * x_axis.n + ix];
  }
};

// Sweeps one reflector over the grid. `base` must be a direct-path-only
// scenario; each cell evaluates base plus one incidence point at the cell
// coordinate. Per-cell phases derive from (options.seed, cell index), so a
// sweep is reproducible cell by cell.
SweepResult sweep_incidence_grid(const Scenario& base,
                                 const SignalConfig& config,
                                 const PipelineOptions& options,
                                 const GridAxis& x_axis,
                                 const GridAxis& y_axis);

// cell_x,cell_y,lambda_xy,lambda_alpha,delta_peb_pct,valid rows.
// Deterministic formatting: identical inputs give identical bytes.
void write_sweep_csv(const SweepResult& result, const std::string& path);

// Self-contained two-panel heatmap (log10 translation gain, PEB improvement
// in percent).
void write_sweep_svg(const SweepResult& result, const std::string& path);

// Max / min / argmax summary of the swept fields.
std::string sweep_summary_json(const SweepResult& result);

}  // namespace locfim
