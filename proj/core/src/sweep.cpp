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

#include "locfim/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace locfim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

void validate_axis(const GridAxis& axis, const char* name) {
  if (axis.n < 1 || !(axis.min < axis.max)) {
    throw std::invalid_argument(std::string(name) +
                                " axis needs n >= 1 and min < max");
  }
}

void track(FieldStats* stats, bool* any, double value, double x, double y) {
  if (!*any) {
    stats->max = value;
    stats->min = value;
    stats->argmax_x = x;
    stats->argmax_y = y;
    *any = true;
    return;
  }
  stats->min = std::min(stats->min, value);
  if (value > stats->max) {
    stats->max = value;
    stats->argmax_x = x;
    stats->argmax_y = y;
  }
}

struct Rgb {
  double r, g, b;
};

// Nine-anchor approximation of a perceptually uniform dark-to-bright map.
Rgb colormap(double t) {
  static constexpr double kTable[9][3] = {
      {68, 1, 84},    {72, 40, 120},  {62, 74, 137},
      {49, 104, 142}, {38, 130, 142}, {31, 158, 137},
      {53, 183, 121}, {109, 205, 89}, {253, 231, 37}};
  t = std::clamp(t, 0.0, 1.0);
  const double pos = t * 8.0;
  const int i = std::min(static_cast<int>(pos), 7);
  const double f = pos - i;
  return {kTable[i][0] + f * (kTable[i + 1][0] - kTable[i][0]),
          kTable[i][1] + f * (kTable[i + 1][1] - kTable[i][1]),
          kTable[i][2] + f * (kTable[i + 1][2] - kTable[i][2])};
}

std::string hex_color(const Rgb& c) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x",
                static_cast<int>(std::lround(c.r)),
                static_cast<int>(std::lround(c.g)),
                static_cast<int>(std::lround(c.b)));
  return buf;
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string num3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// One heatmap panel with its own color scale and colorbar.
void render_panel(std::ostringstream& svg, const SweepResult& result,
                  int panel, double origin_x, double origin_y, double side,
                  const std::string& title, bool log_scale) {
  const int nx = result.x_axis.n;
  const int ny = result.y_axis.n;
  const double cell_w = side / nx;
  const double cell_h = side / ny;

  // Field range over valid cells.
  double lo = kInf, hi = -kInf;
  for (const SweepCell& cell : result.cells) {
    if (!cell.valid) continue;
    double v = panel == 0 ? cell.lam_xy : 100.0 * cell.delta_peb;
    if (log_scale) {
      if (v <= 0.0) continue;
      v = std::log10(v);
    }
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!(lo < hi)) {
    lo = 0.0;
    hi = 1.0;
  }

  svg << "<text x=\"" << num(origin_x + side / 2) << "\" y=\""
      << num(origin_y - 16) << "\" text-anchor=\"middle\" class=\"title\">"
      << title << "</text>\n";

  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      const SweepCell& cell = result.at(ix, iy);
      std::string fill = "#9a9a9a";
      if (cell.valid) {
        double v = panel == 0 ? cell.lam_xy : 100.0 * cell.delta_peb;
        if (log_scale) v = v > 0.0 ? std::log10(v) : lo;
        fill = hex_color(colormap((v - lo) / (hi - lo)));
      }
      const double px = origin_x + ix * cell_w;
      const double py = origin_y + (ny - 1 - iy) * cell_h;
      svg << "<rect x=\"" << num(px) << "\" y=\"" << num(py) << "\" width=\""
          << num(cell_w + 0.5) << "\" height=\"" << num(cell_h + 0.5)
          << "\" fill=\"" << fill << "\"/>\n";
    }
  }

  // Frame and axis ticks (ends only, world coordinates).
  svg << "<rect x=\"" << num(origin_x) << "\" y=\"" << num(origin_y)
      << "\" width=\"" << num(side) << "\" height=\"" << num(side)
      << "\" fill=\"none\" stroke=\"#333\"/>\n";
  svg << "<text x=\"" << num(origin_x) << "\" y=\"" << num(origin_y + side + 16)
      << "\" class=\"tick\">" << num3(result.x_axis.min) << "</text>\n";
  svg << "<text x=\"" << num(origin_x + side) << "\" y=\""
      << num(origin_y + side + 16) << "\" text-anchor=\"end\" class=\"tick\">"
      << num3(result.x_axis.max) << "</text>\n";
  svg << "<text x=\"" << num(origin_x + side / 2) << "\" y=\""
      << num(origin_y + side + 30)
      << "\" text-anchor=\"middle\" class=\"tick\">x [m]</text>\n";
  svg << "<text x=\"" << num(origin_x - 6) << "\" y=\""
      << num(origin_y + side) << "\" text-anchor=\"end\" class=\"tick\">"
      << num3(result.y_axis.min) << "</text>\n";
  svg << "<text x=\"" << num(origin_x - 6) << "\" y=\"" << num(origin_y + 10)
      << "\" text-anchor=\"end\" class=\"tick\">" << num3(result.y_axis.max)
      << "</text>\n";

  // Colorbar.
  const double bar_x = origin_x + side + 14;
  svg << "<defs><linearGradient id=\"cb" << panel
      << "\" x1=\"0\" y1=\"1\" x2=\"0\" y2=\"0\">\n";
  for (int i = 0; i <= 8; ++i) {
    svg << "<stop offset=\"" << num(i / 8.0 * 100.0) << "%\" stop-color=\""
        << hex_color(colormap(i / 8.0)) << "\"/>\n";
  }
  svg << "</linearGradient></defs>\n";
  svg << "<rect x=\"" << num(bar_x) << "\" y=\"" << num(origin_y)
      << "\" width=\"14\" height=\"" << num(side) << "\" fill=\"url(#cb"
      << panel << ")\" stroke=\"#333\"/>\n";
  svg << "<text x=\"" << num(bar_x + 18) << "\" y=\"" << num(origin_y + 10)
      << "\" class=\"tick\">" << num3(hi) << "</text>\n";
  svg << "<text x=\"" << num(bar_x + 18) << "\" y=\""
      << num(origin_y + side / 2 + 4) << "\" class=\"tick\">"
      << num3((lo + hi) / 2) << "</text>\n";
  svg << "<text x=\"" << num(bar_x + 18) << "\" y=\"" << num(origin_y + side)
      << "\" class=\"tick\">" << num3(lo) << "</text>\n";
}

void render_marker(std::ostringstream& svg, const SweepResult& result,
                   double origin_x, double origin_y, double side,
                   const Eigen::Vector2d& point, bool circle,
                   const std::string& label) {
  const GridAxis& xa = result.x_axis;
  const GridAxis& ya = result.y_axis;
  if (point.x() < xa.min || point.x() > xa.max || point.y() < ya.min ||
      point.y() > ya.max) {
    return;
  }
  const double px =
      origin_x + (point.x() - xa.min) / (xa.max - xa.min) * side;
  const double py =
      origin_y + side - (point.y() - ya.min) / (ya.max - ya.min) * side;
  if (circle) {
    svg << "<circle cx=\"" << num(px) << "\" cy=\"" << num(py)
        << "\" r=\"5\" fill=\"#fff\" stroke=\"#000\"/>\n";
  } else {
    svg << "<rect x=\"" << num(px - 5) << "\" y=\"" << num(py - 5)
        << "\" width=\"10\" height=\"10\" fill=\"#fff\" stroke=\"#000\"/>\n";
  }
  svg << "<text x=\"" << num(px + 8) << "\" y=\"" << num(py - 6)
      << "\" class=\"marker\">" << label << "</text>\n";
}

}  // namespace

SweepResult sweep_incidence_grid(const Scenario& base,
                                 const SignalConfig& config,
                                 const PipelineOptions& options,
                                 const GridAxis& x_axis,
                                 const GridAxis& y_axis) {
  if (!base.has_los || base.n_reflected() != 0) {
    throw std::invalid_argument(
        "sweep baseline must be a direct-path-only scenario");
  }
  validate_axis(x_axis, "x");
  validate_axis(y_axis, "y");

  SweepResult result;
  result.x_axis = x_axis;
  result.y_axis = y_axis;
  result.anchor_position = base.anchor.position;
  result.mobile_position = base.mobile.position;
  result.cells.resize(static_cast<std::size_t>(x_axis.n) * y_axis.n);

  const BoundReport base_report = evaluate_scenario(base, config, options);
  result.base_peb = base_report.peb;
  result.base_oeb = base_report.oeb;

  bool any_lam = false, any_dp = false;
  for (int iy = 0; iy < y_axis.n; ++iy) {
    for (int ix = 0; ix < x_axis.n; ++ix) {
      const std::size_t index = static_cast<std::size_t>(iy) * x_axis.n + ix;
      SweepCell& cell = result.cells[index];
      cell.x = x_axis.coordinate(ix);
      cell.y = y_axis.coordinate(iy);

      const Eigen::Vector2d s(cell.x, cell.y);
      if ((s - base.mobile.position).norm() < kGeometryEps ||
          (s - base.anchor.position).norm() < kGeometryEps) {
        cell.valid = false;
        continue;
      }

      Scenario augmented = base;
      augmented.incidence_points.push_back(s);
      PipelineOptions cell_options = options;
      cell_options.seed = splitmix64(options.seed + index);

      const ScenarioEvaluation eval =
          evaluate_scenario_full(augmented, config, cell_options);
      const ProjectedGains gains =
          projected_gains(eval.decomposition.reflected_terms.front());
      cell.lam_xy = gains.lam_xy;
      cell.lam_alpha = gains.lam_alpha;
      const double peb = eval.report.peb;
      if (std::isinf(result.base_peb)) {
        cell.delta_peb = std::isinf(peb) ? 0.0 : 1.0;
      } else {
        cell.delta_peb = (result.base_peb - peb) / result.base_peb;
      }
      cell.valid = true;
      ++result.n_valid;

      track(&result.lam_xy_stats, &any_lam, cell.lam_xy, cell.x, cell.y);
      track(&result.delta_peb_stats, &any_dp, cell.delta_peb, cell.x, cell.y);
    }
  }
  return result;
}

void write_sweep_csv(const SweepResult& result, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "cell_x,cell_y,lambda_xy,lambda_alpha,delta_peb_pct,valid\n";
  char line[256];
  for (const SweepCell& cell : result.cells) {
    std::snprintf(line, sizeof line, "%.10g,%.10g,%.10g,%.10g,%.10g,%d\n",
                  cell.x, cell.y, cell.valid ? cell.lam_xy : 0.0,
                  cell.valid ? cell.lam_alpha : 0.0,
                  cell.valid ? 100.0 * cell.delta_peb : 0.0,
                  cell.valid ? 1 : 0);
    out << line;
  }
  if (!out.good()) throw std::runtime_error("short write to " + path);
}

void write_sweep_svg(const SweepResult& result, const std::string& path) {
  const double side = 360.0;
  const double top = 50.0;
  const double panel_w = 70.0 + side + 90.0;
  const double width = 2 * panel_w;
  const double height = top + side + 50.0;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width)
      << "\" height=\"" << num(height) << "\" viewBox=\"0 0 " << num(width)
      << " " << num(height) << "\">\n";
  svg << "<style>text{font-family:sans-serif}.title{font-size:14px}"
         ".tick{font-size:11px;fill:#333}.marker{font-size:11px;fill:#fff;"
         "paint-order:stroke;stroke:#000;stroke-width:2px}</style>\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n";

  const char* titles[2] = {"net translation gain (log10)",
                           "bound improvement [%]"};
  for (int panel = 0; panel < 2; ++panel) {
    const double origin_x = 70.0 + panel * panel_w;
    render_panel(svg, result, panel, origin_x, top, side, titles[panel],
                 panel == 0);
    render_marker(svg, result, origin_x, top, side, result.anchor_position,
                  false, "anchor");
    render_marker(svg, result, origin_x, top, side, result.mobile_position,
                  true, "mobile");
  }
  svg << "</svg>\n";

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << svg.str();
  if (!out.good()) throw std::runtime_error("short write to " + path);
}

std::string sweep_summary_json(const SweepResult& result) {
  nlohmann::json j;
  j["schema"] = "locfim-sweep-summary-v1";
  j["baseline"]["peb_m"] = result.base_peb;
  j["baseline"]["oeb_rad"] = result.base_oeb;
  j["grid"]["x"] = {{"min_m", result.x_axis.min},
                    {"max_m", result.x_axis.max},
                    {"n", result.x_axis.n}};
  j["grid"]["y"] = {{"min_m", result.y_axis.min},
                    {"max_m", result.y_axis.max},
                    {"n", result.y_axis.n}};
  j["n_valid"] = result.n_valid;
  j["translation_gain"] = {
      {"max", result.lam_xy_stats.max},
      {"min", result.lam_xy_stats.min},
      {"argmax_m", {result.lam_xy_stats.argmax_x, result.lam_xy_stats.argmax_y}}};
  j["delta_peb_pct"] = {
      {"max", 100.0 * result.delta_peb_stats.max},
      {"min", 100.0 * result.delta_peb_stats.min},
      {"argmax_m",
       {result.delta_peb_stats.argmax_x, result.delta_peb_stats.argmax_y}}};
  return j.dump(2) + "\n";
}

}  // namespace locfim
