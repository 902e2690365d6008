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

#include "locfim/geometry.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace locfim {

namespace {

constexpr double kPi = std::numbers::pi;

void check_centroid(const std::vector<Eigen::Vector2d>& offsets,
                    const char* which) {
  if (offsets.empty()) return;
  Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
  for (const auto& o : offsets) centroid += o;
  centroid /= static_cast<double>(offsets.size());
  double scale = 0.0;
  for (const auto& o : offsets) scale = std::max(scale, o.norm());
  if (centroid.norm() > 1e-9 * std::max(scale, 1.0)) {
    throw GeometryError(std::string(which) +
                        " element offsets must have a zero centroid");
  }
}

}  // namespace

double wrap_angle(double x) {
  double w = std::atan2(std::sin(x), std::cos(x));
  if (w <= -kPi) w = kPi;  // fold the branch point so the range is (-pi, pi]
  return w;
}

void validate_scenario(const Scenario& scenario) {
  if (scenario.n_paths() == 0) {
    throw GeometryError("scenario has no propagation paths (no direct path "
                        "and no incidence points)");
  }
  const Eigen::Vector2d& p = scenario.mobile.position;
  const Eigen::Vector2d& q = scenario.anchor.position;
  if (scenario.has_los && (p - q).norm() < kGeometryEps) {
    throw GeometryError("mobile and anchor positions coincide");
  }
  for (std::size_t i = 0; i < scenario.incidence_points.size(); ++i) {
    const Eigen::Vector2d& s = scenario.incidence_points[i];
    const std::string node = "incidence_points[" + std::to_string(i) + "]";
    if ((s - p).norm() < kGeometryEps) {
      throw GeometryError(node + " coincides with the mobile position");
    }
    if ((s - q).norm() < kGeometryEps) {
      throw GeometryError(node + " coincides with the anchor position");
    }
  }
  check_centroid(scenario.anchor.element_offsets, "anchor");
  check_centroid(scenario.mobile.element_offsets, "mobile");
}

std::vector<int> present_path_indices(const Scenario& scenario) {
  std::vector<int> indices;
  indices.reserve(scenario.n_paths());
  if (scenario.has_los) indices.push_back(0);
  for (int k = 1; k <= scenario.n_reflected(); ++k) indices.push_back(k);
  return indices;
}

PathGeometry path_geometry(const Scenario& scenario, int path_index) {
  const Eigen::Vector2d& p = scenario.mobile.position;
  const Eigen::Vector2d& q = scenario.anchor.position;
  PathGeometry g;
  if (path_index == 0) {
    if (!scenario.has_los) {
      throw GeometryError("path 0 requested but the scenario has no direct "
                          "path");
    }
    const Eigen::Vector2d d = p - q;
    if (d.norm() < kGeometryEps) {
      throw GeometryError("mobile and anchor positions coincide");
    }
    g.bearing_tx = std::atan2(d.y(), d.x());
    g.bearing_rx = std::atan2(-d.y(), -d.x());
    g.dist_tx = d.norm();
    g.dist_rx = d.norm();
    return g;
  }
  if (path_index < 0 || path_index > scenario.n_reflected()) {
    throw GeometryError("path index " + std::to_string(path_index) +
                        " out of range");
  }
  const Eigen::Vector2d& s = scenario.incidence_points[path_index - 1];
  const Eigen::Vector2d dq = s - q;
  const Eigen::Vector2d dp = s - p;
  if (dq.norm() < kGeometryEps) {
    throw GeometryError("incidence_points[" + std::to_string(path_index - 1) +
                        "] coincides with the anchor position");
  }
  if (dp.norm() < kGeometryEps) {
    throw GeometryError("incidence_points[" + std::to_string(path_index - 1) +
                        "] coincides with the mobile position");
  }
  g.bearing_tx = std::atan2(dq.y(), dq.x());
  g.bearing_rx = std::atan2(dp.y(), dp.x());
  g.dist_tx = dq.norm();
  g.dist_rx = dp.norm();
  return g;
}

PathParams channel_params_from_geometry(const Scenario& scenario,
                                        int path_index, double c) {
  const PathGeometry g = path_geometry(scenario, path_index);
  PathParams params;
  params.tau = (path_index == 0) ? g.dist_tx / c
                                 : (g.dist_tx + g.dist_rx) / c;
  params.theta_tx = wrap_angle(g.bearing_tx - scenario.anchor.orientation);
  params.theta_rx = wrap_angle(g.bearing_rx - scenario.mobile.orientation);
  return params;
}

std::vector<PathParams> all_channel_params(const Scenario& scenario,
                                           double c) {
  std::vector<PathParams> params;
  params.reserve(scenario.n_paths());
  for (int k : present_path_indices(scenario)) {
    params.push_back(channel_params_from_geometry(scenario, k, c));
  }
  return params;
}

TransformMatrix transformation_matrix(const Scenario& scenario, double c,
                                      double norm_length, double norm_angle) {
  validate_scenario(scenario);
  TransformMatrix t;
  t.has_los = scenario.has_los;

  if (scenario.has_los) {
    const PathGeometry g = path_geometry(scenario, 0);
    const double cs = std::cos(g.bearing_tx);
    const double sn = std::sin(g.bearing_tx);
    const double d = g.dist_tx;
    Eigen::Matrix3d a;
    // Columns: tau, theta_tx, theta_rx. Moving the mobile along the ray
    // stretches the delay; moving it across the ray swings both angles at
    // rate 1/d; heading enters only the arrival angle.
    a.col(0) << cs / c * norm_length, sn / c * norm_length, 0.0;
    a.col(1) << -sn / d * norm_length, cs / d * norm_length, 0.0;
    a.col(2) << -sn / d * norm_length, cs / d * norm_length, -norm_angle;
    t.los_pose_block = a;
  }

  t.nlos_pose_blocks.reserve(scenario.incidence_points.size());
  t.incidence_blocks.reserve(scenario.incidence_points.size());
  for (int k = 1; k <= scenario.n_reflected(); ++k) {
    const PathGeometry g = path_geometry(scenario, k);
    const double ct = std::cos(g.bearing_tx), st = std::sin(g.bearing_tx);
    const double cr = std::cos(g.bearing_rx), sr = std::sin(g.bearing_rx);
    const double rq = g.dist_tx;
    const double rp = g.dist_rx;

    Eigen::Matrix3d b;
    // The mobile only sees its own leg: moving toward the incidence point
    // shortens the delay, the anchor-side departure angle is untouched.
    b.col(0) << -cr / c * norm_length, -sr / c * norm_length, 0.0;
    b.col(1) << 0.0, 0.0, 0.0;
    b.col(2) << sr / rp * norm_length, -cr / rp * norm_length, -norm_angle;
    t.nlos_pose_blocks.push_back(b);

    Eigen::Matrix<double, 2, 3> d;
    d.col(0) << (ct + cr) / c * norm_length, (st + sr) / c * norm_length;
    d.col(1) << -st / rq * norm_length, ct / rq * norm_length;
    d.col(2) << -sr / rp * norm_length, cr / rp * norm_length;
    t.incidence_blocks.push_back(d);
  }
  return t;
}

Eigen::MatrixXd assemble_transform(const TransformMatrix& transform) {
  const int n_reflected = static_cast<int>(transform.nlos_pose_blocks.size());
  const int n_paths = transform.n_paths();
  const int rows = 3 + 2 * n_reflected;
  const int cols = 3 * n_paths;
  Eigen::MatrixXd full = Eigen::MatrixXd::Zero(rows, cols);

  int col_block = 0;
  if (transform.has_los) {
    full.block<3, 3>(0, 0) = transform.los_pose_block;
    col_block = 1;
  }
  for (int i = 0; i < n_reflected; ++i) {
    full.block<3, 3>(0, 3 * (col_block + i)) = transform.nlos_pose_blocks[i];
    full.block<2, 3>(3 + 2 * i, 3 * (col_block + i)) =
        transform.incidence_blocks[i];
  }
  return full;
}

}  // namespace locfim
