// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the locfim authors
//
// Scene geometry for single-anchor downlink localization in the plane: one
// transmitting anchor with a known pose, one mobile with unknown position and
// heading, and the incidence points of single-bounce reflected paths. This
// header also provides the Jacobian of the per-path channel parameters
// (delay, departure angle, arrival angle) with respect to the location
// parameters, which is what carries channel-domain information into the
// position domain.
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

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "locfim/errors.hpp"

namespace locfim {

inline constexpr double kSpeedOfLight = 299792458.0;  // [m/s]

// Distances below this leave path parameters undefined.
inline constexpr double kGeometryEps = 1e-6;  // [m]

// Transmitting anchor. Antenna element offsets are in the array-local frame,
// in meters, and must have a zero centroid; the array-local x axis points
// along world bearing `orientation`.
struct Anchor {
  Eigen::Vector2d position{0.0, 0.0};            // q [m]
  double orientation = 0.0;                      // phi [rad]
  std::vector<Eigen::Vector2d> element_offsets;  // [m], centroid zero
};

// Receiving mobile, same conventions as Anchor.
struct Mobile {
  Eigen::Vector2d position{0.0, 0.0};            // p [m]
  double orientation = 0.0;                      // alpha [rad]
  std::vector<Eigen::Vector2d> element_offsets;  // [m], centroid zero
};

// One propagation scene. Path indexing is stable: index 0 is the direct
// path (only meaningful when has_los), index k >= 1 is the reflected path
// through incidence_points[k - 1].
struct Scenario {
  Anchor anchor;
  Mobile mobile;
  std::vector<Eigen::Vector2d> incidence_points;  // s_k [m]
  bool has_los = true;

  // Number of propagation paths actually present.
  int n_paths() const {
    return (has_los ? 1 : 0) + static_cast<int>(incidence_points.size());
  }
  int n_reflected() const { return static_cast<int>(incidence_points.size()); }
};

// Channel parameters of one path. Angles are relative to the respective
// array orientation and wrapped to (-pi, pi]. The complex gain stays unset
// until a propagation model assigns it.
struct PathParams {
  double tau = 0.0;       // delay [s], > 0
  double theta_tx = 0.0;  // departure angle, anchor-array frame [rad]
  double theta_rx = 0.0;  // arrival angle, mobile-array frame [rad]
  std::optional<std::complex<double>> gain;
};

// World-frame ray bearings and distances of one path. These are the
// trigonometric arguments of every closed form in this library: for the
// direct path the anchor-side ray points at the mobile and the mobile-side
// ray points back at the anchor; for a reflected path both rays point at the
// incidence point.
struct PathGeometry {
  double bearing_tx = 0.0;  // anchor-side ray bearing [rad]
  double bearing_rx = 0.0;  // mobile-side ray bearing [rad]
  double dist_tx = 0.0;     // anchor to ray endpoint [m]
  double dist_rx = 0.0;     // mobile to ray endpoint [m]
};

// Jacobian of the stacked channel parameters with respect to the location
// parameters, stored blockwise. Rows of the pose blocks are
// (p_x * norm_length, p_y * norm_length, alpha * norm_angle); columns are
// (tau, theta_tx, theta_rx) of one path. Rows of an incidence block are the
// (s_x, s_y) coordinates of that path's incidence point.
struct TransformMatrix {
  bool has_los = true;
  Eigen::Matrix3d los_pose_block = Eigen::Matrix3d::Zero();
  std::vector<Eigen::Matrix3d> nlos_pose_blocks;
  std::vector<Eigen::Matrix<double, 2, 3>> incidence_blocks;

  int n_paths() const {
    return (has_los ? 1 : 0) + static_cast<int>(nlos_pose_blocks.size());
  }
};

// Wraps an angle to (-pi, pi].
double wrap_angle(double x);

// Throws GeometryError if any pair of path-defining points (anchor, mobile,
// incidence points) coincides within kGeometryEps, if a scenario has no
// paths at all, or if a non-empty antenna array has a non-zero centroid.
void validate_scenario(const Scenario& scenario);

// Scenario path indices present, direct path first (see Scenario).
std::vector<int> present_path_indices(const Scenario& scenario);

// World-frame bearings and distances of path `path_index`.
PathGeometry path_geometry(const Scenario& scenario, int path_index);

// Delay and array-relative angles of path `path_index`; the gain is left
// unset. Throws GeometryError on degenerate geometry.
PathParams channel_params_from_geometry(const Scenario& scenario,
                                        int path_index,
                                        double c = kSpeedOfLight);

// channel_params_from_geometry for every present path, direct path first.
std::vector<PathParams> all_channel_params(const Scenario& scenario,
                                           double c = kSpeedOfLight);

// Closed-form Jacobian blocks for all present paths. norm_length [m] and
// norm_angle [rad] scale the position-like and angle-like rows so the mixed
// units can be balanced; the defaults keep plain SI.
TransformMatrix transformation_matrix(const Scenario& scenario,
                                      double c = kSpeedOfLight,
                                      double norm_length = 1.0,
                                      double norm_angle = 1.0);

// Dense assembly of the blocks: rows are (p_x, p_y, alpha, s_1x, s_1y, ...),
// columns are (tau, theta_tx, theta_rx) per present path in path order.
// Size (3 + 2 M) x 3 P for M reflected paths out of P present paths.
Eigen::MatrixXd assemble_transform(const TransformMatrix& transform);

}  // namespace locfim
