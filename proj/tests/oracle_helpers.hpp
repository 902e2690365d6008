// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the locfim authors
//
// Independent reference implementations used only by tests: random scene
// generation, finite-difference Jacobians, dense linear-algebra references
// for the closed forms, and a time-domain Monte-Carlo estimate of the
// channel information matrix.
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
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "locfim/bounds.hpp"

namespace locfim::testing {

struct ScenarioDrawOptions {
  int min_reflectors = 0;
  int max_reflectors = 3;
  bool with_los = true;
  double min_separation = 0.5;  // [m] between any pair of scene points
  // Rejection thresholds keeping reflected rays away from exact forward or
  // backward alignment, where closed form and dense reference both lose
  // digits for different reasons.
  double min_sin = 0.05;       // lower bound on |sin(bearing mismatch)|
  double min_one_plus = 0.02;  // lower bound on 1 + cos(bearing mismatch)
};

// Random scene with pose angles free, ranges moderate, and the separation
// constraints above enforced by rejection.
Scenario random_scenario(std::mt19937_64& rng,
                         const ScenarioDrawOptions& options = {});

// Per-path accuracies drawn log-uniform over ranges typical of the
// reference waveform (delay variance in s^2, angle variances in rad^2).
PathInfo random_path_info(std::mt19937_64& rng);
std::vector<PathInfo> random_path_infos(std::mt19937_64& rng, int n);

// Central finite differences of the channel-parameter map, laid out like
// assemble_transform: rows (p_x, p_y, alpha, s_1x, s_1y, ...), columns
// (tau, theta_tx, theta_rx) per present path. Angle differences are wrapped.
Eigen::MatrixXd fd_geometry_jacobian(const Scenario& scenario,
                                     double c = kSpeedOfLight,
                                     double step = 1e-6);

// Dense reference for the decomposition: per-path diagonal channel
// information, pushed to the position domain with the full Jacobian, then
// Schur-complemented onto the pose block.
Eigen::Matrix3d dense_efim(const Scenario& scenario,
                           const std::vector<PathInfo>& infos,
                           double c = kSpeedOfLight,
                           bool* used_pseudo_inverse = nullptr);

// Dense gain/loss split of one reflected path (scenario path index k >= 1):
// gain = pose block of the position-domain information, loss = the Schur
// correction through the incidence block.
struct DensePathSplit {
  Eigen::Matrix3d gain = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d loss = Eigen::Matrix3d::Zero();
};
DensePathSplit dense_path_split(const Scenario& scenario, int path_index,
                                const PathInfo& info,
                                double c = kSpeedOfLight);

// Two overlapping paths, small arrays, few beams: the Monte-Carlo oracle's
// subject.
struct SmallInstance {
  Scenario scenario;
  SignalConfig config;
  Beamformer beamformer;
  std::vector<PathParams> params;
};
SmallInstance small_instance();

// Time-domain Monte-Carlo estimate of the channel information matrix in
// grouped-by-parameter layout, from `n_draws` random unit-modulus pilot
// sequences on an oversampled time grid.
Eigen::MatrixXd mc_fim_oracle(const SmallInstance& instance, int n_draws,
                              std::uint64_t seed);

}  // namespace locfim::testing
