// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the locfim authors
//
// Position and orientation error bounds from the 3 x 3 equivalent Fisher
// information, and the end-to-end pipeline from a scenario to its bounds.
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
#include <vector>

#include <Eigen/Dense>

#include "locfim/channel_fim.hpp"
#include "locfim/decomposition.hpp"
#include "locfim/geometry.hpp"
#include "locfim/signal.hpp"

namespace locfim {

// Bounds and conditioning of one equivalent FIM. A rank-deficient matrix
// reports infinite bounds rather than failing.
struct BoundReport {
  double peb = 0.0;  // [m]
  double oeb = 0.0;  // [rad]
  int efim_rank = 0;
  double condition_number = 0.0;
  std::vector<RankOneTerm> terms;  // contributing terms when known
};

BoundReport bounds_from_efim(const Eigen::Matrix3d& efim);
BoundReport bounds_from_decomposition(const EfimDecomposition& decomposition);

// Pipeline switches shared by the evaluators and sweeps.
struct PipelineOptions {
  std::uint64_t seed = 1;         // drives per-path gain phases
  bool fast = false;              // closed-form per-path accuracies instead
                                  // of the full channel-FIM route
  double reflection_power = 0.7;  // power reflection coefficient of bounces
  double c = kSpeedOfLight;       // [m/s]
};

// Everything the pipeline produced for one scenario.
struct ScenarioEvaluation {
  std::vector<PathParams> params;       // with gains assigned
  std::vector<double> phases;           // seeded gain phases [rad], path order
  std::vector<PathInfo> infos;
  EfimDecomposition decomposition;
  BoundReport report;
  bool narrowband_warning = false;
};

// Scenario -> channel parameters -> per-path accuracies -> decomposition ->
// bounds. Phases are drawn per (seed, path index) so augmenting a scenario
// with further paths leaves existing phases unchanged.
ScenarioEvaluation evaluate_scenario_full(const Scenario& scenario,
                                          const SignalConfig& config,
                                          const PipelineOptions& options);

BoundReport evaluate_scenario(const Scenario& scenario,
                              const SignalConfig& config,
                              const PipelineOptions& options);

// Relative improvement (peb_base - peb_augmented) / peb_base.
double delta_peb(const Scenario& base, const Scenario& augmented,
                 const SignalConfig& config, const PipelineOptions& options);

}  // namespace locfim
