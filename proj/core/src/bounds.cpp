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

#include "locfim/bounds.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace locfim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Stream-splitting constant (golden-ratio increment) so each path index gets
// an independent phase stream off the same user seed.
constexpr std::uint64_t kPathStreamSalt = 0x9E3779B97F4A7C15ull;

double seeded_phase(std::uint64_t seed, int path_index) {
  std::mt19937_64 rng(seed ^ (kPathStreamSalt *
                              static_cast<std::uint64_t>(path_index + 1)));
  std::uniform_real_distribution<double> uniform(0.0, 2.0 * std::numbers::pi);
  return uniform(rng);
}

}  // namespace

BoundReport bounds_from_efim(const Eigen::Matrix3d& efim) {
  BoundReport report;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(efim);
  const Eigen::Vector3d evals = solver.eigenvalues();
  const double max_abs = evals.cwiseAbs().maxCoeff();
  const double threshold = 1e-12 * max_abs;

  int rank = 0;
  for (int i = 0; i < 3; ++i) {
    if (evals(i) > threshold && evals(i) > 0.0) ++rank;
  }
  report.efim_rank = rank;
  report.condition_number =
      rank == 3 ? evals.maxCoeff() / evals.minCoeff() : kInf;

  if (rank < 3) {
    report.peb = kInf;
    report.oeb = kInf;
    return report;
  }
  const Eigen::Matrix3d inverse =
      solver.eigenvectors() *
      evals.cwiseInverse().asDiagonal() *
      solver.eigenvectors().transpose();
  report.peb = std::sqrt(inverse(0, 0) + inverse(1, 1));
  report.oeb = std::sqrt(inverse(2, 2));
  return report;
}

BoundReport bounds_from_decomposition(const EfimDecomposition& decomposition) {
  BoundReport report = bounds_from_efim(decomposition.efim);
  report.terms.reserve(decomposition.direct_terms.size() +
                       decomposition.reflected_terms.size());
  report.terms.insert(report.terms.end(), decomposition.direct_terms.begin(),
                      decomposition.direct_terms.end());
  report.terms.insert(report.terms.end(),
                      decomposition.reflected_terms.begin(),
                      decomposition.reflected_terms.end());
  return report;
}

ScenarioEvaluation evaluate_scenario_full(const Scenario& scenario,
                                          const SignalConfig& config,
                                          const PipelineOptions& options) {
  validate_scenario(scenario);
  ScenarioEvaluation out;
  out.params = all_channel_params(scenario, options.c);

  const double wavelength = options.c / config.carrier_hz;
  const std::vector<int> path_indices = present_path_indices(scenario);
  out.phases.reserve(path_indices.size());
  for (std::size_t i = 0; i < path_indices.size(); ++i) {
    const double phase = seeded_phase(options.seed, path_indices[i]);
    out.phases.push_back(phase);
    out.params[i].gain = path_gain(scenario, path_indices[i], wavelength,
                                   options.reflection_power, phase);
  }

  out.narrowband_warning =
      !narrowband_ok(scenario.anchor.element_offsets, config.bandwidth_hz,
                     options.c) ||
      !narrowband_ok(scenario.mobile.element_offsets, config.bandwidth_hz,
                     options.c);

  const Beamformer beamformer = dft_beamformer(
      scenario.anchor.element_offsets, config.n_beams, wavelength);

  out.infos.reserve(out.params.size());
  if (options.fast) {
    for (const PathParams& p : out.params) {
      out.infos.push_back(path_info_closed_form(
          config, beamformer, scenario.mobile.element_offsets,
          scenario.anchor.element_offsets, p));
    }
  } else {
    const ChannelFim exact =
        fim_channel_exact(scenario, config, beamformer, out.params);
    const ChannelFim by_path = reorder_by_path(simplify_fim(exact));
    for (int i = 0; i < by_path.n_paths; ++i) {
      out.infos.push_back(per_path_info(by_path, i));
    }
  }

  out.decomposition = decompose(scenario, out.infos, options.c);
  out.report = bounds_from_decomposition(out.decomposition);
  return out;
}

BoundReport evaluate_scenario(const Scenario& scenario,
                              const SignalConfig& config,
                              const PipelineOptions& options) {
  return evaluate_scenario_full(scenario, config, options).report;
}

double delta_peb(const Scenario& base, const Scenario& augmented,
                 const SignalConfig& config, const PipelineOptions& options) {
  const double peb_base = evaluate_scenario(base, config, options).peb;
  const double peb_aug = evaluate_scenario(augmented, config, options).peb;
  if (std::isinf(peb_base)) return std::isinf(peb_aug) ? 0.0 : 1.0;
  if (peb_base <= 0.0) return 0.0;
  return (peb_base - peb_aug) / peb_base;
}

}  // namespace locfim
