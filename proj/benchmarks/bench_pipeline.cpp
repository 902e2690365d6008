// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the locfim authors
//
// Throughput of the expensive pipeline stages: the exact channel information
// matrix, the closed-form decomposition, and whole per-cell evaluations as a
// sweep performs them.
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

#include <benchmark/benchmark.h>

#include "locfim/bounds.hpp"
#include "locfim/channel_fim.hpp"
#include "locfim/decomposition.hpp"
#include "locfim/geometry.hpp"
#include "locfim/signal.hpp"

namespace {

locfim::SignalConfig reference_config() {
  locfim::SignalConfig config;
  config.carrier_hz = 38e9;
  config.bandwidth_hz = 125e6;
  config.n_symbols = 16;
  config.symbol_energy_j = 1e-3 / config.bandwidth_hz;  // 0 dBm average power
  config.noise_psd_w_hz = 1e-20;
  config.n_beams = 50;
  return config;
}

locfim::Scenario reference_scenario(int n_reflectors) {
  const double wavelength = locfim::kSpeedOfLight / 38e9;
  locfim::Scenario scenario;
  scenario.anchor.position = {0.0, 0.0};
  scenario.anchor.orientation = 0.0;
  scenario.anchor.element_offsets = locfim::half_wavelength_ula(25, wavelength);
  scenario.mobile.position = {5.0, 5.0};
  scenario.mobile.orientation = 1.5707963267948966;
  scenario.mobile.element_offsets = locfim::half_wavelength_ula(25, wavelength);
  const Eigen::Vector2d candidates[3] = {{8.0, 1.0}, {3.0, 4.0}, {6.0, 8.0}};
  for (int i = 0; i < n_reflectors; ++i) {
    scenario.incidence_points.push_back(candidates[i % 3]);
  }
  return scenario;
}

void BM_FimChannelExact(benchmark::State& state) {
  const locfim::SignalConfig config = reference_config();
  const locfim::Scenario scenario = reference_scenario(3);
  const double wavelength = locfim::kSpeedOfLight / config.carrier_hz;
  const locfim::Beamformer beams = locfim::dft_beamformer(
      scenario.anchor.element_offsets, config.n_beams, wavelength);
  std::vector<locfim::PathParams> params =
      locfim::all_channel_params(scenario);
  for (std::size_t i = 0; i < params.size(); ++i) {
    params[i].gain = locfim::path_gain(scenario, static_cast<int>(i),
                                       wavelength, 0.7, 0.3 * i);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        locfim::fim_channel_exact(scenario, config, beams, params));
  }
}
BENCHMARK(BM_FimChannelExact);

void BM_DecomposeClosedForm(benchmark::State& state) {
  const locfim::Scenario scenario = reference_scenario(3);
  locfim::PipelineOptions options;
  options.fast = true;
  const locfim::ScenarioEvaluation eval = locfim::evaluate_scenario_full(
      scenario, reference_config(), options);
  for (auto _ : state) {
    benchmark::DoNotOptimize(locfim::decompose(scenario, eval.infos));
  }
}
BENCHMARK(BM_DecomposeClosedForm);

void evaluate_cell(benchmark::State& state, bool fast) {
  const locfim::SignalConfig config = reference_config();
  const locfim::Scenario scenario = reference_scenario(1);
  locfim::PipelineOptions options;
  options.fast = fast;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        locfim::evaluate_scenario(scenario, config, options));
  }
}

void BM_SweepCellFast(benchmark::State& state) { evaluate_cell(state, true); }
BENCHMARK(BM_SweepCellFast);

void BM_SweepCellFull(benchmark::State& state) { evaluate_cell(state, false); }
BENCHMARK(BM_SweepCellFull);

}  // namespace

BENCHMARK_MAIN();
