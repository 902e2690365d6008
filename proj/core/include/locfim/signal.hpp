// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the locfim authors
//
// Transmit signal model: narrowband uniform arrays, DFT beam codebooks,
// unit-energy sinc pilot pulses and their correlation moments, free-space
// path gains. Everything here is deterministic given its inputs; random
// phases are drawn by callers and passed in.
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
#include <vector>

#include <Eigen/Dense>

#include "locfim/geometry.hpp"

namespace locfim {

// Waveform and beam-sweep configuration. All values SI; symbol_time_s == 0
// selects the natural 1/bandwidth_hz.
struct SignalConfig {
  double carrier_hz = 38e9;
  double bandwidth_hz = 125e6;
  int n_symbols = 16;           // pilot symbols per beam
  double symbol_time_s = 0.0;   // 0 -> 1/bandwidth_hz
  double symbol_energy_j = 0.0; // energy per pilot symbol
  double noise_psd_w_hz = 0.0;  // one-sided noise power spectral density
  int n_beams = 50;

  double symbol_time() const {
    return symbol_time_s > 0.0 ? symbol_time_s : 1.0 / bandwidth_hz;
  }
};

// Beam codebook: column l of `weights` is the precoder steered at
// beam_angles[l] (anchor-array frame). trace(weights^H weights) == 1 so the
// sweep spends unit power overall.
struct Beamformer {
  std::vector<double> beam_angles;  // [rad]
  Eigen::MatrixXcd weights;         // n_tx x n_beams
};

// Energy and derivative moments of the pilot pulse:
//   energy = int |p|^2 dt, mean_square_bw = int |p'|^2 dt, cross = int p' p dt.
struct PulseMoments {
  double energy = 0.0;          // dimensionless (unit-energy pulse)
  double mean_square_bw = 0.0;  // [rad^2/s^2]
  double cross = 0.0;           // [1/s]
};

// Unit-norm narrowband steering vector of an array with the given
// array-local element offsets, evaluated at array-relative angle theta.
Eigen::VectorXcd array_response(const std::vector<Eigen::Vector2d>& offsets,
                                double theta, double wavelength);

// d array_response / d theta.
Eigen::VectorXcd array_response_derivative(
    const std::vector<Eigen::Vector2d>& offsets, double theta,
    double wavelength);

// DFT codebook with n_beams beams at angles l * pi / n_beams,
// l = 0 .. n_beams - 1.
Beamformer dft_beamformer(const std::vector<Eigen::Vector2d>& tx_offsets,
                          int n_beams, double wavelength);

// Moments of the unit-energy sinc pulse of bandwidth B:
// energy 1, mean_square_bw pi^2 B^2 / 3, cross 0.
PulseMoments sinc_pulse_moments(double bandwidth_hz);

// Autocorrelation r(dt) of the unit-energy sinc pulse and its first two
// derivatives with respect to the lag dt [s].
double sinc_autocorr(double dt, double bandwidth_hz);
double sinc_autocorr_d1(double dt, double bandwidth_hz);
double sinc_autocorr_d2(double dt, double bandwidth_hz);

// Centroid-zero uniform linear array along the local x axis with
// half-wavelength spacing.
std::vector<Eigen::Vector2d> half_wavelength_ula(int n_elements,
                                                 double wavelength);

// Free-space complex gain of path `path_index`: magnitude
// (wavelength / 4 pi) / range for the direct path and
// (wavelength / 4 pi) sqrt(reflection_power) / (leg1 + leg2) for reflected
// paths, at the caller-chosen phase [rad].
std::complex<double> path_gain(const Scenario& scenario, int path_index,
                               double wavelength, double reflection_power,
                               double phase);

// Largest pairwise element separation [m].
double array_aperture(const std::vector<Eigen::Vector2d>& offsets);

// True while the narrowband array assumption holds: propagation across the
// aperture stays well inside one symbol, aperture < c / bandwidth.
bool narrowband_ok(const std::vector<Eigen::Vector2d>& offsets,
                   double bandwidth_hz, double c = kSpeedOfLight);

}  // namespace locfim
