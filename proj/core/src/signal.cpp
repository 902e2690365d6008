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

#include "locfim/signal.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace locfim {

namespace {

constexpr double kPi = std::numbers::pi;
using cd = std::complex<double>;

// sin(u)/u and its first two derivatives in u, series-guarded near zero.
double sinc_u(double u) {
  if (std::abs(u) < 1e-4) {
    const double u2 = u * u;
    return 1.0 - u2 / 6.0 + u2 * u2 / 120.0;
  }
  return std::sin(u) / u;
}

double sinc_u_d1(double u) {
  if (std::abs(u) < 1e-4) {
    const double u2 = u * u;
    return -u / 3.0 + u * u2 / 30.0;
  }
  return (u * std::cos(u) - std::sin(u)) / (u * u);
}

double sinc_u_d2(double u) {
  if (std::abs(u) < 1e-4) {
    const double u2 = u * u;
    return -1.0 / 3.0 + u2 / 10.0;
  }
  return (2.0 * std::sin(u) - 2.0 * u * std::cos(u) - u * u * std::sin(u)) /
         (u * u * u);
}

}  // namespace

Eigen::VectorXcd array_response(const std::vector<Eigen::Vector2d>& offsets,
                                double theta, double wavelength) {
  const int n = static_cast<int>(offsets.size());
  if (n == 0) throw std::invalid_argument("array has no elements");
  const double k = 2.0 * kPi / wavelength;
  const Eigen::Vector2d wave_dir(std::cos(theta), std::sin(theta));
  Eigen::VectorXcd a(n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int i = 0; i < n; ++i) {
    const double phase = -k * offsets[i].dot(wave_dir);
    a(i) = std::polar(scale, phase);
  }
  return a;
}

Eigen::VectorXcd array_response_derivative(
    const std::vector<Eigen::Vector2d>& offsets, double theta,
    double wavelength) {
  const int n = static_cast<int>(offsets.size());
  if (n == 0) throw std::invalid_argument("array has no elements");
  const double k = 2.0 * kPi / wavelength;
  const Eigen::Vector2d wave_dir(std::cos(theta), std::sin(theta));
  const Eigen::Vector2d wave_dir_d(-std::sin(theta), std::cos(theta));
  Eigen::VectorXcd da(n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int i = 0; i < n; ++i) {
    const double phase = -k * offsets[i].dot(wave_dir);
    const double phase_d = -k * offsets[i].dot(wave_dir_d);
    da(i) = std::polar(scale, phase) * cd(0.0, phase_d);
  }
  return da;
}

Beamformer dft_beamformer(const std::vector<Eigen::Vector2d>& tx_offsets,
                          int n_beams, double wavelength) {
  if (n_beams <= 0) throw std::invalid_argument("n_beams must be positive");
  Beamformer bf;
  bf.beam_angles.reserve(n_beams);
  bf.weights.resize(static_cast<int>(tx_offsets.size()), n_beams);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n_beams));
  for (int l = 0; l < n_beams; ++l) {
    const double angle = l * kPi / n_beams;
    bf.beam_angles.push_back(angle);
    bf.weights.col(l) = scale * array_response(tx_offsets, angle, wavelength);
  }
  return bf;
}

PulseMoments sinc_pulse_moments(double bandwidth_hz) {
  PulseMoments m;
  m.energy = 1.0;
  m.mean_square_bw = kPi * kPi * bandwidth_hz * bandwidth_hz / 3.0;
  m.cross = 0.0;  // even pulse: derivative is orthogonal to the pulse
  return m;
}

double sinc_autocorr(double dt, double bandwidth_hz) {
  return sinc_u(kPi * bandwidth_hz * dt);
}

double sinc_autocorr_d1(double dt, double bandwidth_hz) {
  const double w = kPi * bandwidth_hz;
  return w * sinc_u_d1(w * dt);
}

double sinc_autocorr_d2(double dt, double bandwidth_hz) {
  const double w = kPi * bandwidth_hz;
  return w * w * sinc_u_d2(w * dt);
}

std::vector<Eigen::Vector2d> half_wavelength_ula(int n_elements,
                                                 double wavelength) {
  if (n_elements <= 0) {
    throw std::invalid_argument("array needs at least one element");
  }
  std::vector<Eigen::Vector2d> offsets;
  offsets.reserve(n_elements);
  const double spacing = wavelength / 2.0;
  const double center = 0.5 * (n_elements - 1);
  for (int i = 0; i < n_elements; ++i) {
    offsets.emplace_back((i - center) * spacing, 0.0);
  }
  return offsets;
}

std::complex<double> path_gain(const Scenario& scenario, int path_index,
                               double wavelength, double reflection_power,
                               double phase) {
  const PathGeometry g = path_geometry(scenario, path_index);
  double magnitude;
  if (path_index == 0) {
    magnitude = wavelength / (4.0 * kPi) / g.dist_tx;
  } else {
    magnitude = wavelength / (4.0 * kPi) * std::sqrt(reflection_power) /
                (g.dist_tx + g.dist_rx);
  }
  return std::polar(magnitude, phase);
}

double array_aperture(const std::vector<Eigen::Vector2d>& offsets) {
  double aperture = 0.0;
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    for (std::size_t j = i + 1; j < offsets.size(); ++j) {
      aperture = std::max(aperture, (offsets[i] - offsets[j]).norm());
    }
  }
  return aperture;
}

bool narrowband_ok(const std::vector<Eigen::Vector2d>& offsets,
                   double bandwidth_hz, double c) {
  return array_aperture(offsets) < c / bandwidth_hz;
}

}  // namespace locfim
