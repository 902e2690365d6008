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

#include "locfim/channel_fim.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace locfim {

namespace {

using cd = std::complex<double>;

constexpr double kInf = std::numeric_limits<double>::infinity();

// Delay separations beyond this many reciprocal bandwidths contribute no
// pulse overlap worth keeping.
constexpr double kOverlapCutoff = 40.0;

// Parameter groups in grouped_by_parameter order.
enum Group { kAoa = 0, kAod = 1, kTau = 2, kGainRe = 3, kGainIm = 4 };

// Per-group derivative structure of the mean signal: which array vector the
// receive side uses, which beam-domain vector the transmit side uses,
// whether the pulse enters differentiated, and the complex gain multiplier.
struct GroupShape {
  bool use_array_derivative;
  bool use_beam_derivative;
  bool use_pulse_derivative;
};

constexpr std::array<GroupShape, 5> kShapes = {{
    {true, false, false},   // arrival angle
    {false, true, false},   // departure angle
    {false, false, true},   // delay
    {false, false, false},  // Re(gain)
    {false, false, false},  // Im(gain)
}};

cd gain_multiplier(Group g, const cd& h) {
  switch (g) {
    case kAoa:
    case kAod:
      return h;
    case kTau:
      return -h;
    case kGainRe:
      return cd(1.0, 0.0);
    case kGainIm:
      return cd(0.0, 1.0);
  }
  return cd(0.0, 0.0);
}

// Pulse-correlation factor for a pair of derivative orders at delay
// separation dt: plain-plain r, plain-deriv -r', deriv-plain r',
// deriv-deriv -r''.
double pulse_factor(bool deriv_row, bool deriv_col, double dt, double bw) {
  if (std::abs(dt) * bw > kOverlapCutoff) return 0.0;
  if (!deriv_row && !deriv_col) return sinc_autocorr(dt, bw);
  if (deriv_row && deriv_col) return -sinc_autocorr_d2(dt, bw);
  const double r1 = sinc_autocorr_d1(dt, bw);
  return deriv_row ? r1 : -r1;
}

double infty_or_inverse(double x) { return x > 0.0 ? 1.0 / x : kInf; }

}  // namespace

ChannelFim fim_channel_exact(const Scenario& scenario,
                             const SignalConfig& config,
                             const Beamformer& beamformer,
                             const std::vector<PathParams>& params) {
  validate_scenario(scenario);
  const int n = scenario.n_paths();
  if (static_cast<int>(params.size()) != n) {
    throw std::invalid_argument("params does not match the scenario paths");
  }
  for (const auto& p : params) {
    if (!p.gain.has_value()) {
      throw std::invalid_argument("path gain unset; assign gains before "
                                  "computing channel information");
    }
  }
  const auto& rx_offsets = scenario.mobile.element_offsets;
  const auto& tx_offsets = scenario.anchor.element_offsets;
  if (rx_offsets.empty() || tx_offsets.empty()) {
    throw std::invalid_argument("scenario arrays have no elements");
  }
  if (beamformer.weights.rows() != static_cast<int>(tx_offsets.size())) {
    throw std::invalid_argument("beamformer does not match the anchor array");
  }

  const double wavelength = kSpeedOfLight / config.carrier_hz;
  const double n_rx = static_cast<double>(rx_offsets.size());
  const double n_tx = static_cast<double>(tx_offsets.size());
  // Common information scale of every entry.
  const double kappa = config.noise_psd_w_hz > 0.0
                           ? config.symbol_energy_j * n_rx * n_tx *
                                 config.n_symbols / config.noise_psd_w_hz
                           : 0.0;

  ChannelFim fim;
  fim.ordering = FimOrdering::grouped_by_parameter;
  fim.n_paths = n;
  fim.has_los = scenario.has_los;
  fim.matrix = Eigen::MatrixXd::Zero(5 * n, 5 * n);
  if (kappa == 0.0) return fim;  // no energy, no information

  // Per-path receive steering vectors and beam-domain transmit responses.
  std::vector<Eigen::VectorXcd> a(n), da(n), g(n), dg(n);
  std::vector<cd> h(n);
  for (int k = 0; k < n; ++k) {
    a[k] = array_response(rx_offsets, params[k].theta_rx, wavelength);
    da[k] = array_response_derivative(rx_offsets, params[k].theta_rx,
                                      wavelength);
    const Eigen::VectorXcd atx =
        array_response(tx_offsets, params[k].theta_tx, wavelength);
    const Eigen::VectorXcd datx = array_response_derivative(
        tx_offsets, params[k].theta_tx, wavelength);
    g[k] = beamformer.weights.adjoint() * atx;
    dg[k] = beamformer.weights.adjoint() * datx;
    h[k] = *params[k].gain;
  }

  const double bw = config.bandwidth_hz;
  for (int k = 0; k < n; ++k) {
    for (int k2 = 0; k2 < n; ++k2) {
      const double dt = params[k2].tau - params[k].tau;
      // Array-domain inner products, indexed by derivative use on each side.
      const cd arr[2][2] = {{a[k].dot(a[k2]), a[k].dot(da[k2])},
                            {da[k].dot(a[k2]), da[k].dot(da[k2])}};
      // Beam-domain inner products; the column side appears conjugated.
      const cd beam[2][2] = {{g[k2].dot(g[k]), dg[k2].dot(g[k])},
                             {g[k2].dot(dg[k]), dg[k2].dot(dg[k])}};
      for (int gu = 0; gu < 5; ++gu) {
        for (int gv = 0; gv < 5; ++gv) {
          const GroupShape& su = kShapes[gu];
          const GroupShape& sv = kShapes[gv];
          const double rho = pulse_factor(su.use_pulse_derivative,
                                          sv.use_pulse_derivative, dt, bw);
          if (rho == 0.0) continue;
          const cd mu = gain_multiplier(static_cast<Group>(gu), h[k]);
          const cd mv = gain_multiplier(static_cast<Group>(gv), h[k2]);
          const cd value = std::conj(mu) * mv *
                           arr[su.use_array_derivative][sv.use_array_derivative] *
                           beam[sv.use_beam_derivative][su.use_beam_derivative];
          fim.matrix(gu * n + k, gv * n + k2) = kappa * std::real(value * rho);
        }
      }
    }
  }
  return fim;
}

ChannelFim simplify_fim(const ChannelFim& fim) {
  if (fim.ordering != FimOrdering::grouped_by_parameter) {
    throw std::invalid_argument("simplify_fim expects grouped_by_parameter "
                                "ordering");
  }
  const int n = fim.n_paths;
  ChannelFim out = fim;
  out.matrix = Eigen::MatrixXd::Zero(5 * n, 5 * n);
  for (int g = 0; g < 5; ++g) {
    for (int k = 0; k < n; ++k) {
      out.matrix(g * n + k, g * n + k) = fim.matrix(g * n + k, g * n + k);
    }
  }
  // Keep the departure-angle/gain couplings, still diagonal across paths.
  for (int k = 0; k < n; ++k) {
    for (int gg : {kGainRe, kGainIm}) {
      out.matrix(kAod * n + k, gg * n + k) = fim.matrix(kAod * n + k,
                                                        gg * n + k);
      out.matrix(gg * n + k, kAod * n + k) = fim.matrix(gg * n + k,
                                                        kAod * n + k);
    }
  }
  return out;
}

ChannelFim reorder_by_path(const ChannelFim& fim) {
  if (fim.ordering != FimOrdering::grouped_by_parameter) {
    throw std::invalid_argument("reorder_by_path expects grouped_by_parameter "
                                "ordering");
  }
  const int n = fim.n_paths;
  // Per-path run (tau, theta_tx, gain_re, gain_im, theta_rx) drawn from the
  // parameter groups.
  constexpr std::array<int, 5> source_group = {kTau, kAod, kGainRe, kGainIm,
                                               kAoa};
  Eigen::VectorXi idx(5 * n);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < 5; ++j) idx(5 * k + j) = source_group[j] * n + k;
  }
  ChannelFim out = fim;
  out.ordering = FimOrdering::grouped_by_path;
  out.matrix = fim.matrix(idx, idx);
  return out;
}

PathInfo per_path_info(const ChannelFim& fim, int path_block) {
  if (fim.ordering != FimOrdering::grouped_by_path) {
    throw std::invalid_argument("per_path_info expects grouped_by_path "
                                "ordering");
  }
  if (path_block < 0 || path_block >= fim.n_paths) {
    throw std::invalid_argument("path block out of range");
  }
  const Eigen::Matrix<double, 5, 5> b =
      fim.matrix.block<5, 5>(5 * path_block, 5 * path_block);
  PathInfo info;
  info.sigma2_tau = infty_or_inverse(b(0, 0));
  info.sigma2_gain_re = infty_or_inverse(b(2, 2));
  info.sigma2_gain_im = infty_or_inverse(b(3, 3));
  info.sigma2_aoa = infty_or_inverse(b(4, 4));
  info.gain_coupling_re = b(1, 2);
  info.gain_coupling_im = b(1, 3);
  // Departure-angle information after marginalizing the complex gain.
  double aod_information = b(1, 1);
  if (b(2, 2) > 0.0) aod_information -= b(1, 2) * b(1, 2) / b(2, 2);
  if (b(3, 3) > 0.0) aod_information -= b(1, 3) * b(1, 3) / b(3, 3);
  info.sigma2_aod = aod_information > 0.0 ? 1.0 / aod_information : kInf;
  return info;
}

EfimResult schur_efim(const Eigen::MatrixXd& fim,
                      const std::vector<int>& keep) {
  const int total = static_cast<int>(fim.rows());
  if (fim.cols() != total) {
    throw std::invalid_argument("FIM must be square");
  }
  std::vector<bool> kept(total, false);
  for (int i : keep) {
    if (i < 0 || i >= total) {
      throw std::invalid_argument("keep index out of range");
    }
    kept[i] = true;
  }
  std::vector<int> drop;
  for (int i = 0; i < total; ++i) {
    if (!kept[i]) drop.push_back(i);
  }

  const int nk = static_cast<int>(keep.size());
  const int nd = static_cast<int>(drop.size());
  EfimResult result;
  if (nd == 0) {
    result.matrix = Eigen::MatrixXd(nk, nk);
    for (int i = 0; i < nk; ++i) {
      for (int j = 0; j < nk; ++j) result.matrix(i, j) = fim(keep[i], keep[j]);
    }
    return result;
  }

  Eigen::MatrixXd j11(nk, nk), j12(nk, nd), j22(nd, nd);
  for (int i = 0; i < nk; ++i) {
    for (int j = 0; j < nk; ++j) j11(i, j) = fim(keep[i], keep[j]);
    for (int j = 0; j < nd; ++j) j12(i, j) = fim(keep[i], drop[j]);
  }
  for (int i = 0; i < nd; ++i) {
    for (int j = 0; j < nd; ++j) j22(i, j) = fim(drop[i], drop[j]);
  }

  // Symmetric eigendecomposition; small eigenvalues drop out of the inverse
  // so a singular nuisance block degrades to a pseudo-inverse.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j22);
  const Eigen::VectorXd evals = es.eigenvalues();
  const double scale = evals.cwiseAbs().maxCoeff();
  const double threshold = 1e-12 * scale;
  Eigen::VectorXd inv_evals(nd);
  for (int i = 0; i < nd; ++i) {
    if (evals(i) > threshold) {
      inv_evals(i) = 1.0 / evals(i);
    } else {
      inv_evals(i) = 0.0;
      result.used_pseudo_inverse = true;
    }
  }
  const Eigen::MatrixXd j22_inv = es.eigenvectors() *
                                  inv_evals.asDiagonal() *
                                  es.eigenvectors().transpose();
  result.matrix = j11 - j12 * j22_inv * j12.transpose();
  return result;
}

PathInfo path_info_closed_form(const SignalConfig& config,
                               const Beamformer& beamformer,
                               const std::vector<Eigen::Vector2d>& rx_offsets,
                               const std::vector<Eigen::Vector2d>& tx_offsets,
                               const PathParams& params) {
  if (!params.gain.has_value()) {
    throw std::invalid_argument("path gain unset");
  }
  if (rx_offsets.empty() || tx_offsets.empty()) {
    throw std::invalid_argument("arrays have no elements");
  }
  if (beamformer.weights.rows() != static_cast<int>(tx_offsets.size())) {
    throw std::invalid_argument("beamformer does not match the anchor array");
  }
  const double wavelength = kSpeedOfLight / config.carrier_hz;
  const double n_rx = static_cast<double>(rx_offsets.size());
  const double n_tx = static_cast<double>(tx_offsets.size());
  const double kappa = config.noise_psd_w_hz > 0.0
                           ? config.symbol_energy_j * n_rx * n_tx *
                                 config.n_symbols / config.noise_psd_w_hz
                           : 0.0;

  const cd h = *params.gain;
  const double h2 = std::norm(h);
  const Eigen::VectorXcd da = array_response_derivative(
      rx_offsets, params.theta_rx, wavelength);
  const Eigen::VectorXcd g =
      beamformer.weights.adjoint() *
      array_response(tx_offsets, params.theta_tx, wavelength);
  const Eigen::VectorXcd dg =
      beamformer.weights.adjoint() *
      array_response_derivative(tx_offsets, params.theta_tx, wavelength);

  const double g2 = g.squaredNorm();
  const double dg2 = dg.squaredNorm();
  const double da2 = da.squaredNorm();
  const cd g_dg = g.dot(dg);  // g^H dg
  const double msb = sinc_pulse_moments(config.bandwidth_hz).mean_square_bw;

  PathInfo info;
  info.sigma2_tau = infty_or_inverse(kappa * h2 * g2 * msb);
  info.sigma2_aoa = infty_or_inverse(kappa * h2 * da2 * g2);
  info.sigma2_gain_re = infty_or_inverse(kappa * g2);
  info.sigma2_gain_im = info.sigma2_gain_re;
  info.gain_coupling_re = kappa * std::real(std::conj(h) * g_dg);
  info.gain_coupling_im = -kappa * std::imag(std::conj(h) * g_dg);
  // Departure-angle information left after the gain marginalization; the
  // beam-correlation ratio is what a misaligned codebook takes away.
  double aod_information = kappa * h2 * dg2;
  if (g2 > 0.0) aod_information -= kappa * h2 * std::norm(g_dg) / g2;
  info.sigma2_aod = aod_information > 0.0 ? 1.0 / aod_information : kInf;
  return info;
}

}  // namespace locfim
