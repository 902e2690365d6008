// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the locfim authors
//
// Fisher information of the stacked channel parameters (per-path delay,
// departure angle, arrival angle, complex gain) for the beam-swept pilot
// signal, with the structured simplification that decouples paths and the
// per-path accuracy readout used by the position-domain closed forms.
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

#include <vector>

#include <Eigen/Dense>

#include "locfim/geometry.hpp"
#include "locfim/signal.hpp"

namespace locfim {

// Parameter layout of a ChannelFim with n paths:
//   grouped_by_parameter: [theta_rx(n), theta_tx(n), tau(n),
//                          gain_re(n), gain_im(n)]
//   grouped_by_path:      per path [tau, theta_tx, gain_re, gain_im,
//                          theta_rx], paths consecutive
enum class FimOrdering { grouped_by_parameter, grouped_by_path };

struct ChannelFim {
  Eigen::MatrixXd matrix;  // 5 n x 5 n, symmetric
  FimOrdering ordering = FimOrdering::grouped_by_parameter;
  int n_paths = 0;
  bool has_los = true;
};

// Marginalized per-path accuracies. An infinite variance marks a parameter
// the path carries no information about; for the departure angle this is the
// accuracy left after marginalizing the unknown complex gain.
struct PathInfo {
  double sigma2_tau = 0.0;       // [s^2]
  double sigma2_aod = 0.0;       // [rad^2], after gain marginalization
  double sigma2_aoa = 0.0;       // [rad^2]
  double gain_coupling_re = 0.0; // departure-angle / Re(gain) information
  double gain_coupling_im = 0.0; // departure-angle / Im(gain) information
  double sigma2_gain_re = 0.0;
  double sigma2_gain_im = 0.0;
};

struct EfimResult {
  Eigen::MatrixXd matrix;
  bool used_pseudo_inverse = false;
};

// Exact channel-domain Fisher information, including all cross-path
// couplings through pulse overlap and array/beam correlation. `params` must
// align with the present paths (direct first) and carry gains. Pulse
// overlaps beyond 40 symbols-at-full-bandwidth of delay separation are
// exactly zero.
ChannelFim fim_channel_exact(const Scenario& scenario,
                             const SignalConfig& config,
                             const Beamformer& beamformer,
                             const std::vector<PathParams>& params);

// Structured approximation: keeps only per-parameter diagonals plus the
// departure-angle/gain couplings within each path, in grouped_by_parameter
// layout. Idempotent.
ChannelFim simplify_fim(const ChannelFim& fim);

// Symmetric permutation from grouped_by_parameter to grouped_by_path layout.
// Intended for simplified matrices, where the result is block diagonal with
// one 5 x 5 block per path.
ChannelFim reorder_by_path(const ChannelFim& fim);

// Reads the accuracies of one 5 x 5 path block of a grouped_by_path matrix.
// A non-positive gain-marginalized departure-angle information yields an
// infinite sigma2_aod rather than an error.
PathInfo per_path_info(const ChannelFim& fim, int path_block);

// Schur complement onto the parameters listed in `keep` (indices into
// `fim`), marginalizing the rest. Falls back to an eigenvalue pseudo-inverse
// with relative threshold 1e-12 when the marginalized block is singular and
// flags that in the result.
EfimResult schur_efim(const Eigen::MatrixXd& fim,
                      const std::vector<int>& keep);

// Per-path accuracies straight from the signal chain, without assembling the
// 5 n x 5 n matrix. Equals per_path_info() of the simplified exact FIM.
PathInfo path_info_closed_form(const SignalConfig& config,
                               const Beamformer& beamformer,
                               const std::vector<Eigen::Vector2d>& rx_offsets,
                               const std::vector<Eigen::Vector2d>& tx_offsets,
                               const PathParams& params);

}  // namespace locfim
