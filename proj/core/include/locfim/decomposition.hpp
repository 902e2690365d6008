// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the locfim authors
//
// Closed-form decomposition of the position-domain Fisher information into
// rank-one terms. Each direct-path observable (delay, departure angle,
// arrival angle) contributes one term. Each reflected path contributes a
// gain minus the loss paid for its unknown incidence point, and that net
// contribution is itself exactly rank one, with closed-form magnitude and
// direction.
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

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "locfim/channel_fim.hpp"
#include "locfim/geometry.hpp"

namespace locfim {

// Magnitude cap: larger rank-one magnitudes are clamped and flagged.
inline constexpr double kRankOneMagnitudeCap = 1e18;

enum class TermSource { direct_delay, direct_aod, direct_aoa, reflected };

// One lam * v v^T contribution to the (p_x, p_y, alpha) information.
// v is unit norm; its sign convention makes the alpha component positive
// when present, otherwise the first non-zero component positive.
struct RankOneTerm {
  double lam = 0.0;
  Eigen::Vector3d v = Eigen::Vector3d::Zero();
  TermSource source = TermSource::reflected;
  int path_index = -1;  // scenario path index for reflected terms
  bool magnitude_capped = false;
  // The delay/angle cross weight vanished (parallel rays or a dead
  // parameter); the direction comes from the continuous limit form.
  bool zero_cross_coupling = false;
};

// Split of a rank-one term's magnitude into its translation-information and
// rotation-information parts: the trace of the 2 x 2 position block and the
// (alpha, alpha) entry of lam * v v^T. They sum to lam.
struct ProjectedGains {
  double lam_xy = 0.0;
  double lam_alpha = 0.0;
};

// Weights of a reflected path's incidence-point penalty. a, b, d are the
// entries [[a, b], [b, d]] of the incidence-block normal equations; w_toa,
// w_aoa and gamma weight the subtracted penalty; eps and beta are the net
// weights that remain after the subtraction, computed in cancellation-free
// product form. eps * beta == gamma^2 holds identically.
struct LossWeights {
  double w_toa = 0.0;
  double w_aoa = 0.0;
  double gamma = 0.0;
  double a = 0.0;
  double b = 0.0;
  double d = 0.0;
  double eps = 0.0;
  double beta = 0.0;
};

struct EfimDecomposition {
  Eigen::Matrix3d efim = Eigen::Matrix3d::Zero();
  std::vector<RankOneTerm> direct_terms;     // empty without a direct path
  std::vector<RankOneTerm> reflected_terms;  // one per incidence point
  Eigen::Matrix3d direct_matrix = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d gain_matrix = Eigen::Matrix3d::Zero();  // reflected gains
  Eigen::Matrix3d loss_matrix = Eigen::Matrix3d::Zero();  // incidence penalty
  Eigen::Matrix3d net_matrix = Eigen::Matrix3d::Zero();   // gains - penalty
};

// Structured 3 x 3 template underlying every closed form here:
//   [[cos^2(t + f),        (-1)^n st ct,        (-1)^m     r st],
//    [(-1)^n st ct,        sin^2(t + f),        (-1)^(m+1) r ct],
//    [(-1)^m r st,         (-1)^(m+1) r ct,     r^2            ]]
// with st = sin t, ct = cos t.
Eigen::Matrix3d upsilon(int n, int m, double theta, double phi, double rho);

// Symmetric delay/rotation coupling block of a reflected path at mobile-side
// bearing `bearing` and range `dist`:
//   [[-2 s c, c^2 - s^2, dist c], [c^2 - s^2, 2 s c, dist s],
//    [dist c, dist s, 0]] with c = cos bearing, s = sin bearing.
Eigen::Matrix3d rotation_coupling_block(double bearing, double dist);

// Position-domain FIM from a block-diagonal per-path (tau, theta_tx,
// theta_rx) channel FIM (size 3 P) and the Jacobian blocks. Rows and columns
// are (p_x, p_y, alpha, s_1x, s_1y, ...). Built blockwise; equals
// assemble_transform(T) * path_fim * assemble_transform(T)^T.
Eigen::MatrixXd fim_position_domain(const Eigen::MatrixXd& path_fim,
                                    const TransformMatrix& transform);

// Direct-path contribution: delay, departure and arrival rank-one terms and
// their sum. geometry must be the direct path's.
struct DirectGain {
  std::array<RankOneTerm, 3> terms;
  Eigen::Matrix3d matrix = Eigen::Matrix3d::Zero();
};
DirectGain direct_gain_terms(const PathInfo& info, const PathGeometry& geometry,
                             double c = kSpeedOfLight);

// Reflected-path gross gain (before the incidence-point penalty): delay and
// arrival terms at the mobile-side bearing.
struct ReflectedGain {
  Eigen::Matrix3d matrix = Eigen::Matrix3d::Zero();
  RankOneTerm toa;
  RankOneTerm aoa;
};
ReflectedGain reflected_gain(const PathInfo& info, const PathGeometry& geometry,
                             double c = kSpeedOfLight);

// Penalty weights for marginalizing one incidence point. Throws
// GeometryError when the incidence-block normal equations are degenerate
// (fewer than two informative parameters or exactly collinear rays).
LossWeights reflected_loss_weights(const PathInfo& info,
                                   const PathGeometry& geometry,
                                   double c = kSpeedOfLight);

// The subtracted penalty matrix: w_toa and w_aoa weighted templates minus
// the gamma-weighted delay/rotation coupling block.
Eigen::Matrix3d reflected_loss_matrix(const LossWeights& weights,
                                      const PathGeometry& geometry);

// Net rank-one contribution of a reflected path, in closed form. Dead
// parameters (infinite sigma2) are handled as continuous limits: a vanished
// geometric coefficient beats an infinite variance, so exactly collinear
// rays keep the contribution the marginalization cannot consume, while a
// generic path with fewer than two informative parameters comes back with
// lam == 0.
RankOneTerm net_reflected_term(const PathInfo& info,
                               const PathGeometry& geometry,
                               double c = kSpeedOfLight);

// Full position-domain decomposition for a scenario. `infos` aligns with the
// present paths, direct first. The EFIM is assembled from the direct terms
// plus the net reflected terms, which is algebraically identical to
// direct + gain - loss but free of their cancellation.
EfimDecomposition decompose(const Scenario& scenario,
                            const std::vector<PathInfo>& infos,
                            double c = kSpeedOfLight);

ProjectedGains projected_gains(const RankOneTerm& term);

}  // namespace locfim
