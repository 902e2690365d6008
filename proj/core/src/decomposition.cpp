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

#include "locfim/decomposition.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace locfim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double inverse_or_zero(double sigma2) {
  return std::isinf(sigma2) ? 0.0 : 1.0 / sigma2;
}

// Sign convention for eigenvectors: rotation component positive when
// present, otherwise first non-zero component positive.
Eigen::Vector3d fix_sign(Eigen::Vector3d v) {
  if (std::abs(v(2)) > 1e-12) {
    if (v(2) < 0.0) v = -v;
    return v;
  }
  for (int i = 0; i < 3; ++i) {
    if (std::abs(v(i)) > 1e-12) {
      if (v(i) < 0.0) v = -v;
      return v;
    }
  }
  return v;
}

double cap_magnitude(double lam, bool* capped) {
  if (lam > kRankOneMagnitudeCap) {
    *capped = true;
    return kRankOneMagnitudeCap;
  }
  return lam;
}

// One denominator summand coef * sigma2, treating an uninformative parameter
// (infinite sigma2) against a vanished coefficient as zero.
double penalty_term(double coef, double sigma2) {
  if (std::isinf(sigma2)) return coef == 0.0 ? 0.0 : kInf;
  return coef * sigma2;
}

}  // namespace

Eigen::Matrix3d upsilon(int n, int m, double theta, double phi, double rho) {
  const double st = std::sin(theta), ct = std::cos(theta);
  const double shifted = std::sin(theta + phi);
  const double c_shifted = std::cos(theta + phi);
  const double sn = (n % 2 == 0) ? 1.0 : -1.0;
  const double sm = (m % 2 == 0) ? 1.0 : -1.0;
  Eigen::Matrix3d u;
  u << c_shifted * c_shifted, sn * st * ct, sm * rho * st,
      sn * st * ct, shifted * shifted, -sm * rho * ct,
      sm * rho * st, -sm * rho * ct, rho * rho;
  return u;
}

Eigen::Matrix3d rotation_coupling_block(double bearing, double dist) {
  const double c = std::cos(bearing), s = std::sin(bearing);
  Eigen::Matrix3d b;
  b << -2.0 * s * c, c * c - s * s, dist * c,
      c * c - s * s, 2.0 * s * c, dist * s,
      dist * c, dist * s, 0.0;
  return b;
}

Eigen::MatrixXd fim_position_domain(const Eigen::MatrixXd& path_fim,
                                    const TransformMatrix& transform) {
  const int n_paths = transform.n_paths();
  const int n_reflected = static_cast<int>(transform.nlos_pose_blocks.size());
  if (path_fim.rows() != 3 * n_paths || path_fim.cols() != 3 * n_paths) {
    throw std::invalid_argument("per-path FIM size does not match the "
                                "transform blocks");
  }
  const int rows = 3 + 2 * n_reflected;
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(rows, rows);

  // Pose blocks in path order, direct first.
  std::vector<const Eigen::Matrix3d*> pose;
  pose.reserve(n_paths);
  if (transform.has_los) pose.push_back(&transform.los_pose_block);
  for (const auto& b : transform.nlos_pose_blocks) pose.push_back(&b);
  const int first_reflected = transform.has_los ? 1 : 0;

  for (int i = 0; i < n_paths; ++i) {
    for (int j = 0; j < n_paths; ++j) {
      const Eigen::Matrix3d block = path_fim.block<3, 3>(3 * i, 3 * j);
      out.topLeftCorner<3, 3>() += *pose[i] * block * pose[j]->transpose();
      const bool i_reflected = i >= first_reflected;
      const bool j_reflected = j >= first_reflected;
      if (j_reflected) {
        const int jj = j - first_reflected;
        out.block<3, 2>(0, 3 + 2 * jj) +=
            *pose[i] * block * transform.incidence_blocks[jj].transpose();
      }
      if (i_reflected) {
        const int ii = i - first_reflected;
        out.block<2, 3>(3 + 2 * ii, 0) +=
            transform.incidence_blocks[ii] * block * pose[j]->transpose();
      }
      if (i_reflected && j_reflected) {
        const int ii = i - first_reflected;
        const int jj = j - first_reflected;
        out.block<2, 2>(3 + 2 * ii, 3 + 2 * jj) +=
            transform.incidence_blocks[ii] * block *
            transform.incidence_blocks[jj].transpose();
      }
    }
  }
  return out;
}

DirectGain direct_gain_terms(const PathInfo& info, const PathGeometry& geometry,
                             double c) {
  const double theta = geometry.bearing_tx;
  const double d = geometry.dist_tx;
  const double ct = std::cos(theta), st = std::sin(theta);
  DirectGain gain;

  RankOneTerm& toa = gain.terms[0];
  toa.source = TermSource::direct_delay;
  toa.path_index = 0;
  toa.lam = cap_magnitude(inverse_or_zero(info.sigma2_tau) / (c * c),
                          &toa.magnitude_capped);
  toa.v = fix_sign(Eigen::Vector3d(ct, st, 0.0));

  RankOneTerm& aod = gain.terms[1];
  aod.source = TermSource::direct_aod;
  aod.path_index = 0;
  aod.lam = cap_magnitude(inverse_or_zero(info.sigma2_aod) / (d * d),
                          &aod.magnitude_capped);
  aod.v = fix_sign(Eigen::Vector3d(-st, ct, 0.0));

  RankOneTerm& aoa = gain.terms[2];
  aoa.source = TermSource::direct_aoa;
  aoa.path_index = 0;
  aoa.lam = cap_magnitude(
      inverse_or_zero(info.sigma2_aoa) * (1.0 + d * d) / (d * d),
      &aoa.magnitude_capped);
  // Unnormalized eigenvector (st / d, -ct / d, 1), norm sqrt(1 + d^2) / d.
  aoa.v = fix_sign(Eigen::Vector3d(st / d, -ct / d, 1.0).normalized());

  for (const RankOneTerm& t : gain.terms) {
    gain.matrix += t.lam * t.v * t.v.transpose();
  }
  return gain;
}

ReflectedGain reflected_gain(const PathInfo& info, const PathGeometry& geometry,
                             double c) {
  const double theta = geometry.bearing_rx;
  const double rp = geometry.dist_rx;
  const double ct = std::cos(theta), st = std::sin(theta);
  ReflectedGain gain;

  gain.toa.source = TermSource::reflected;
  gain.toa.lam = cap_magnitude(inverse_or_zero(info.sigma2_tau) / (c * c),
                               &gain.toa.magnitude_capped);
  gain.toa.v = fix_sign(Eigen::Vector3d(ct, st, 0.0));

  gain.aoa.source = TermSource::reflected;
  gain.aoa.lam = cap_magnitude(
      inverse_or_zero(info.sigma2_aoa) * (1.0 + rp * rp) / (rp * rp),
      &gain.aoa.magnitude_capped);
  // Unnormalized eigenvector (-st / rp, ct / rp, 1).
  gain.aoa.v = fix_sign(Eigen::Vector3d(-st / rp, ct / rp, 1.0).normalized());

  gain.matrix = gain.toa.lam * gain.toa.v * gain.toa.v.transpose() +
                gain.aoa.lam * gain.aoa.v * gain.aoa.v.transpose();
  return gain;
}

LossWeights reflected_loss_weights(const PathInfo& info,
                                   const PathGeometry& geometry, double c) {
  const double ct = std::cos(geometry.bearing_tx);
  const double st = std::sin(geometry.bearing_tx);
  const double cr = std::cos(geometry.bearing_rx);
  const double sr = std::sin(geometry.bearing_rx);
  const double rq = geometry.dist_tx;
  const double rp = geometry.dist_rx;

  // Information weights of the three observables, folded with the incidence
  // sensitivities: u for the delay, vt for the departure angle, vr for the
  // arrival angle.
  const double u = inverse_or_zero(info.sigma2_tau) / (c * c);
  const double vt = inverse_or_zero(info.sigma2_aod) / (rq * rq);
  const double vr = inverse_or_zero(info.sigma2_aoa) / (rp * rp);

  const double dtheta = wrap_angle(geometry.bearing_rx - geometry.bearing_tx);
  const double cd = std::cos(dtheta);
  const double sd = std::sin(dtheta);
  const double one_plus = 1.0 + cd;

  LossWeights w;
  w.a = u * (ct + cr) * (ct + cr) + vt * st * st + vr * sr * sr;
  w.b = u * (ct + cr) * (st + sr) - vt * st * ct - vr * sr * cr;
  w.d = u * (st + sr) * (st + sr) + vt * ct * ct + vr * cr * cr;

  // det(a d - b^2) in cancellation-free form; identical to a*d - b*b.
  const double det = u * vt * one_plus * one_plus +
                     u * vr * one_plus * one_plus + vt * vr * sd * sd;
  const double scale = std::max({std::abs(w.a), std::abs(w.b), std::abs(w.d)});
  if (det <= 1e-14 * scale * scale || scale == 0.0) {
    throw GeometryError("incidence-point normal equations are degenerate: "
                        "fewer than two informative observables or exactly "
                        "collinear rays");
  }

  w.w_toa = u * u * one_plus * one_plus * (vt + vr) / det;
  w.w_aoa = vr * vr * (u * one_plus * one_plus + sd * sd * vt) / det;
  w.gamma = u * vt * vr * one_plus * sd / det;
  // Net weights in product form: eps == u - w_toa, beta == vr - w_aoa.
  w.eps = u * vt * vr * sd * sd / det;
  w.beta = u * vt * vr * one_plus * one_plus / det;
  return w;
}

Eigen::Matrix3d reflected_loss_matrix(const LossWeights& weights,
                                      const PathGeometry& geometry) {
  const double theta = geometry.bearing_rx;
  const double rp = geometry.dist_rx;
  return weights.w_toa * upsilon(0, 0, theta, 0.0, 0.0) +
         weights.w_aoa * upsilon(1, 1, theta, 0.5 * std::numbers::pi, rp) -
         weights.gamma * rotation_coupling_block(theta, rp);
}

RankOneTerm net_reflected_term(const PathInfo& info,
                               const PathGeometry& geometry, double c) {
  const double rp = geometry.dist_rx;
  const double rq = geometry.dist_tx;
  const double dtheta = wrap_angle(geometry.bearing_rx - geometry.bearing_tx);
  const double cd = std::cos(dtheta);
  const double cr = std::cos(geometry.bearing_rx);
  const double sr = std::sin(geometry.bearing_rx);

  RankOneTerm term;
  term.source = TermSource::reflected;

  // Magnitude: numerator / denominator with each denominator summand the
  // inverse information of one observable, scaled by its incidence-point
  // sensitivity. Dead observables contribute an infinite summand unless
  // their geometric coefficient already vanished.
  const double numerator = 2.0 + rp * rp * (1.0 + cd);
  const double denominator =
      penalty_term((1.0 - cd) * c * c, info.sigma2_tau) +
      penalty_term((1.0 + cd) * rq * rq, info.sigma2_aod) +
      penalty_term((1.0 + cd) * rp * rp, info.sigma2_aoa);
  double lam = std::isinf(denominator) ? 0.0 : numerator / denominator;
  // A lone departure angle never informs the pose of the receiver: its pose
  // sensitivity column is identically zero for a reflected path. The ratio
  // above would overstate it when the rays are exactly parallel.
  const bool only_aod = !std::isinf(info.sigma2_aod) &&
                        std::isinf(info.sigma2_tau) &&
                        std::isinf(info.sigma2_aoa);
  if (only_aod) lam = 0.0;
  term.lam = cap_magnitude(lam, &term.magnitude_capped);

  // Direction from the half-angle tangent of the bearing mismatch; this is
  // the continuous limit form, well defined even when the cross weight
  // vanishes. Two branches keep it stable for any mismatch.
  const double t = std::tan(0.5 * dtheta);
  Eigen::Vector3d w;
  if (std::abs(t) <= 1.0) {
    w << t * cr - sr, cr + t * sr, rp;
  } else {
    w << cr - sr / t, cr / t + sr, rp / t;
  }
  term.v = fix_sign(w.normalized());

  const int informative = (std::isinf(info.sigma2_tau) ? 0 : 1) +
                          (std::isinf(info.sigma2_aod) ? 0 : 1) +
                          (std::isinf(info.sigma2_aoa) ? 0 : 1);
  term.zero_cross_coupling = std::sin(dtheta) == 0.0 || informative < 3;
  return term;
}

EfimDecomposition decompose(const Scenario& scenario,
                            const std::vector<PathInfo>& infos,
                            double c) {
  validate_scenario(scenario);
  if (static_cast<int>(infos.size()) != scenario.n_paths()) {
    throw std::invalid_argument("infos does not match the scenario paths");
  }
  EfimDecomposition out;
  int info_index = 0;

  if (scenario.has_los) {
    const PathGeometry geometry = path_geometry(scenario, 0);
    DirectGain direct = direct_gain_terms(infos[info_index++], geometry, c);
    out.direct_terms.assign(direct.terms.begin(), direct.terms.end());
    out.direct_matrix = direct.matrix;
  }

  for (int k = 1; k <= scenario.n_reflected(); ++k) {
    const PathInfo& info = infos[info_index++];
    const PathGeometry geometry = path_geometry(scenario, k);

    ReflectedGain gain = reflected_gain(info, geometry, c);
    out.gain_matrix += gain.matrix;

    RankOneTerm net = net_reflected_term(info, geometry, c);
    net.path_index = k;

    const int informative = (std::isinf(info.sigma2_tau) ? 0 : 1) +
                            (std::isinf(info.sigma2_aod) ? 0 : 1) +
                            (std::isinf(info.sigma2_aoa) ? 0 : 1);
    bool have_weights = false;
    LossWeights weights;
    if (informative >= 2) {
      try {
        weights = reflected_loss_weights(info, geometry, c);
        have_weights = true;
      } catch (const GeometryError&) {
        // Exactly collinear incidence rays: the normal equations for the
        // incidence point are singular, but the net term formula above is
        // the continuous limit and stays valid.
      }
    }
    if (have_weights) {
      out.loss_matrix += reflected_loss_matrix(weights, geometry);
      // Net matrix from the stable product weights, not gain minus loss.
      out.net_matrix +=
          weights.eps * upsilon(0, 0, geometry.bearing_rx, 0.0, 0.0) +
          weights.beta * upsilon(1, 1, geometry.bearing_rx,
                                 0.5 * std::numbers::pi, geometry.dist_rx) +
          weights.gamma *
              rotation_coupling_block(geometry.bearing_rx, geometry.dist_rx);
    } else {
      // Fewer than two informative observables (generically everything is
      // consumed by the unknown incidence point, so the net vanishes), or a
      // singular corner where the limit form still applies: take the net
      // from the rank-one term and book the rest as loss.
      const Eigen::Matrix3d net_matrix =
          net.lam * net.v * net.v.transpose();
      out.loss_matrix += gain.matrix - net_matrix;
      out.net_matrix += net_matrix;
    }
    out.reflected_terms.push_back(net);
  }

  out.efim = out.direct_matrix + out.net_matrix;
  return out;
}

ProjectedGains projected_gains(const RankOneTerm& term) {
  ProjectedGains p;
  p.lam_xy = term.lam * (term.v(0) * term.v(0) + term.v(1) * term.v(1));
  p.lam_alpha = term.lam * term.v(2) * term.v(2);
  return p;
}

}  // namespace locfim
