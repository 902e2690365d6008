// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the locfim authors

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "doctest.h"
#include "locfim/decomposition.hpp"
#include "locfim/geometry.hpp"
#include "oracle_helpers.hpp"

using namespace locfim;
using locfim::testing::DensePathSplit;
using locfim::testing::ScenarioDrawOptions;
using locfim::testing::dense_efim;
using locfim::testing::dense_path_split;
using locfim::testing::random_path_info;
using locfim::testing::random_path_infos;
using locfim::testing::random_scenario;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::Matrix3d outer(const Eigen::Vector3d& v) { return v * v.transpose(); }

// Largest magnitude relative to the bigger of the two norms, with an
// absolute floor for near-zero comparisons.
double rel_diff(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b) {
  const double scale = std::max(a.norm(), b.norm());
  if (scale == 0.0) return 0.0;
  return (a - b).norm() / scale;
}

// Collinear scene: anchor, incidence point and mobile on the x axis, with s
// between the end points (back scatter) or beyond the mobile (forward
// scatter).
Scenario collinear_scene(bool back_scatter) {
  Scenario s;
  s.anchor.position = {0.0, 0.0};
  s.mobile.position = {6.0, 0.0};
  s.mobile.orientation = 0.9;
  s.incidence_points = {back_scatter ? Eigen::Vector2d{2.0, 0.0}
                                     : Eigen::Vector2d{9.0, 0.0}};
  return s;
}

PathInfo info_with(double s2_tau, double s2_aod, double s2_aoa) {
  PathInfo info;
  info.sigma2_tau = s2_tau;
  info.sigma2_aod = s2_aod;
  info.sigma2_aoa = s2_aoa;
  return info;
}

}  // namespace

TEST_SUITE("decomposition") {

TEST_CASE("template matrices are the documented outer products") {
  const double theta = 0.7;
  const double rho = 2.3;
  const double st = std::sin(theta);
  const double ct = std::cos(theta);

  const Eigen::Matrix3d u00 = upsilon(0, 0, theta, 0.0, 0.0);
  CHECK((u00 - outer({ct, st, 0.0})).norm() < 1e-15);

  const Eigen::Matrix3d u11 = upsilon(1, 1, theta, kPi / 2.0, rho);
  CHECK((u11 - outer({-st, ct, rho})).norm() < 1e-14);

  // phi rotates only the squared cosines on the diagonal.
  const Eigen::Matrix3d u10 = upsilon(1, 0, theta, 0.3, rho);
  CHECK(u10(0, 0) == doctest::Approx(std::cos(theta + 0.3) *
                                     std::cos(theta + 0.3)));
  CHECK(u10(0, 1) == doctest::Approx(-st * ct));
  CHECK(u10(0, 2) == doctest::Approx(rho * st));
  CHECK(u10(1, 2) == doctest::Approx(-rho * ct));
  CHECK(u10(2, 2) == doctest::Approx(rho * rho));
  CHECK((u10 - u10.transpose()).norm() == 0.0);
}

TEST_CASE("direct path terms reproduce the dense single path information") {
  std::mt19937_64 rng(21);
  ScenarioDrawOptions options;
  options.max_reflectors = 0;
  for (int i = 0; i < 100; ++i) {
    const Scenario s = random_scenario(rng, options);
    const PathInfo info = random_path_info(rng);
    const DirectGain gain = direct_gain_terms(info, path_geometry(s, 0));
    const Eigen::Matrix3d dense = dense_efim(s, {info});
    CHECK(rel_diff(gain.matrix, dense) < 1e-10);

    Eigen::Matrix3d rebuilt = Eigen::Matrix3d::Zero();
    for (const RankOneTerm& term : gain.terms) {
      CHECK(term.v.norm() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(term.lam > 0.0);
      rebuilt += term.lam * outer(term.v);
    }
    CHECK(rel_diff(rebuilt, gain.matrix) < 1e-12);
  }
}

TEST_CASE("direct path closed forms match hand values") {
  Scenario s;
  s.mobile.position = {3.0, 4.0};  // range 5, world bearing atan2(4, 3)
  const PathGeometry g = path_geometry(s, 0);
  const PathInfo info = info_with(1e-18, 1e-6, 2e-6);
  const DirectGain gain = direct_gain_terms(info, g);
  const double d = 5.0;
  const double theta = std::atan2(4.0, 3.0);

  const RankOneTerm& delay = gain.terms[0];
  CHECK(delay.source == TermSource::direct_delay);
  CHECK(delay.lam ==
        doctest::Approx(1.0 / (1e-18 * kSpeedOfLight * kSpeedOfLight))
            .epsilon(1e-12));
  CHECK(delay.v.x() == doctest::Approx(std::cos(theta)).epsilon(1e-12));
  CHECK(delay.v.y() == doctest::Approx(std::sin(theta)).epsilon(1e-12));
  CHECK(delay.v.z() == 0.0);

  const RankOneTerm& departure = gain.terms[1];
  CHECK(departure.source == TermSource::direct_aod);
  CHECK(departure.lam == doctest::Approx(1.0 / (1e-6 * d * d)).epsilon(1e-12));
  // Tangential direction, up to the sign convention.
  CHECK(std::abs(departure.v.dot(
            Eigen::Vector3d(-std::sin(theta), std::cos(theta), 0.0))) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(departure.v.z() == 0.0);

  const RankOneTerm& arrival = gain.terms[2];
  CHECK(arrival.source == TermSource::direct_aoa);
  CHECK(arrival.lam ==
        doctest::Approx((1.0 + d * d) / (2e-6 * d * d)).epsilon(1e-12));
  // Unit vector along [sin/d, -cos/d, 1].
  const Eigen::Vector3d dir =
      Eigen::Vector3d(std::sin(theta) / d, -std::cos(theta) / d, 1.0)
          .normalized();
  CHECK((arrival.v - dir).norm() < 1e-12);
}

TEST_CASE("reflected gross gain matches the dense path information") {
  std::mt19937_64 rng(22);
  ScenarioDrawOptions options;
  options.min_reflectors = 1;
  options.max_reflectors = 1;
  for (int i = 0; i < 100; ++i) {
    const Scenario s = random_scenario(rng, options);
    const PathInfo info = random_path_info(rng);
    const ReflectedGain gain = reflected_gain(info, path_geometry(s, 1));
    const DensePathSplit split = dense_path_split(s, 1, info);
    CHECK(rel_diff(gain.matrix, split.gain) < 1e-10);
    CHECK(rel_diff(gain.matrix, gain.toa.lam * outer(gain.toa.v) +
                                    gain.aoa.lam * outer(gain.aoa.v)) <
          1e-12);
  }
}

TEST_CASE("penalty weights solve the incidence normal equations") {
  std::mt19937_64 rng(23);
  ScenarioDrawOptions options;
  options.min_reflectors = 1;
  options.max_reflectors = 1;
  for (int i = 0; i < 200; ++i) {
    const Scenario s = random_scenario(rng, options);
    const PathInfo info = random_path_info(rng);
    const PathGeometry g = path_geometry(s, 1);
    const LossWeights w = reflected_loss_weights(info, g);

    // [[a, b], [b, d]] is the incidence block of the dense information.
    Scenario only = s;
    only.has_los = false;
    const Eigen::MatrixXd t =
        assemble_transform(transformation_matrix(only));
    Eigen::Matrix3d channel = Eigen::Matrix3d::Zero();
    channel(0, 0) = 1.0 / info.sigma2_tau;
    channel(1, 1) = 1.0 / info.sigma2_aod;
    channel(2, 2) = 1.0 / info.sigma2_aoa;
    const Eigen::MatrixXd dense5 = t * channel * t.transpose();
    const double block_scale = std::max(dense5(3, 3), dense5(4, 4));
    CHECK(std::abs(w.a - dense5(3, 3)) <= 1e-10 * block_scale);
    CHECK(std::abs(w.b - dense5(3, 4)) <= 1e-10 * block_scale);
    CHECK(std::abs(w.d - dense5(4, 4)) <= 1e-10 * block_scale);
    CHECK(w.a * w.d - w.b * w.b > 0.0);

    // The net weights complement the subtracted ones. The difference
    // u - w_toa cancels catastrophically when the product form is tiny, so
    // compare on the scale of the uncancelled inputs.
    const double u = 1.0 / (info.sigma2_tau * kSpeedOfLight * kSpeedOfLight);
    const double vr = 1.0 / (info.sigma2_aoa * g.dist_rx * g.dist_rx);
    CHECK(std::abs(w.eps - (u - w.w_toa)) <= 1e-12 * u);
    CHECK(std::abs(w.beta - (vr - w.w_aoa)) <= 1e-12 * vr);

    // eps * beta == gamma^2 holds identically in product form.
    const double scale =
        std::max({std::abs(w.eps * w.beta), w.gamma * w.gamma, 1e-300});
    CHECK(std::abs(w.eps * w.beta - w.gamma * w.gamma) <= 1e-12 * scale);

    // The penalty matrix equals the dense marginalization correction.
    const Eigen::Matrix3d loss = reflected_loss_matrix(w, g);
    const DensePathSplit split = dense_path_split(s, 1, info);
    CHECK(rel_diff(loss, split.loss) < 1e-9);

    // Marginalizing can only remove information; any negative eigenvalue of
    // the remainder is subtraction rounding on the gross gain scale.
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(split.gain - loss);
    CHECK(es.eigenvalues().minCoeff() >= -1e-12 * split.gain.norm());
  }
}

TEST_CASE("net reflected term is the rank one remainder of the penalty") {
  std::mt19937_64 rng(24);
  ScenarioDrawOptions options;
  options.min_reflectors = 1;
  options.max_reflectors = 1;
  for (int i = 0; i < 200; ++i) {
    const Scenario s = random_scenario(rng, options);
    const PathInfo info = random_path_info(rng);
    const PathGeometry g = path_geometry(s, 1);
    const RankOneTerm net = net_reflected_term(info, g);
    CHECK(net.lam > 0.0);
    CHECK(net.v.norm() == doctest::Approx(1.0).epsilon(1e-12));

    // Dense remainder agreement, measured against the gross gain the
    // subtraction started from: that is the scale rounding noise lives on.
    const DensePathSplit split = dense_path_split(s, 1, info);
    const Eigen::Matrix3d remainder = split.gain - split.loss;
    const double gain_scale = std::max(split.gain.norm(), 1e-300);
    CHECK((net.lam * outer(net.v) - remainder).norm() <= 1e-10 * gain_scale);

    // Rank one is a property of the closed-form weights, so test it on the
    // assembly built from them; the dense subtraction would only bury the
    // small eigenvalues under its own rounding noise.
    const LossWeights w = reflected_loss_weights(info, g);
    const Eigen::Matrix3d stable =
        w.eps * upsilon(0, 0, g.bearing_rx, 0.0, 0.0) +
        w.beta * upsilon(1, 1, g.bearing_rx, 0.5 * kPi, g.dist_rx) +
        w.gamma * rotation_coupling_block(g.bearing_rx, g.dist_rx);
    CHECK(rel_diff(net.lam * outer(net.v), stable) < 1e-9);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(stable);
    Eigen::Vector3d evals = es.eigenvalues().cwiseAbs();
    int top = 0;
    evals.maxCoeff(&top);
    for (int j = 0; j < 3; ++j) {
      if (j != top) CHECK(evals(j) / evals(top) < 1e-10);
    }
    const double align = std::abs(es.eigenvectors().col(top).dot(net.v));
    CHECK(align > 1.0 - 1e-10);
  }
}

TEST_CASE("projected gains split the magnitude between shift and turn") {
  std::mt19937_64 rng(25);
  ScenarioDrawOptions options;
  options.min_reflectors = 1;
  options.max_reflectors = 1;
  for (int i = 0; i < 100; ++i) {
    const Scenario s = random_scenario(rng, options);
    const PathInfo info = random_path_info(rng);
    const PathGeometry g = path_geometry(s, 1);
    const RankOneTerm net = net_reflected_term(info, g);
    const ProjectedGains p = projected_gains(net);
    CHECK(p.lam_xy + p.lam_alpha == doctest::Approx(net.lam).epsilon(1e-12));

    // Independent denominator form of the two projections.
    const double mismatch = wrap_angle(g.bearing_rx - g.bearing_tx);
    const double cd = std::cos(mismatch);
    const double rp = g.dist_rx;
    const double rq = g.dist_tx;
    const double denom =
        (1.0 - cd) * kSpeedOfLight * kSpeedOfLight * info.sigma2_tau +
        (1.0 + cd) * rq * rq * info.sigma2_aod +
        (1.0 + cd) * rp * rp * info.sigma2_aoa;
    CHECK(p.lam_xy == doctest::Approx(2.0 / denom).epsilon(1e-9));
    CHECK(p.lam_alpha ==
          doctest::Approx(rp * rp * (1.0 + cd) / denom).epsilon(1e-9));
  }
}

TEST_CASE("full decomposition matches the dense schur complement") {
  std::mt19937_64 rng(26);
  for (int i = 0; i < 200; ++i) {
    const Scenario s = random_scenario(rng);
    const std::vector<PathInfo> infos = random_path_infos(rng, s.n_paths());
    const EfimDecomposition dec = decompose(s, infos);
    const Eigen::Matrix3d dense = dense_efim(s, infos);
    CHECK(rel_diff(dec.efim, dense) < 1e-9);

    // Internal consistency: terms rebuild the matrices they summarize.
    Eigen::Matrix3d direct = Eigen::Matrix3d::Zero();
    for (const RankOneTerm& t : dec.direct_terms) {
      direct += t.lam * outer(t.v);
    }
    CHECK(rel_diff(direct, dec.direct_matrix) < 1e-12);
    Eigen::Matrix3d net = Eigen::Matrix3d::Zero();
    for (const RankOneTerm& t : dec.reflected_terms) {
      CHECK(t.path_index >= 1);
      net += t.lam * outer(t.v);
    }
    CHECK(rel_diff(net, dec.net_matrix) < 1e-9);
    CHECK(rel_diff(dec.efim, dec.direct_matrix + dec.net_matrix) < 1e-12);
    // The gain minus loss route cancels on the gross gain scale.
    const double recon_scale =
        std::max({dec.efim.norm(), dec.gain_matrix.norm(), 1e-300});
    CHECK((dec.efim - (dec.direct_matrix + dec.gain_matrix -
                       dec.loss_matrix)).norm() <= 1e-12 * recon_scale);
  }
}

TEST_CASE("scenes without a direct path decompose to net terms only") {
  std::mt19937_64 rng(27);
  ScenarioDrawOptions options;
  options.with_los = false;
  options.min_reflectors = 2;
  for (int i = 0; i < 50; ++i) {
    const Scenario s = random_scenario(rng, options);
    const std::vector<PathInfo> infos = random_path_infos(rng, s.n_paths());
    const EfimDecomposition dec = decompose(s, infos);
    CHECK(dec.direct_terms.empty());
    CHECK(dec.direct_matrix.norm() == 0.0);
    CHECK(rel_diff(dec.efim, dense_efim(s, infos)) < 1e-9);
  }
}

TEST_CASE("back scatter keeps exactly the delay information") {
  // s on the segment between the end points: the two rays are antiparallel,
  // the normal equations degenerate, and the continuous limit keeps the
  // round trip delay term.
  const Scenario s = collinear_scene(true);
  const PathGeometry g = path_geometry(s, 1);
  const double mismatch = wrap_angle(g.bearing_rx - g.bearing_tx);
  REQUIRE(std::abs(std::abs(mismatch) - kPi) < 1e-12);

  const PathInfo info = info_with(4e-18, 3e-6, 5e-6);
  CHECK_THROWS_AS(reflected_loss_weights(info, g), GeometryError);

  const RankOneTerm net = net_reflected_term(info, g);
  const double u = 1.0 / (4e-18 * kSpeedOfLight * kSpeedOfLight);
  CHECK(net.lam == doctest::Approx(u).epsilon(1e-12));
  // Direction: the mobile side ray, no rotation component.
  CHECK(std::abs(net.v.x()) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(net.v.z() == doctest::Approx(0.0));

  // The exact pseudo-inverse at the corner keeps one more direction than
  // any perturbed geometry would: the angles share the along-ray incidence
  // coordinate and their harmonic mean survives. The library reports the
  // perturbation-stable limit; the dense oracle reports the corner value;
  // the two differ by exactly that jump term.
  const double vt = 1.0 / (3e-6 * g.dist_tx * g.dist_tx);
  const double vr = 1.0 / (5e-6 * g.dist_rx * g.dist_rx);
  const Eigen::Matrix3d jump = vt * vr / (vt + vr) *
      upsilon(1, 1, g.bearing_rx, 0.5 * kPi, g.dist_rx);
  const DensePathSplit split = dense_path_split(s, 1, info);
  const Eigen::Matrix3d remainder = split.gain - split.loss;
  const double gain_scale = split.gain.norm();
  CHECK((remainder - (net.lam * outer(net.v) + jump)).norm() <=
        1e-10 * gain_scale);

  // decompose() takes the fallback branch; against the dense Schur value
  // the whole EFIM differs by the same jump on the reflected path.
  const std::vector<PathInfo> infos = {info_with(1e-18, 1e-6, 1e-6), info};
  const EfimDecomposition dec = decompose(s, infos);
  const Eigen::Matrix3d dense = dense_efim(s, infos);
  CHECK((dense - (dec.efim + jump)).norm() <= 1e-10 * dense.norm());
}

TEST_CASE("forward scatter along the axis stays generic") {
  const Scenario s = collinear_scene(false);
  const PathGeometry g = path_geometry(s, 1);
  REQUIRE(std::abs(wrap_angle(g.bearing_rx - g.bearing_tx)) < 1e-12);

  const PathInfo info = info_with(4e-18, 3e-6, 5e-6);
  // Parallel rays with all parameters alive: weights exist, sine terms die.
  const LossWeights w = reflected_loss_weights(info, g);
  CHECK(w.gamma == doctest::Approx(0.0));
  const RankOneTerm net = net_reflected_term(info, g);
  CHECK(net.zero_cross_coupling);
  const DensePathSplit split = dense_path_split(s, 1, info);
  CHECK(rel_diff(net.lam * outer(net.v), split.gain - split.loss) < 1e-8);
}

TEST_CASE("dead parameter corners agree with the dense pseudo inverse") {
  const Scenario back = collinear_scene(true);
  const Scenario forward = collinear_scene(false);

  SUBCASE("delay only back scatter") {
    // The incidence block is exactly zero, the pseudo-inverse drops it, and
    // no information is lost: the whole round-trip delay survives.
    const PathInfo info = info_with(4e-18, kInf, kInf);
    const PathGeometry g = path_geometry(back, 1);
    const RankOneTerm net = net_reflected_term(info, g);
    const double u = 1.0 / (4e-18 * kSpeedOfLight * kSpeedOfLight);
    CHECK(net.lam == doctest::Approx(u).epsilon(1e-12));
    const DensePathSplit split = dense_path_split(back, 1, info);
    CHECK((net.lam * outer(net.v) - (split.gain - split.loss)).norm() <=
          1e-10 * split.gain.norm());
  }

  SUBCASE("delay and arrival back scatter") {
    // One angle alone cannot form the harmonic-mean jump, so the corner
    // pseudo-inverse and the continuous limit agree.
    const PathInfo info = info_with(4e-18, kInf, 5e-6);
    const PathGeometry g = path_geometry(back, 1);
    const RankOneTerm net = net_reflected_term(info, g);
    const double u = 1.0 / (4e-18 * kSpeedOfLight * kSpeedOfLight);
    CHECK(net.lam == doctest::Approx(u).epsilon(1e-12));
    const DensePathSplit split = dense_path_split(back, 1, info);
    CHECK((net.lam * outer(net.v) - (split.gain - split.loss)).norm() <=
          1e-10 * split.gain.norm());
  }

  SUBCASE("delay and departure back scatter") {
    const PathInfo info = info_with(4e-18, 3e-6, kInf);
    const PathGeometry g = path_geometry(back, 1);
    const RankOneTerm net = net_reflected_term(info, g);
    const double u = 1.0 / (4e-18 * kSpeedOfLight * kSpeedOfLight);
    CHECK(net.lam == doctest::Approx(u).epsilon(1e-12));
    const DensePathSplit split = dense_path_split(back, 1, info);
    CHECK((net.lam * outer(net.v) - (split.gain - split.loss)).norm() <=
          1e-10 * split.gain.norm());
  }

  SUBCASE("angles only back scatter keeps only the corner jump") {
    // Without the delay the continuous limit is zero information, but the
    // exact corner pseudo-inverse keeps the angles' harmonic mean.
    const PathInfo info = info_with(kInf, 3e-6, 5e-6);
    const PathGeometry g = path_geometry(back, 1);
    const RankOneTerm net = net_reflected_term(info, g);
    CHECK(net.lam == 0.0);
    const double vt = 1.0 / (3e-6 * g.dist_tx * g.dist_tx);
    const double vr = 1.0 / (5e-6 * g.dist_rx * g.dist_rx);
    const Eigen::Matrix3d jump = vt * vr / (vt + vr) *
        upsilon(1, 1, g.bearing_rx, 0.5 * kPi, g.dist_rx);
    const DensePathSplit split = dense_path_split(back, 1, info);
    CHECK((split.gain - split.loss - jump).norm() <=
          1e-10 * split.gain.norm());
  }

  SUBCASE("angles only forward scatter keeps the harmonic mean") {
    const PathInfo info = info_with(kInf, 3e-6, 5e-6);
    const PathGeometry g = path_geometry(forward, 1);
    const RankOneTerm net = net_reflected_term(info, g);
    const double vt = 1.0 / (3e-6 * g.dist_tx * g.dist_tx);
    const double vr = 1.0 / (5e-6 * g.dist_rx * g.dist_rx);
    const double harmonic = vt * vr / (vt + vr);
    const double rp = g.dist_rx;
    CHECK(net.lam ==
          doctest::Approx(harmonic * (1.0 + rp * rp)).epsilon(1e-12));
    const DensePathSplit split = dense_path_split(forward, 1, info);
    CHECK(rel_diff(net.lam * outer(net.v), split.gain - split.loss) < 1e-9);
  }

  SUBCASE("a lone departure angle contributes nothing") {
    for (const Scenario* sc : {&back, &forward}) {
      const PathInfo info = info_with(kInf, 3e-6, kInf);
      const PathGeometry g = path_geometry(*sc, 1);
      const RankOneTerm net = net_reflected_term(info, g);
      CHECK(net.lam == 0.0);
      const DensePathSplit split = dense_path_split(*sc, 1, info);
      CHECK((split.gain - split.loss).norm() < 1e-20);
    }
  }

  SUBCASE("generic geometry with one dead parameter") {
    std::mt19937_64 rng(28);
    ScenarioDrawOptions options;
    options.min_reflectors = 1;
    options.max_reflectors = 1;
    for (int i = 0; i < 100; ++i) {
      const Scenario s = random_scenario(rng, options);
      PathInfo info = random_path_info(rng);
      const int kill = static_cast<int>(rng() % 3);
      if (kill == 0) info.sigma2_tau = kInf;
      if (kill == 1) info.sigma2_aod = kInf;
      if (kill == 2) info.sigma2_aoa = kInf;
      const PathGeometry g = path_geometry(s, 1);
      const RankOneTerm net = net_reflected_term(info, g);
      const DensePathSplit split = dense_path_split(s, 1, info);
      const Eigen::Matrix3d remainder = split.gain - split.loss;
      const double scale = std::max(split.gain.norm(), 1e-300);
      CHECK((net.lam * outer(net.v) - remainder).norm() <= 1e-10 * scale);
    }
  }
}

TEST_CASE("the net term converges to the corner limit as rays align") {
  // Lift the reflector off the axis by h and shrink h: the closed form
  // approaches the delay-only corner value quadratically, and off the
  // corner it agrees with the dense pseudo-inverse the whole way down.
  const PathInfo info = info_with(4e-18, 3e-6, 5e-6);
  const double u = 1.0 / (4e-18 * kSpeedOfLight * kSpeedOfLight);
  double prev_gap = kInf;
  for (double h : {1e-2, 1e-3, 1e-4, 1e-5}) {
    Scenario s = collinear_scene(true);
    s.incidence_points[0].y() = h;
    const PathGeometry g = path_geometry(s, 1);
    const RankOneTerm net = net_reflected_term(info, g);
    const double gap = std::abs(net.lam - u) / u;
    CHECK(gap < prev_gap);
    prev_gap = gap;
    const DensePathSplit split = dense_path_split(s, 1, info);
    CHECK((net.lam * outer(net.v) - (split.gain - split.loss)).norm() <=
          1e-9 * split.gain.norm());
  }
  CHECK(prev_gap < 1e-8);
}

TEST_CASE("degenerate weights throw while the net term survives") {
  const Scenario s = collinear_scene(true);
  const PathGeometry g = path_geometry(s, 1);
  // Only the delay is informative: the 2 x 2 normal equations are rank one
  // at best, and antiparallel rays make them vanish outright.
  CHECK_THROWS_WITH_AS(
      reflected_loss_weights(info_with(1e-18, kInf, kInf), g),
      doctest::Contains("degenerate"), GeometryError);
  CHECK_NOTHROW(net_reflected_term(info_with(1e-18, kInf, kInf), g));
}

TEST_CASE("vanishing variances cap the magnitude and raise the flag") {
  Scenario s;
  s.mobile.position = {3.0, 4.0};
  s.incidence_points = {{1.0, 3.0}};
  const PathGeometry g = path_geometry(s, 1);
  const PathInfo info = info_with(1e-60, 1e-40, 1e-40);
  const RankOneTerm net = net_reflected_term(info, g);
  CHECK(net.magnitude_capped);
  CHECK(net.lam == doctest::Approx(1e18));
}

TEST_CASE("distant reflectors lose their translation component") {
  // With the incidence point moved 1000 m out, the net direction turns into
  // almost pure rotation information.
  Scenario s;
  s.mobile.position = {3.0, 4.0};
  const Eigen::Vector2d dir(0.6, -0.8);
  s.incidence_points = {s.mobile.position + 1000.0 * dir};
  const PathInfo info = info_with(1e-18, 1e-6, 1e-6);
  const RankOneTerm net = net_reflected_term(info, path_geometry(s, 1));
  CHECK(std::abs(net.v.x()) < 2e-3);
  CHECK(std::abs(net.v.y()) < 2e-3);
  CHECK(net.v.z() > 1.0 - 1e-5);
}

TEST_CASE("an uninformative departure angle kills the net term") {
  Scenario s;
  s.mobile.position = {3.0, 4.0};
  s.incidence_points = {{1.0, 3.0}};
  PathInfo info = info_with(1e-18, 1e-6, 1e-6);
  const PathGeometry g = path_geometry(s, 1);
  const double base = net_reflected_term(info, g).lam;
  CHECK(base > 0.0);
  info.sigma2_aod *= 1e12;
  const double starved = net_reflected_term(info, g).lam;
  CHECK(starved < 1e-6 * base);
}

}  // TEST_SUITE("decomposition")
