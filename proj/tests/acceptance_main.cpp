// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the locfim authors
//
// Acceptance gate: seven end-to-end criteria, one pass/fail line each.
// The exit code is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "locfim/bounds.hpp"
#include "locfim/channel_fim.hpp"
#include "locfim/decomposition.hpp"
#include "locfim/geometry.hpp"
#include "locfim/scenario_io.hpp"
#include "locfim/signal.hpp"
#include "locfim/sweep.hpp"
#include "oracle_helpers.hpp"

using namespace locfim;
using namespace locfim::testing;

namespace {

constexpr double kPi = std::numbers::pi;

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string note;  // measured values, or the reason for failure
};

void fail(Outcome* out, const std::string& why) {
  out->pass = false;
  if (!out->note.empty()) out->note += "; ";
  out->note += why;
}

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string scenario_path(const char* name) {
  return std::string(LOCFIM_SCENARIO_DIR) + "/" + name;
}

// 1. Closed-form location Jacobian vs central finite differences.
Outcome jacobian_vs_differences() {
  Outcome out;
  std::mt19937_64 rng(1001);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Scenario s = random_scenario(rng);
    const Eigen::MatrixXd closed =
        assemble_transform(transformation_matrix(s));
    const Eigen::MatrixXd fd = fd_geometry_jacobian(s);
    for (int r = 0; r < closed.rows(); ++r) {
      for (int c = 0; c < closed.cols(); ++c) {
        const double scale =
            std::max(std::abs(closed(r, c)), std::abs(fd(r, c)));
        const double err = std::abs(closed(r, c) - fd(r, c));
        if (err > 1e-9 + 1e-5 * scale) {
          fail(&out, "entry (" + std::to_string(r) + "," + std::to_string(c) +
                         ") off by " + num(err) + " against scale " +
                         num(scale));
        }
        if (scale > 1e-6) worst = std::max(worst, err / scale);
      }
    }
  }
  out.note = "worst relative entry error " + num(worst);
  return out;
}

// 2. Exact channel information vs the time-domain Monte-Carlo estimate.
Outcome channel_information_vs_monte_carlo() {
  Outcome out;
  const SmallInstance inst = small_instance();
  const ChannelFim exact = fim_channel_exact(inst.scenario, inst.config,
                                             inst.beamformer, inst.params);
  const Eigen::MatrixXd mc = mc_fim_oracle(inst, 100000, 7);
  const double rel = (mc - exact.matrix).norm() / exact.matrix.norm();
  out.note = "relative frobenius error " + num(rel) + " at 1e5 draws";
  if (!(rel < 0.01)) fail(&out, "exceeds 1%");
  return out;
}

// 3. Decomposed pose information vs the dense marginalization, plus the
// rank-one structure of every net bounce term.
Outcome closed_form_vs_dense() {
  Outcome out;
  std::mt19937_64 rng(99);
  double worst_efim = 0.0, worst_rank = 0.0, worst_angle = 0.0;
  double worst_lam = 0.0, worst_identity = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Scenario s = random_scenario(rng);
    const std::vector<PathInfo> infos = random_path_infos(rng, s.n_paths());
    const EfimDecomposition dec = decompose(s, infos);
    const Eigen::Matrix3d dense = dense_efim(s, infos);
    const double rel = (dec.efim - dense).norm() /
                       std::max(dec.efim.norm(), dense.norm());
    worst_efim = std::max(worst_efim, rel);

    for (const RankOneTerm& t : dec.reflected_terms) {
      const PathGeometry g = path_geometry(s, t.path_index);
      const PathInfo& info = infos[(s.has_los ? 0 : -1) + t.path_index];
      const LossWeights w = reflected_loss_weights(info, g);

      // Net term assembled from the closed-form weights.
      const Eigen::Matrix3d net =
          w.eps * upsilon(0, 0, g.bearing_rx, 0.0, 0.0) +
          w.beta * upsilon(1, 1, g.bearing_rx, 0.5 * kPi, g.dist_rx) +
          w.gamma * rotation_coupling_block(g.bearing_rx, g.dist_rx);
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(net);
      Eigen::Vector3d evals = es.eigenvalues().cwiseAbs();
      int top = 0;
      evals.maxCoeff(&top);
      for (int j = 0; j < 3; ++j) {
        if (j != top) {
          worst_rank = std::max(worst_rank, evals(j) / evals(top));
        }
      }
      worst_angle = std::max(
          worst_angle, 1.0 - std::abs(es.eigenvectors().col(top).dot(t.v)));
      worst_lam = std::max(
          worst_lam, std::abs(es.eigenvalues()(top) - t.lam) / t.lam);
      worst_identity = std::max(
          worst_identity, std::abs(w.eps * w.beta - w.gamma * w.gamma) /
                              std::max(std::abs(w.eps * w.beta), 1e-300));
    }
  }
  out.note = "worst: efim " + num(worst_efim) + ", second eigenvalue " +
             num(worst_rank) + ", eigenvector defect " + num(worst_angle) +
             ", weight identity " + num(worst_identity);
  if (!(worst_efim < 1e-9)) fail(&out, "dense disagreement above 1e-9");
  if (!(worst_rank < 1e-10)) fail(&out, "net term not rank one");
  if (!(worst_angle < 1e-10)) fail(&out, "eigenvector mismatch");
  if (!(worst_lam < 1e-9)) fail(&out, "eigenvalue mismatch");
  if (!(worst_identity < 1e-12)) fail(&out, "weight identity broken");
  return out;
}

// 4. Every net bounce gain is positive, and adding a bounce never worsens
// the position or orientation bound.
Outcome positivity_and_monotonicity() {
  Outcome out;
  std::mt19937_64 rng(204);
  ScenarioDrawOptions draw;
  draw.min_reflectors = 1;
  for (int i = 0; i < 1000; ++i) {
    const Scenario s = random_scenario(rng, draw);
    const std::vector<PathInfo> infos = random_path_infos(rng, s.n_paths());
    const EfimDecomposition dec = decompose(s, infos);
    for (const RankOneTerm& t : dec.reflected_terms) {
      if (!(t.lam > 0.0)) {
        fail(&out, "nonpositive net gain " + num(t.lam));
      }
    }
  }

  SignalConfig config;
  config.symbol_energy_j = 8e-12;
  config.noise_psd_w_hz = 1e-20;
  const double wavelength = kSpeedOfLight / config.carrier_hz;
  std::uniform_real_distribution<double> coord(-10.0, 15.0);
  double worst_increase = 0.0;
  int done = 0;
  ScenarioDrawOptions base_draw;
  base_draw.max_reflectors = 2;
  while (done < 500) {
    Scenario base = random_scenario(rng, base_draw);
    base.anchor.element_offsets = half_wavelength_ula(16, wavelength);
    base.mobile.element_offsets = half_wavelength_ula(16, wavelength);
    const Eigen::Vector2d cand(coord(rng), coord(rng));
    bool clear = (cand - base.anchor.position).norm() > 0.5 &&
                 (cand - base.mobile.position).norm() > 0.5;
    for (const Eigen::Vector2d& existing : base.incidence_points) {
      clear = clear && (cand - existing).norm() > 0.5;
    }
    if (!clear) continue;
    Scenario augmented = base;
    augmented.incidence_points.push_back(cand);

    PipelineOptions options;
    options.seed = 11 + done;
    options.fast = true;
    const BoundReport before = evaluate_scenario(base, config, options);
    const BoundReport after = evaluate_scenario(augmented, config, options);
    worst_increase = std::max({worst_increase,
                               after.peb / before.peb - 1.0,
                               after.oeb / before.oeb - 1.0});
    ++done;
  }
  out.note = "1000 scenes all positive; worst relative bound increase over "
             "500 augmentations " + num(worst_increase);
  if (!(worst_increase <= 1e-10)) fail(&out, "a bounce worsened a bound");
  return out;
}

// 5. Reflector-placement sweep on the demo scene: improvement window for
// the 25-element anchor, and strict growth with a 150-element anchor.
Outcome reflector_placement_sweep() {
  Outcome out;
  ScenarioDoc doc = load_scenario_file(scenario_path("sweep_template.json"));
  PipelineOptions options;
  options.seed = doc.seed;
  options.fast = true;

  const SweepResult small = sweep_incidence_grid(
      doc.scenario, doc.config, options, doc.sweep_x, doc.sweep_y);

  const double wavelength = kSpeedOfLight / doc.config.carrier_hz;
  ScenarioDoc wide = doc;
  wide.scenario.anchor.element_offsets =
      half_wavelength_ula(150, wavelength);
  const SweepResult large = sweep_incidence_grid(
      wide.scenario, wide.config, options, doc.sweep_x, doc.sweep_y);

  const double gain_small = 100.0 * small.delta_peb_stats.max;
  const double gain_large = 100.0 * large.delta_peb_stats.max;
  out.note = "max bound improvement " + num(gain_small) +
             "% with 25 elements (window [10%, 40%]), " + num(gain_large) +
             "% with 150; max translation gains " +
             num(small.lam_xy_stats.max) + " vs " +
             num(large.lam_xy_stats.max);
  if (!(gain_small >= 10.0 && gain_small <= 40.0)) {
    fail(&out, "25-element improvement outside the window");
  }
  if (!(large.lam_xy_stats.max > small.lam_xy_stats.max)) {
    fail(&out, "150-element translation gain not larger");
  }
  if (!(gain_large > gain_small)) {
    fail(&out, "150-element improvement not larger");
  }
  return out;
}

// 6. Direct-path-only and bounce-only scenes both yield full-rank pose
// information, a decade-ish apart in position bound.
Outcome direct_vs_bounce_only() {
  Outcome out;
  PipelineOptions options;

  const ScenarioDoc los = load_scenario_file(scenario_path("baseline_los.json"));
  options.seed = los.seed;
  const BoundReport a = evaluate_scenario(los.scenario, los.config, options);

  const ScenarioDoc nlos = load_scenario_file(scenario_path("nlos_only.json"));
  options.seed = nlos.seed;
  const BoundReport b = evaluate_scenario(nlos.scenario, nlos.config, options);

  const double ratio = b.peb / a.peb;
  out.note = "direct rank " + std::to_string(a.efim_rank) + " peb " +
             num(a.peb) + " m, bounce-only rank " +
             std::to_string(b.efim_rank) + " peb " + num(b.peb) +
             " m, ratio " + num(ratio);
  if (a.efim_rank != 3 || !std::isfinite(a.peb)) {
    fail(&out, "direct-only scene not full rank");
  }
  if (b.efim_rank != 3 || !std::isfinite(b.peb)) {
    fail(&out, "bounce-only scene not full rank");
  }
  if (!(ratio >= 3.0 && ratio <= 30.0)) fail(&out, "ratio outside [3, 30]");
  return out;
}

// 7. Limits: starving the departure angle kills a bounce's net gain, and a
// kilometre-distant reflector informs only the heading.
Outcome limit_behaviors() {
  Outcome out;
  const ScenarioDoc doc = load_scenario_file(scenario_path("three_scatterers.json"));
  PipelineOptions options;
  options.seed = doc.seed;
  const ScenarioEvaluation eval =
      evaluate_scenario_full(doc.scenario, doc.config, options);

  // Path 1 is the first bounce; starve its departure angle.
  const double base_lam = eval.decomposition.reflected_terms[0].lam;
  PathInfo starved = eval.infos[1];
  starved.sigma2_aod *= 1e12;
  const double lam = net_reflected_term(
      starved, path_geometry(doc.scenario, 1), options.c).lam;
  out.note = "starved net gain " + num(lam) + " (from " + num(base_lam) + ")";
  if (!(lam < 1e-6)) fail(&out, "net gain not driven below 1e-6");

  // A distant reflector: keep the same waveform, park one bounce 1 km out.
  Scenario far = doc.scenario;
  far.incidence_points = {doc.scenario.mobile.position +
                          1000.0 * Eigen::Vector2d(std::cos(0.3),
                                                   std::sin(0.3))};
  const ScenarioEvaluation far_eval =
      evaluate_scenario_full(far, doc.config, options);
  const Eigen::Vector3d v = far_eval.decomposition.reflected_terms[0].v;
  out.note += "; distant direction (" + num(std::abs(v.x())) + ", " +
              num(std::abs(v.y())) + ", " + num(std::abs(v.z())) + ")";
  if (!(std::abs(v.x()) < 2e-3 && std::abs(v.y()) < 2e-3)) {
    fail(&out, "translation components not suppressed");
  }
  return out;
}

struct Criterion {
  const char* name;
  Outcome (*run)();
  double budget_s;  // 0: no stated budget
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {"jacobian vs central differences", jacobian_vs_differences, 5.0},
      {"channel information vs monte carlo", channel_information_vs_monte_carlo,
       120.0},
      {"closed form vs dense marginalization", closed_form_vs_dense, 30.0},
      {"positivity and monotonicity", positivity_and_monotonicity, 0.0},
      {"reflector placement sweep", reflector_placement_sweep, 600.0},
      {"direct vs bounce-only localization", direct_vs_bounce_only, 0.0},
      {"limit behaviors", limit_behaviors, 0.0},
  };

  int failures = 0;
  int index = 0;
  for (const Criterion& criterion : criteria) {
    ++index;
    const auto t0 = Clock::now();
    Outcome out;
    try {
      out = criterion.run();
    } catch (const std::exception& e) {
      out.pass = false;
      out.note = std::string("exception: ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(Clock::now() - t0).count();
    if (criterion.budget_s > 0.0 && elapsed > criterion.budget_s) {
      fail(&out, "over the " + num(criterion.budget_s) + " s budget");
    }
    std::printf("criterion %d (%s): %s (%.2f s)%s%s\n", index, criterion.name,
                out.pass ? "PASS" : "FAIL", elapsed,
                out.note.empty() ? "" : " - ", out.note.c_str());
    if (!out.pass) ++failures;
  }
  if (failures == 0) {
    std::printf("all %d criteria passed\n", index);
  } else {
    std::printf("%d of %d criteria failed\n", failures, index);
  }
  return failures;
}
