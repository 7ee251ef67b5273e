// Copyright 2026 stologistic project contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "stologistic/ensemble.hpp"

using namespace stologistic;

namespace {

EnsembleConfig fig1_config(std::int64_t n_paths, double dt, std::int64_t steps) {
  EnsembleConfig cfg(ModelParams(1.5, 1.0, 0.25), 2.3, SimGrid(dt, steps));
  cfg.n_paths = n_paths;
  cfg.master_seed = 42;
  cfg.burn_in = 0.0;
  return cfg;
}

Path constant_path(double level, double dt, std::int64_t n) {
  Path path;
  for (std::int64_t k = 0; k <= n; ++k) {
    path.times.push_back(dt * double(k));
    path.states.push_back(level);
  }
  return path;
}

}  // namespace

TEST_CASE("config validation") {
  EnsembleConfig cfg(ModelParams(1.5, 1.0, 0.25), 2.3, SimGrid(0.01, 100));
  cfg.n_paths = 10;
  CHECK_NOTHROW(cfg.validate());

  auto bad = cfg;
  bad.n_paths = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.burn_in = 1.0;  // == horizon
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.extinction_threshold = 1e-12;  // below absorb_eps
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.dynkin_checkpoints = {0.505};  // not a grid time
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.scheme = Scheme::Reference;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("noise-free ensemble at the equilibrium is exactly flat") {
  EnsembleConfig cfg(ModelParams(1.5, 1.0, 0.0), 1.5, SimGrid(1e-3, 2000));
  cfg.n_paths = 50;
  cfg.burn_in = 1.0;
  cfg.min_surviving = 10;
  cfg.dynkin_checkpoints = {0.0, 1.0, 2.0};
  const EnsembleStats stats = run_ensemble(cfg);
  for (double m : stats.mean_traj) CHECK(m == 1.5);
  for (double v : stats.var_traj) CHECK(v == 0.0);
  CHECK(stats.band_occupancy == 1.0);
  CHECK(stats.mean_in_band_fraction == 0.0);  // band degenerates to {x*}
  CHECK(stats.extinct_fraction == 0.0);
  CHECK(stats.time_avg_state == 1.5);
  CHECK(stats.time_avg_state_se == 0.0);
  for (const DynkinCheckpoint& cp : stats.dynkin) {
    CHECK(cp.residual == 0.0);
    CHECK(cp.surviving == 50);
    CHECK(cp.excluded == 0);
  }
}

TEST_CASE("band occupancy conventions") {
  const Band band{1.28, 1.72};
  CHECK(band_occupancy(constant_path(1.5, 0.1, 100), band, 0.0) == 1.0);
  CHECK(band_occupancy(constant_path(3.44, 0.1, 100), band, 0.0) == 0.0);
  // endpoints count as inside (closed interval)
  CHECK(band_occupancy(constant_path(1.28, 0.1, 100), band, 0.0) == 1.0);
  // an absorbed path sits at 0, which is the boundary when x1 == 0
  const Band extinct_band{0.0, 2.73};
  CHECK(band_occupancy(constant_path(0.0, 0.1, 100), extinct_band, 0.0) == 1.0);
  CHECK_THROWS_AS(band_occupancy(constant_path(1.0, 0.1, 10), band, 2.0),
                  std::invalid_argument);
}

TEST_CASE("extinction statistics") {
  // deterministic persistence: never crosses the threshold
  std::vector<Path> flat = {constant_path(1.5, 0.1, 50),
                            constant_path(2.0, 0.1, 50)};
  const ExtinctionStats none = extinction_stats(flat, 1e-6);
  CHECK(none.extinct_fraction == 0.0);
  CHECK(none.first_passage_times.empty());

  Path dying = constant_path(1.0, 0.1, 50);
  for (std::size_t k = 30; k < dying.states.size(); ++k) dying.states[k] = 0.0;
  flat.push_back(dying);
  const ExtinctionStats some = extinction_stats(flat, 1e-6);
  CHECK(some.extinct_fraction == doctest::Approx(1.0 / 3.0));
  REQUIRE(some.first_passage_times.size() == 1);
  CHECK(some.first_passage_times[0] == doctest::Approx(3.0));
}

TEST_CASE("extinction regime: most paths absorb and the fraction grows in T") {
  EnsembleConfig cfg(ModelParams(1.0, 1.0, 2.45), 1.75, SimGrid(1e-3, 2000));
  cfg.n_paths = 200;
  cfg.master_seed = 42;
  double prev = -1.0;
  for (std::int64_t steps : {2000, 5000, 10000}) {
    EnsembleConfig run = cfg;
    run.grid = SimGrid(1e-3, steps);
    const EnsembleStats stats = run_ensemble(run);
    CHECK(stats.extinct_fraction >= prev);
    prev = stats.extinct_fraction;
  }
  CHECK(prev > 0.5);  // by T = 10 extinction dominates
}

TEST_CASE("dynkin residual is zero at t = 0 and small at later checkpoints") {
  EnsembleConfig cfg = fig1_config(3000, 2e-3, 1000);  // T = 2
  const std::vector<double> checkpoints = {0.0, 0.5, 1.0, 2.0};
  const auto result = dynkin_residual(cfg, checkpoints);
  REQUIRE(result.size() == checkpoints.size());
  CHECK(std::abs(result[0].residual) <= 1e-12);
  const double sigma_sq = 0.25 * 0.25;
  for (std::size_t c = 1; c < result.size(); ++c) {
    const DynkinCheckpoint& cp = result[c];
    CHECK(cp.surviving == 3000);
    const double tol = 3.0 * cp.mean_v_se + 0.05 * sigma_sq * cp.t;
    CHECK(std::abs(cp.residual) <= tol);
  }
}

TEST_CASE("dynkin excludes absorbed paths and signals starvation") {
  EnsembleConfig cfg(ModelParams(1.0, 1.0, 2.45), 1.75, SimGrid(1e-3, 20000));
  cfg.n_paths = 200;
  cfg.master_seed = 7;
  cfg.min_surviving = 10;
  const auto result = dynkin_residual(cfg, std::vector<double>{5.0});
  REQUIRE(result.size() == 1);
  CHECK(result[0].excluded > 0);
  CHECK(result[0].surviving + result[0].excluded == 200);

  cfg.min_surviving = 100;
  CHECK_THROWS_AS(dynkin_residual(cfg, std::vector<double>{20.0}),
                  InsufficientSurvivorsError);
}

TEST_CASE("stationary mean prediction") {
  CHECK(stationary_mean_prediction(ModelParams(1.5, 1.0, 0.25)) == 1.46875);
  // vanishing-noise limit approaches the carrying capacity
  CHECK(stationary_mean_prediction(ModelParams(1.5, 1.0, 1e-8)) ==
        doctest::Approx(1.5).epsilon(1e-10));
  CHECK_THROWS_AS(stationary_mean_prediction(ModelParams(1.0, 1.0, 2.45)),
                  std::invalid_argument);
  CHECK_THROWS_AS(stationary_mean_prediction(ModelParams(1.0, 1.0, 0.0)),
                  std::invalid_argument);

  // the prediction always lies strictly inside the band
  for (double sigma : {0.05, 0.25, 0.8, 1.2, 1.6}) {
    const ModelParams p(1.5, 1.0, sigma);
    const Band band = band_endpoints(p);
    const double predicted = stationary_mean_prediction(p);
    CHECK(predicted > band.x1);
    CHECK(predicted < band.x2);
  }
}

TEST_CASE("time average approaches the stationary mean") {
  EnsembleConfig cfg(ModelParams(1.5, 1.0, 0.25), 2.3, SimGrid(1e-3, 20000));
  cfg.n_paths = 300;
  cfg.master_seed = 42;
  cfg.burn_in = 10.0;
  const StationaryCheck check = stationary_mean_check(cfg);
  CHECK(check.predicted == 1.46875);
  CHECK(std::abs(check.time_avg_state - check.predicted) <
        0.02 * check.predicted);
}

TEST_CASE("ensemble statistics are bit-identical across thread counts") {
  EnsembleConfig cfg = fig1_config(150, 1e-3, 2000);
  cfg.burn_in = 1.0;
  cfg.dynkin_checkpoints = {0.5, 2.0};
  cfg.n_threads = 1;
  const EnsembleStats one = run_ensemble(cfg);
  for (int threads : {2, 3, 7}) {
    cfg.n_threads = threads;
    const EnsembleStats many = run_ensemble(cfg);
    CHECK(many.mean_traj == one.mean_traj);
    CHECK(many.var_traj == one.var_traj);
    CHECK(many.band_occupancy == one.band_occupancy);
    CHECK(many.mean_in_band_fraction == one.mean_in_band_fraction);
    CHECK(many.extinct_fraction == one.extinct_fraction);
    CHECK(many.first_passage_times == one.first_passage_times);
    CHECK(many.time_avg_state == one.time_avg_state);
    CHECK(many.time_avg_state_se == one.time_avg_state_se);
    REQUIRE(many.dynkin.size() == one.dynkin.size());
    for (std::size_t c = 0; c < many.dynkin.size(); ++c) {
      CHECK(many.dynkin[c].residual == one.dynkin[c].residual);
      CHECK(many.dynkin[c].mean_v == one.dynkin[c].mean_v);
    }
  }
}

TEST_CASE("mean lyapunov value drifts monotonically toward the band") {
  // Start above the band: E v must fall (within noise) until the ensemble
  // mean has entered [x1, x2].
  EnsembleConfig cfg = fig1_config(2000, 1e-3, 1000);  // T = 1
  const std::vector<double> checkpoints = {0.0, 0.1, 0.2, 0.3, 0.4,
                                           0.5, 0.6, 0.7};
  cfg.dynkin_checkpoints = checkpoints;
  const EnsembleStats stats = run_ensemble(cfg);
  const Band band = stats.band;

  double entry_time = cfg.grid.horizon();
  for (std::size_t k = 0; k < stats.mean_traj.size(); ++k) {
    if (stats.mean_traj[k] <= band.x2) {
      entry_time = stats.times[k];
      break;
    }
  }
  CHECK(entry_time > checkpoints[1]);  // the approach is not instantaneous
  for (std::size_t c = 0; c + 1 < checkpoints.size(); ++c) {
    if (checkpoints[c + 1] > entry_time) break;
    const auto& now = stats.dynkin[c];
    const auto& next = stats.dynkin[c + 1];
    CHECK(next.mean_v <=
          now.mean_v + 2.0 * (now.mean_v_se + next.mean_v_se));
  }

  // Start below the band: same statement from the other side.
  EnsembleConfig low = cfg;
  low.x0 = 0.65;
  low.dynkin_checkpoints = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
  const EnsembleStats low_stats = run_ensemble(low);
  double low_entry = low.grid.horizon();
  for (std::size_t k = 0; k < low_stats.mean_traj.size(); ++k) {
    if (low_stats.mean_traj[k] >= band.x1) {
      low_entry = low_stats.times[k];
      break;
    }
  }
  for (std::size_t c = 0; c + 1 < low.dynkin_checkpoints.size(); ++c) {
    if (low.dynkin_checkpoints[c + 1] > low_entry) break;
    const auto& now = low_stats.dynkin[c];
    const auto& next = low_stats.dynkin[c + 1];
    CHECK(next.mean_v <=
          now.mean_v + 2.0 * (now.mean_v_se + next.mean_v_se));
  }

  // Start inside (x1, x*): E v must rise (within noise) while the band
  // pushes mass outward.
  EnsembleConfig inside = fig1_config(2000, 1e-3, 2000);  // T = 2
  inside.x0 = 1.35;
  inside.dynkin_checkpoints = {0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0};
  const EnsembleStats inside_stats = run_ensemble(inside);
  for (std::size_t c = 0; c + 1 < inside_stats.dynkin.size(); ++c) {
    const auto& now = inside_stats.dynkin[c];
    const auto& next = inside_stats.dynkin[c + 1];
    CHECK(next.mean_v >=
          now.mean_v - 2.0 * (now.mean_v_se + next.mean_v_se));
  }
}

TEST_CASE("strong convergence orders") {
  const ModelParams p(1.5, 1.0, 0.25);
  const std::vector<double> dts = {1.0 / 64, 1.0 / 128, 1.0 / 256, 1.0 / 512};
  const auto em = strong_convergence_order(p, 1.5, Scheme::EulerMaruyama, dts,
                                           80, 42, 1.0);
  CHECK(em.slope > 0.3);
  CHECK(em.slope < 0.7);
  const auto mil =
      strong_convergence_order(p, 1.5, Scheme::Milstein, dts, 80, 42, 1.0);
  CHECK(mil.slope > 0.8);
  CHECK(mil.slope < 1.2);
  // errors decrease with dt
  for (std::size_t j = 1; j < mil.rms_errors.size(); ++j) {
    CHECK(mil.rms_errors[j] < mil.rms_errors[j - 1]);
  }

  // sigma = 0: both schemes reduce to deterministic Euler, order 1
  const ModelParams quiet(1.5, 1.0, 0.0);
  const auto em0 = strong_convergence_order(quiet, 2.3, Scheme::EulerMaruyama,
                                            dts, 4, 42, 1.0);
  CHECK(em0.slope > 0.8);
  CHECK(em0.slope < 1.2);
  const auto mil0 =
      strong_convergence_order(quiet, 2.3, Scheme::Milstein, dts, 4, 42, 1.0);
  CHECK(mil0.slope > 0.8);
  CHECK(mil0.slope < 1.2);
}

TEST_CASE("convergence study rejects absorbing parameter sets") {
  const ModelParams p(1.0, 1.0, 2.45);
  const std::vector<double> dts = {10.0 / 64, 10.0 / 128};
  CHECK_THROWS_AS(
      strong_convergence_order(p, 1.75, Scheme::Milstein, dts, 40, 42, 10.0),
      AbsorptionError);
}

TEST_CASE("convergence study validates the dt ladder") {
  const ModelParams p(1.5, 1.0, 0.25);
  // 1/60 is not an integer multiple of the fine dt (1/100)/32
  const std::vector<double> misaligned = {1.0 / 60, 1.0 / 100};
  CHECK_THROWS_AS(strong_convergence_order(p, 1.5, Scheme::Milstein, misaligned,
                                           8, 42, 1.0),
                  std::invalid_argument);
  // 0.3 does not divide the horizon
  const std::vector<double> offgrid = {0.3};
  CHECK_THROWS_AS(
      strong_convergence_order(p, 1.5, Scheme::Milstein, offgrid, 8, 42, 1.0),
      std::invalid_argument);
}

TEST_CASE("dynkin residual shrinks under dt halving and path quadrupling") {
  const std::vector<double> checkpoints = {0.5, 1.0, 2.0};
  struct Level {
    double dt;
    std::int64_t paths;
  };
  const std::vector<Level> ladder = {{4e-3, 500}, {2e-3, 2000}, {1e-3, 8000}};
  double prev = 1e300;
  for (const Level& level : ladder) {
    EnsembleConfig cfg(ModelParams(1.5, 1.0, 0.25), 2.3,
                       SimGrid(level.dt, std::llround(2.0 / level.dt)));
    cfg.n_paths = level.paths;
    cfg.master_seed = 42;
    cfg.burn_in = 0.0;
    double worst = 0.0;
    for (const DynkinCheckpoint& cp : dynkin_residual(cfg, checkpoints)) {
      worst = std::max(worst, std::abs(cp.residual));
    }
    CHECK(worst < prev);
    prev = worst;
  }
}
