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
#include <cstring>
#include <string>
#include <vector>

#include "stologistic/stologistic.h"

namespace {

struct ModelHandle {
  slg_model* ptr = nullptr;
  ModelHandle(double a, double b, double sigma) {
    REQUIRE(slg_model_create(a, b, sigma, &ptr) == SLG_OK);
  }
  ~ModelHandle() { slg_model_destroy(ptr); }
};

}  // namespace

TEST_CASE("model lifecycle and analysis") {
  CHECK(std::string(slg_version()) == SLG_VERSION_STRING);

  slg_model* bad = nullptr;
  CHECK(slg_model_create(-1.0, 1.0, 0.25, &bad) == SLG_ERR_INVALID_ARGUMENT);
  CHECK(bad == nullptr);
  CHECK(std::strlen(slg_last_error()) > 0);

  ModelHandle model(1.5, 1.0, 0.25);
  CHECK(slg_model_a(model.ptr) == 1.5);
  CHECK(slg_model_carrying_capacity(model.ptr) == 1.5);
  CHECK(slg_model_regime(model.ptr) == SLG_REGIME_PERSISTENT_BAND);
  CHECK(std::string(slg_regime_name(slg_model_regime(model.ptr))) ==
        "persistent-band");

  double x1 = 0.0;
  double x2 = 0.0;
  slg_model_band(model.ptr, &x1, &x2);
  CHECK(std::round(x1 * 100.0) / 100.0 == doctest::Approx(1.28));
  CHECK(std::round(x2 * 100.0) / 100.0 == doctest::Approx(1.72));

  CHECK(slg_model_drift(model.ptr, 2.0) == doctest::Approx(-1.0));
  CHECK(slg_model_diffusion(model.ptr, 1.5) == doctest::Approx(0.375));

  double value = 0.0;
  CHECK(slg_model_volterra_v(model.ptr, 1.5, &value) == SLG_OK);
  CHECK(value == 0.0);
  CHECK(slg_model_volterra_v(model.ptr, -1.0, &value) == SLG_ERR_DOMAIN);
  CHECK(slg_model_volterra_generator(model.ptr, 1.5, &value) == SLG_OK);
  CHECK(value == 0.5 * 0.25 * 0.25);

  CHECK(slg_stationary_mean_prediction(model.ptr, &value) == SLG_OK);
  CHECK(value == 1.46875);

  ModelHandle extinct(1.0, 1.0, 2.45);
  CHECK(slg_model_regime(extinct.ptr) == SLG_REGIME_EXTINCTION);
  CHECK(slg_stationary_mean_prediction(extinct.ptr, &value) ==
        SLG_ERR_INVALID_ARGUMENT);
  CHECK(slg_model_khasminskii_generator(extinct.ptr, 1.0, &value) == SLG_OK);
  CHECK(value == doctest::Approx(-0.6668).epsilon(1e-4));
  CHECK(slg_khasminskii_generator_eval(1.0, 0.0, 2.45, 3.0, &value) == SLG_OK);
  CHECK(value == 0.0);
  CHECK(slg_khasminskii_generator_eval(1.0, 1.0, 0.0, 3.0, &value) ==
        SLG_ERR_DOMAIN);
}

TEST_CASE("path simulation through the C surface") {
  ModelHandle model(1.5, 1.0, 0.25);
  slg_path* path = nullptr;
  REQUIRE(slg_simulate_path(model.ptr, 2.3, 1e-3, 1000, SLG_SCHEME_MILSTEIN,
                            42, 0, -1.0, &path) == SLG_OK);
  REQUIRE(path != nullptr);
  CHECK(slg_path_n_points(path) == 1001);
  const double* times = slg_path_times(path);
  const double* states = slg_path_states(path);
  CHECK(times[0] == 0.0);
  CHECK(states[0] == 2.3);
  CHECK(times[1000] == doctest::Approx(1.0));
  for (int64_t k = 0; k <= 1000; ++k) CHECK(states[k] >= 0.0);
  double t_abs = 0.0;
  CHECK(slg_path_absorbed_at(path, &t_abs) == 0);
  CHECK(slg_path_clamp_count(path) == 0);

  // identical inputs give identical outputs
  slg_path* again = nullptr;
  REQUIRE(slg_simulate_path(model.ptr, 2.3, 1e-3, 1000, SLG_SCHEME_MILSTEIN,
                            42, 0, -1.0, &again) == SLG_OK);
  CHECK(std::memcmp(slg_path_states(again), states, 1001 * sizeof(double)) ==
        0);
  slg_path_destroy(again);
  slg_path_destroy(path);

  slg_path* invalid = nullptr;
  CHECK(slg_simulate_path(model.ptr, -2.3, 1e-3, 10, SLG_SCHEME_MILSTEIN, 42,
                          0, -1.0, &invalid) == SLG_ERR_INVALID_ARGUMENT);
  CHECK(invalid == nullptr);
}

TEST_CASE("wiener increments match the core sequence") {
  std::vector<double> buf(64);
  REQUIRE(slg_wiener_increments(42, 3, 0.01, 64, buf.data()) == SLG_OK);
  std::vector<double> again(64);
  REQUIRE(slg_wiener_increments(42, 3, 0.01, 64, again.data()) == SLG_OK);
  CHECK(buf == again);
  REQUIRE(slg_wiener_increments(42, 4, 0.01, 64, again.data()) == SLG_OK);
  CHECK(buf != again);
}

TEST_CASE("ensemble through the C surface") {
  slg_ensemble_config cfg;
  slg_ensemble_config_defaults(&cfg);
  CHECK(cfg.master_seed == 42);
  cfg.n_paths = 200;
  cfg.n_steps = 2000;  // T = 2
  cfg.burn_in = 1.0;
  cfg.n_threads = 1;

  const double checkpoints[2] = {0.5, 2.0};
  slg_ensemble* e = nullptr;
  REQUIRE(slg_run_ensemble(&cfg, checkpoints, 2, &e) == SLG_OK);
  REQUIRE(e != nullptr);
  CHECK(slg_ensemble_n_points(e) == 2001);
  CHECK(slg_ensemble_times(e)[2000] == doctest::Approx(2.0));
  CHECK(slg_ensemble_extinct_fraction(e) == 0.0);
  CHECK(slg_ensemble_band_occupancy(e) > 0.3);
  CHECK(slg_ensemble_n_first_passage(e) == 0);
  CHECK(slg_ensemble_absorbed_count(e) == 0);
  CHECK(slg_ensemble_n_dynkin(e) == 2);
  double t = 0.0;
  double residual = 0.0;
  double mean_v = 0.0;
  double se = 0.0;
  int64_t surviving = 0;
  int64_t excluded = 0;
  slg_ensemble_dynkin(e, 1, &t, &residual, &mean_v, &se, &surviving,
                      &excluded);
  CHECK(t == doctest::Approx(2.0));
  CHECK(surviving == 200);
  CHECK(excluded == 0);
  CHECK(std::abs(residual) < 0.05);

  // determinism across thread counts holds through the shared library too
  slg_ensemble* threaded = nullptr;
  cfg.n_threads = 4;
  REQUIRE(slg_run_ensemble(&cfg, checkpoints, 2, &threaded) == SLG_OK);
  CHECK(std::memcmp(slg_ensemble_mean(threaded), slg_ensemble_mean(e),
                    2001 * sizeof(double)) == 0);
  CHECK(slg_ensemble_time_avg_state(threaded) == slg_ensemble_time_avg_state(e));
  slg_ensemble_destroy(threaded);
  slg_ensemble_destroy(e);

  // invalid config surfaces as a status, not an exception
  cfg.n_paths = 0;
  slg_ensemble* bad = nullptr;
  CHECK(slg_run_ensemble(&cfg, nullptr, 0, &bad) == SLG_ERR_INVALID_ARGUMENT);
  CHECK(bad == nullptr);
}

TEST_CASE("stationary check and convergence through the C surface") {
  slg_ensemble_config cfg;
  slg_ensemble_config_defaults(&cfg);
  cfg.n_paths = 150;
  cfg.n_steps = 10000;
  cfg.burn_in = 5.0;
  double time_avg = 0.0;
  double predicted = 0.0;
  REQUIRE(slg_stationary_mean_check(&cfg, &time_avg, &predicted) == SLG_OK);
  CHECK(predicted == 1.46875);
  CHECK(std::abs(time_avg - predicted) < 0.05);

  const double dts[3] = {1.0 / 64, 1.0 / 128, 1.0 / 256};
  double slope = 0.0;
  double rms[3] = {0.0, 0.0, 0.0};
  REQUIRE(slg_convergence_order(1.5, 1.0, 0.25, 1.5, SLG_SCHEME_MILSTEIN, dts,
                                3, 40, 42, 1.0, 1, &slope, rms) == SLG_OK);
  CHECK(slope > 0.7);
  CHECK(slope < 1.3);
  CHECK(rms[2] < rms[0]);

  // extinction parameters absorb over a long horizon and are rejected
  CHECK(slg_convergence_order(1.0, 1.0, 2.45, 1.75, SLG_SCHEME_MILSTEIN, dts,
                              3, 40, 42, 10.0, 1, &slope, rms) ==
        SLG_ERR_PATH_ABSORBED);
}
