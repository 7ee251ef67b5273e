/* Copyright 2026 stologistic project contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C API of the stologistic shared library.
 *
 * The library analyzes and simulates the stochastic logistic equation
 *     dx = (a x - b x^2) dt + sigma x dw.
 * Handles are opaque; every fallible call returns an slg_status and writes
 * results through out-pointers.  slg_last_error() carries a thread-local
 * detail message for the most recent failure on the calling thread.
 */

#ifndef STOLOGISTIC_H
#define STOLOGISTIC_H

#include <stdint.h>

#ifndef SLG_API
#  if defined(_WIN32)
#    define SLG_API
#  else
#    define SLG_API __attribute__((visibility("default")))
#  endif
#endif

#ifdef __cplusplus
extern "C" {
#endif

#define SLG_VERSION_STRING "0.1.0"

typedef enum slg_status {
  SLG_OK = 0,
  SLG_ERR_INVALID_ARGUMENT = 1,
  SLG_ERR_DOMAIN = 2,
  SLG_ERR_INSUFFICIENT_PATHS = 3,
  SLG_ERR_PATH_ABSORBED = 4,
  SLG_ERR_INTERNAL = 5
} slg_status;

typedef enum slg_regime {
  SLG_REGIME_DETERMINISTIC = 0,
  SLG_REGIME_PERSISTENT_BAND = 1,
  SLG_REGIME_CRITICAL = 2,
  SLG_REGIME_EXTINCTION = 3
} slg_regime;

typedef enum slg_scheme {
  SLG_SCHEME_EULER_MARUYAMA = 0,
  SLG_SCHEME_MILSTEIN = 1,
  SLG_SCHEME_REFERENCE = 2
} slg_scheme;

typedef struct slg_model slg_model;
typedef struct slg_path slg_path;
typedef struct slg_ensemble slg_ensemble;

SLG_API const char* slg_version(void);
SLG_API const char* slg_status_name(slg_status status);
SLG_API const char* slg_regime_name(slg_regime regime);
SLG_API const char* slg_scheme_name(slg_scheme scheme);
SLG_API const char* slg_last_error(void);

/* ---- model: parameters and closed-form analysis ---- */

/* Requires a > 0 and b > 0; sigma may be any finite real. */
SLG_API slg_status slg_model_create(double a, double b, double sigma,
                                    slg_model** out);
SLG_API void slg_model_destroy(slg_model* model);

SLG_API double slg_model_a(const slg_model* model);
SLG_API double slg_model_b(const slg_model* model);
SLG_API double slg_model_sigma(const slg_model* model);
SLG_API double slg_model_carrying_capacity(const slg_model* model);
SLG_API slg_regime slg_model_regime(const slg_model* model);
SLG_API void slg_model_band(const slg_model* model, double* x1, double* x2);

SLG_API double slg_model_drift(const slg_model* model, double x);
SLG_API double slg_model_diffusion(const slg_model* model, double x);

/* Volterra function v(x) = x/x* - ln(x/x*) - 1 (x > 0) and its generator
 * Lv(x) = -(b/x*)(x - x*)^2 + sigma^2/2. */
SLG_API slg_status slg_model_volterra_v(const slg_model* model, double x,
                                        double* out);
SLG_API slg_status slg_model_volterra_generator(const slg_model* model,
                                                double x, double* out);

/* Khasminskii function V(x) = |x|^(1 - 2a/sigma^2) and its generator
 * LV(x) = -(1 - 2a/sigma^2) b |x|^(2 - 2a/sigma^2); both need sigma != 0. */
SLG_API slg_status slg_model_khasminskii_v(const slg_model* model, double x,
                                           double* out);
SLG_API slg_status slg_model_khasminskii_generator(const slg_model* model,
                                                   double x, double* out);
/* Evaluation-only variant admitting b == 0. */
SLG_API slg_status slg_khasminskii_generator_eval(double a, double b,
                                                  double sigma, double x,
                                                  double* out);

/* Stationary mean (2a - sigma^2) / (2b); persistent-band regime only. */
SLG_API slg_status slg_stationary_mean_prediction(const slg_model* model,
                                                  double* out);

/* ---- simulation ---- */

/* Writes n_steps N(0, dt) increments; pure function of all arguments. */
SLG_API slg_status slg_wiener_increments(uint64_t master_seed,
                                         uint64_t path_index, double dt,
                                         int64_t n_steps, double* out);

/* Simulates one path on the grid {0, dt, ..., n_steps*dt}.  Pass
 * absorb_eps < 0 for the default threshold (1e-8). */
SLG_API slg_status slg_simulate_path(const slg_model* model, double x0,
                                     double dt, int64_t n_steps,
                                     slg_scheme scheme, uint64_t master_seed,
                                     uint64_t path_index, double absorb_eps,
                                     slg_path** out);
SLG_API int64_t slg_path_n_points(const slg_path* path);
SLG_API const double* slg_path_times(const slg_path* path);
SLG_API const double* slg_path_states(const slg_path* path);
/* Returns 1 and writes the absorption time if the path was absorbed. */
SLG_API int slg_path_absorbed_at(const slg_path* path, double* t_out);
SLG_API int64_t slg_path_clamp_count(const slg_path* path);
SLG_API void slg_path_destroy(slg_path* path);

/* ---- ensembles ---- */

typedef struct slg_ensemble_config {
  double a;
  double b;
  double sigma;
  double x0;
  double dt;
  int64_t n_steps;
  int64_t n_paths;
  uint64_t master_seed;
  slg_scheme scheme;
  double burn_in;
  double extinction_threshold;
  double absorb_eps;
  int64_t min_surviving;
  /* 0 = hardware thread count; any value gives bit-identical results. */
  int n_threads;
} slg_ensemble_config;

SLG_API void slg_ensemble_config_defaults(slg_ensemble_config* cfg);

/* Runs the ensemble; dynkin_checkpoints (grid times) may be NULL/0. */
SLG_API slg_status slg_run_ensemble(const slg_ensemble_config* cfg,
                                    const double* dynkin_checkpoints,
                                    int64_t n_checkpoints,
                                    slg_ensemble** out);
SLG_API int64_t slg_ensemble_n_points(const slg_ensemble* e);
SLG_API const double* slg_ensemble_times(const slg_ensemble* e);
SLG_API const double* slg_ensemble_mean(const slg_ensemble* e);
SLG_API const double* slg_ensemble_variance(const slg_ensemble* e);
SLG_API double slg_ensemble_band_occupancy(const slg_ensemble* e);
SLG_API double slg_ensemble_mean_in_band_fraction(const slg_ensemble* e);
SLG_API double slg_ensemble_extinct_fraction(const slg_ensemble* e);
SLG_API double slg_ensemble_time_avg_state(const slg_ensemble* e);
SLG_API double slg_ensemble_time_avg_state_se(const slg_ensemble* e);
SLG_API int64_t slg_ensemble_absorbed_count(const slg_ensemble* e);
SLG_API int64_t slg_ensemble_clamp_count(const slg_ensemble* e);
SLG_API int64_t slg_ensemble_n_first_passage(const slg_ensemble* e);
/* Sorted ascending; length given by slg_ensemble_n_first_passage. */
SLG_API const double* slg_ensemble_first_passage_times(const slg_ensemble* e);
SLG_API int64_t slg_ensemble_n_dynkin(const slg_ensemble* e);
SLG_API void slg_ensemble_dynkin(const slg_ensemble* e, int64_t i, double* t,
                                 double* residual, double* mean_v,
                                 double* mean_v_se, int64_t* surviving,
                                 int64_t* excluded);
SLG_API void slg_ensemble_destroy(slg_ensemble* e);

/* Post burn-in time average next to the stationary prediction. */
SLG_API slg_status slg_stationary_mean_check(const slg_ensemble_config* cfg,
                                             double* time_avg_state,
                                             double* predicted);

/* Strong-convergence study against the pathwise reference solution driven
 * by the same increments.  rms_out may be NULL; otherwise it receives
 * n_dts RMS endpoint errors. */
SLG_API slg_status slg_convergence_order(double a, double b, double sigma,
                                         double x0, slg_scheme scheme,
                                         const double* dts, int64_t n_dts,
                                         int64_t n_paths, uint64_t seed,
                                         double t_end, int n_threads,
                                         double* slope_out, double* rms_out);

#ifdef __cplusplus
}
#endif

#endif /* STOLOGISTIC_H */
