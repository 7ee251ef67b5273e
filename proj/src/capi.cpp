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

#include "stologistic/stologistic.h"

#include <exception>
#include <new>
#include <optional>
#include <span>
#include <string>

#include "stologistic/ensemble.hpp"
#include "stologistic/model.hpp"
#include "stologistic/sde.hpp"

namespace slg = stologistic;

struct slg_model {
  slg::ModelParams params;
};

struct slg_path {
  slg::Path path;
};

struct slg_ensemble {
  slg::EnsembleStats stats;
};

namespace {

thread_local std::string g_last_error;

void set_error(const char* what) { g_last_error = what ? what : ""; }

template <typename Fn>
slg_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return SLG_OK;
  } catch (const slg::InsufficientSurvivorsError& e) {
    set_error(e.what());
    return SLG_ERR_INSUFFICIENT_PATHS;
  } catch (const slg::AbsorptionError& e) {
    set_error(e.what());
    return SLG_ERR_PATH_ABSORBED;
  } catch (const std::domain_error& e) {
    set_error(e.what());
    return SLG_ERR_DOMAIN;
  } catch (const std::invalid_argument& e) {
    set_error(e.what());
    return SLG_ERR_INVALID_ARGUMENT;
  } catch (const std::bad_alloc&) {
    set_error("out of memory");
    return SLG_ERR_INTERNAL;
  } catch (const std::exception& e) {
    set_error(e.what());
    return SLG_ERR_INTERNAL;
  } catch (...) {
    set_error("unknown error");
    return SLG_ERR_INTERNAL;
  }
}

slg::Scheme to_scheme(slg_scheme scheme) {
  switch (scheme) {
    case SLG_SCHEME_EULER_MARUYAMA:
      return slg::Scheme::EulerMaruyama;
    case SLG_SCHEME_MILSTEIN:
      return slg::Scheme::Milstein;
    case SLG_SCHEME_REFERENCE:
      return slg::Scheme::Reference;
  }
  throw std::invalid_argument("unknown scheme value");
}

slg::EnsembleConfig to_config(const slg_ensemble_config& c) {
  slg::EnsembleConfig cfg{
      slg::ModelParams(c.a, c.b, c.sigma), c.x0, slg::SimGrid(c.dt, c.n_steps)};
  cfg.n_paths = c.n_paths;
  cfg.master_seed = c.master_seed;
  cfg.scheme = to_scheme(c.scheme);
  cfg.burn_in = c.burn_in;
  cfg.extinction_threshold = c.extinction_threshold;
  cfg.absorb_eps = c.absorb_eps;
  cfg.min_surviving = c.min_surviving;
  cfg.n_threads = c.n_threads;
  return cfg;
}

}  // namespace

extern "C" {

const char* slg_version(void) { return SLG_VERSION_STRING; }

const char* slg_status_name(slg_status status) {
  switch (status) {
    case SLG_OK:
      return "ok";
    case SLG_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case SLG_ERR_DOMAIN:
      return "domain error";
    case SLG_ERR_INSUFFICIENT_PATHS:
      return "insufficient surviving paths";
    case SLG_ERR_PATH_ABSORBED:
      return "path absorbed";
    case SLG_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

const char* slg_regime_name(slg_regime regime) {
  switch (regime) {
    case SLG_REGIME_DETERMINISTIC:
      return "deterministic";
    case SLG_REGIME_PERSISTENT_BAND:
      return "persistent-band";
    case SLG_REGIME_CRITICAL:
      return "critical";
    case SLG_REGIME_EXTINCTION:
      return "extinction";
  }
  return "unknown regime";
}

const char* slg_scheme_name(slg_scheme scheme) {
  switch (scheme) {
    case SLG_SCHEME_EULER_MARUYAMA:
      return "euler";
    case SLG_SCHEME_MILSTEIN:
      return "milstein";
    case SLG_SCHEME_REFERENCE:
      return "reference";
  }
  return "unknown scheme";
}

const char* slg_last_error(void) { return g_last_error.c_str(); }

slg_status slg_model_create(double a, double b, double sigma, slg_model** out) {
  if (out == nullptr) {
    set_error("out pointer is null");
    return SLG_ERR_INVALID_ARGUMENT;
  }
  *out = nullptr;
  return guarded([&] { *out = new slg_model{slg::ModelParams(a, b, sigma)}; });
}

void slg_model_destroy(slg_model* model) { delete model; }

double slg_model_a(const slg_model* model) { return model->params.a(); }
double slg_model_b(const slg_model* model) { return model->params.b(); }
double slg_model_sigma(const slg_model* model) { return model->params.sigma(); }

double slg_model_carrying_capacity(const slg_model* model) {
  return model->params.carrying_capacity();
}

slg_regime slg_model_regime(const slg_model* model) {
  switch (slg::classify_regime(model->params)) {
    case slg::Regime::Deterministic:
      return SLG_REGIME_DETERMINISTIC;
    case slg::Regime::PersistentBand:
      return SLG_REGIME_PERSISTENT_BAND;
    case slg::Regime::Critical:
      return SLG_REGIME_CRITICAL;
    case slg::Regime::Extinction:
      return SLG_REGIME_EXTINCTION;
  }
  return SLG_REGIME_DETERMINISTIC;
}

void slg_model_band(const slg_model* model, double* x1, double* x2) {
  const slg::Band band = slg::band_endpoints(model->params);
  if (x1 != nullptr) *x1 = band.x1;
  if (x2 != nullptr) *x2 = band.x2;
}

double slg_model_drift(const slg_model* model, double x) {
  return slg::drift(x, model->params);
}

double slg_model_diffusion(const slg_model* model, double x) {
  return slg::diffusion(x, model->params);
}

slg_status slg_model_volterra_v(const slg_model* model, double x, double* out) {
  return guarded([&] {
    *out = slg::volterra_v(x, model->params.carrying_capacity());
  });
}

slg_status slg_model_volterra_generator(const slg_model* model, double x,
                                        double* out) {
  return guarded([&] { *out = slg::volterra_generator(x, model->params); });
}

slg_status slg_model_khasminskii_v(const slg_model* model, double x,
                                   double* out) {
  return guarded([&] { *out = slg::khasminskii_v(x, model->params); });
}

slg_status slg_model_khasminskii_generator(const slg_model* model, double x,
                                           double* out) {
  return guarded([&] { *out = slg::khasminskii_generator(x, model->params); });
}

slg_status slg_khasminskii_generator_eval(double a, double b, double sigma,
                                          double x, double* out) {
  return guarded([&] { *out = slg::khasminskii_generator(x, a, b, sigma); });
}

slg_status slg_stationary_mean_prediction(const slg_model* model, double* out) {
  return guarded([&] { *out = slg::stationary_mean_prediction(model->params); });
}

slg_status slg_wiener_increments(uint64_t master_seed, uint64_t path_index,
                                 double dt, int64_t n_steps, double* out) {
  return guarded([&] {
    const slg::SimGrid grid(dt, n_steps);
    slg::wiener_increments_into({master_seed, path_index}, grid,
                                {out, std::size_t(n_steps)});
  });
}

slg_status slg_simulate_path(const slg_model* model, double x0, double dt,
                             int64_t n_steps, slg_scheme scheme,
                             uint64_t master_seed, uint64_t path_index,
                             double absorb_eps, slg_path** out) {
  if (out == nullptr) {
    set_error("out pointer is null");
    return SLG_ERR_INVALID_ARGUMENT;
  }
  *out = nullptr;
  return guarded([&] {
    const slg::SimGrid grid(dt, n_steps);
    const double eps = absorb_eps < 0.0 ? slg::kDefaultAbsorbEps : absorb_eps;
    *out = new slg_path{slg::simulate_path(model->params, x0, grid,
                                           to_scheme(scheme),
                                           slg::NoiseStream{master_seed,
                                                            path_index},
                                           eps)};
  });
}

int64_t slg_path_n_points(const slg_path* path) {
  return int64_t(path->path.states.size());
}

const double* slg_path_times(const slg_path* path) {
  return path->path.times.data();
}

const double* slg_path_states(const slg_path* path) {
  return path->path.states.data();
}

int slg_path_absorbed_at(const slg_path* path, double* t_out) {
  if (!path->path.absorbed_at.has_value()) return 0;
  if (t_out != nullptr) *t_out = *path->path.absorbed_at;
  return 1;
}

int64_t slg_path_clamp_count(const slg_path* path) {
  return path->path.clamp_count;
}

void slg_path_destroy(slg_path* path) { delete path; }

void slg_ensemble_config_defaults(slg_ensemble_config* cfg) {
  cfg->a = 1.5;
  cfg->b = 1.0;
  cfg->sigma = 0.25;
  cfg->x0 = 2.3;
  cfg->dt = 1e-3;
  cfg->n_steps = 50000;
  cfg->n_paths = 1000;
  cfg->master_seed = 42;
  cfg->scheme = SLG_SCHEME_MILSTEIN;
  cfg->burn_in = 25.0;
  cfg->extinction_threshold = 1e-6;
  cfg->absorb_eps = 1e-8;
  cfg->min_surviving = 100;
  cfg->n_threads = 0;
}

slg_status slg_run_ensemble(const slg_ensemble_config* cfg,
                            const double* dynkin_checkpoints,
                            int64_t n_checkpoints, slg_ensemble** out) {
  if (cfg == nullptr || out == nullptr) {
    set_error("null pointer argument");
    return SLG_ERR_INVALID_ARGUMENT;
  }
  *out = nullptr;
  return guarded([&] {
    slg::EnsembleConfig config = to_config(*cfg);
    if (dynkin_checkpoints != nullptr && n_checkpoints > 0) {
      config.dynkin_checkpoints.assign(dynkin_checkpoints,
                                       dynkin_checkpoints + n_checkpoints);
    }
    *out = new slg_ensemble{slg::run_ensemble(config)};
  });
}

int64_t slg_ensemble_n_points(const slg_ensemble* e) {
  return int64_t(e->stats.times.size());
}

const double* slg_ensemble_times(const slg_ensemble* e) {
  return e->stats.times.data();
}

const double* slg_ensemble_mean(const slg_ensemble* e) {
  return e->stats.mean_traj.data();
}

const double* slg_ensemble_variance(const slg_ensemble* e) {
  return e->stats.var_traj.data();
}

double slg_ensemble_band_occupancy(const slg_ensemble* e) {
  return e->stats.band_occupancy;
}

double slg_ensemble_mean_in_band_fraction(const slg_ensemble* e) {
  return e->stats.mean_in_band_fraction;
}

double slg_ensemble_extinct_fraction(const slg_ensemble* e) {
  return e->stats.extinct_fraction;
}

double slg_ensemble_time_avg_state(const slg_ensemble* e) {
  return e->stats.time_avg_state;
}

double slg_ensemble_time_avg_state_se(const slg_ensemble* e) {
  return e->stats.time_avg_state_se;
}

int64_t slg_ensemble_absorbed_count(const slg_ensemble* e) {
  return e->stats.absorbed_count;
}

int64_t slg_ensemble_clamp_count(const slg_ensemble* e) {
  return e->stats.clamp_count_total;
}

int64_t slg_ensemble_n_first_passage(const slg_ensemble* e) {
  return int64_t(e->stats.first_passage_times.size());
}

const double* slg_ensemble_first_passage_times(const slg_ensemble* e) {
  return e->stats.first_passage_times.data();
}

int64_t slg_ensemble_n_dynkin(const slg_ensemble* e) {
  return int64_t(e->stats.dynkin.size());
}

void slg_ensemble_dynkin(const slg_ensemble* e, int64_t i, double* t,
                         double* residual, double* mean_v, double* mean_v_se,
                         int64_t* surviving, int64_t* excluded) {
  const slg::DynkinCheckpoint& cp = e->stats.dynkin[std::size_t(i)];
  if (t != nullptr) *t = cp.t;
  if (residual != nullptr) *residual = cp.residual;
  if (mean_v != nullptr) *mean_v = cp.mean_v;
  if (mean_v_se != nullptr) *mean_v_se = cp.mean_v_se;
  if (surviving != nullptr) *surviving = cp.surviving;
  if (excluded != nullptr) *excluded = cp.excluded;
}

void slg_ensemble_destroy(slg_ensemble* e) { delete e; }

slg_status slg_stationary_mean_check(const slg_ensemble_config* cfg,
                                     double* time_avg_state,
                                     double* predicted) {
  if (cfg == nullptr) {
    set_error("null pointer argument");
    return SLG_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    const slg::StationaryCheck check =
        slg::stationary_mean_check(to_config(*cfg));
    if (time_avg_state != nullptr) *time_avg_state = check.time_avg_state;
    if (predicted != nullptr) *predicted = check.predicted;
  });
}

slg_status slg_convergence_order(double a, double b, double sigma, double x0,
                                 slg_scheme scheme, const double* dts,
                                 int64_t n_dts, int64_t n_paths, uint64_t seed,
                                 double t_end, int n_threads, double* slope_out,
                                 double* rms_out) {
  if (dts == nullptr || n_dts < 1 || slope_out == nullptr) {
    set_error("dts/slope_out must be provided");
    return SLG_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    const slg::ConvergenceResult result = slg::strong_convergence_order(
        slg::ModelParams(a, b, sigma), x0, to_scheme(scheme),
        {dts, std::size_t(n_dts)}, n_paths, seed, t_end, n_threads);
    *slope_out = result.slope;
    if (rms_out != nullptr) {
      for (std::size_t j = 0; j < result.rms_errors.size(); ++j) {
        rms_out[j] = result.rms_errors[j];
      }
    }
  });
}

}  // extern "C"
