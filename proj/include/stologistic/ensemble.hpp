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

#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "stologistic/model.hpp"
#include "stologistic/sde.hpp"

namespace stologistic {

/// Too few unabsorbed paths were left for a reported expectation.
class InsufficientSurvivorsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A path was absorbed inside a study that requires survival throughout.
class AbsorptionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EnsembleConfig {
  EnsembleConfig(ModelParams params_, double x0_, SimGrid grid_)
      : params(params_), x0(x0_), grid(grid_) {}

  ModelParams params;
  double x0 = 0.0;
  SimGrid grid;
  std::int64_t n_paths = 0;
  std::uint64_t master_seed = 42;
  Scheme scheme = Scheme::Milstein;
  double burn_in = 0.0;
  double extinction_threshold = 1e-6;
  double absorb_eps = kDefaultAbsorbEps;
  /// Minimum surviving-path count behind any reported expectation.
  std::int64_t min_surviving = 100;
  /// 0 picks the hardware thread count.  Results are bit-identical for any
  /// value: paths are aggregated in fixed 64-path blocks merged in order.
  int n_threads = 0;
  /// Checkpoint times (grid multiples) at which the integral identity
  /// E v(x(t)) - v(x0) = Int_0^t E Lv(x(s)) ds is evaluated.
  std::vector<double> dynkin_checkpoints;

  void validate() const;
};

struct DynkinCheckpoint {
  double t = 0.0;
  /// mean v(x(t)) - v(x0) - trapezoid integral of mean Lv over [0, t],
  /// averaged over paths still unabsorbed at t.
  double residual = 0.0;
  double mean_v = 0.0;
  double mean_v_se = 0.0;  ///< MC standard error of mean_v
  double mean_integral = 0.0;
  std::int64_t surviving = 0;
  std::int64_t excluded = 0;
};

struct EnsembleStats {
  std::vector<double> times;
  std::vector<double> mean_traj;
  std::vector<double> var_traj;  ///< sample variance across paths
  /// Mean over paths of the fraction of post-burn-in grid points inside the
  /// closed band [x1, x2] (endpoints are where Lv vanishes, so they count
  /// as inside).
  double band_occupancy = 0.0;
  /// Fraction of paths whose post-burn-in time average lies strictly
  /// inside (x1, x2).
  double mean_in_band_fraction = 0.0;
  double extinct_fraction = 0.0;
  std::vector<double> first_passage_times;  ///< sorted ascending
  double time_avg_state = 0.0;
  double time_avg_state_se = 0.0;
  std::int64_t absorbed_count = 0;
  std::int64_t clamp_count_total = 0;
  std::vector<DynkinCheckpoint> dynkin;
  Band band;
  double xstar = 0.0;
  Regime regime = Regime::Deterministic;
};

/// Runs n_paths independent paths (path_index 0..n_paths-1) and aggregates
/// every statistic in one streaming pass.  Deterministic given the config,
/// regardless of thread count.
EnsembleStats run_ensemble(const EnsembleConfig& cfg);

/// Fraction of grid points with t >= burn_in whose state lies in [x1, x2].
double band_occupancy(const Path& path, const Band& band, double burn_in);

struct ExtinctionStats {
  double extinct_fraction = 0.0;
  std::vector<double> first_passage_times;
};

/// First passage time per path: earliest grid time with state <= threshold.
ExtinctionStats extinction_stats(std::span<const Path> paths,
                                 double threshold);

/// Integral-identity residual at the given checkpoint times; see
/// DynkinCheckpoint.  Absorbed paths are excluded per checkpoint with their
/// count reported; throws InsufficientSurvivorsError below
/// cfg.min_surviving.
std::vector<DynkinCheckpoint> dynkin_residual(const EnsembleConfig& cfg,
                                              std::span<const double> checkpoints);

/// Mean of the stationary law of the persistent regime.  The stationary
/// density solves the time-independent Fokker-Planck equation and is the
/// Gamma density ~ x^(2a/sigma^2 - 2) exp(-2 b x / sigma^2), so the mean is
/// (2a - sigma^2) / (2b); it always lies strictly inside (x1, x2).
double stationary_mean_prediction(const ModelParams& p);

struct StationaryCheck {
  double time_avg_state = 0.0;
  double predicted = 0.0;
};

/// Long-run (post burn-in, ensemble-and-time) average of the state next to
/// the closed-form prediction.  Rejects non-persistent regimes.
StationaryCheck stationary_mean_check(const EnsembleConfig& cfg);

struct ConvergenceResult {
  Scheme scheme = Scheme::Milstein;
  std::vector<double> dts;
  std::vector<double> rms_errors;
  double slope = 0.0;  ///< log-log regression of RMS endpoint error on dt
};

/// Strong-convergence study: endpoint RMS error of the scheme against the
/// pathwise reference driven by the same Brownian increments (coarse
/// increments are sums of fine ones; the fine dt is min(dts)/32).  Every dt
/// must divide t_end and be a multiple of the fine dt.  Throws
/// AbsorptionError if any path absorbs during the study.
ConvergenceResult strong_convergence_order(const ModelParams& p, double x0,
                                           Scheme scheme,
                                           std::span<const double> dts,
                                           std::int64_t n_paths,
                                           std::uint64_t seed, double t_end,
                                           int n_threads = 0);

}  // namespace stologistic
