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

#include "stologistic/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <condition_variable>
#include <cstring>
#include <mutex>
#include <string>
#include <thread>

#include "stologistic/rng.hpp"

namespace stologistic {
namespace {

// Paths are aggregated in fixed-size blocks merged strictly in block order,
// which keeps every reported statistic bit-identical across thread counts.
constexpr std::int64_t kBlockSize = 64;

int resolve_threads(int requested, std::int64_t n_blocks) {
  int threads = requested;
  if (threads <= 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    threads = hw > 0 ? int(hw) : 1;
  }
  if (std::int64_t(threads) > n_blocks) threads = int(n_blocks);
  return std::max(threads, 1);
}

struct NeumaierSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double value) {
    const double t = sum + value;
    if (std::abs(sum) >= std::abs(value)) {
      comp += (sum - t) + value;
    } else {
      comp += (value - t) + sum;
    }
    sum = t;
  }

  double value() const { return sum + comp; }
};

struct WelfordScalar {
  std::int64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / double(n);
    m2 += d * (x - mean);
  }

  double sample_variance() const { return n > 1 ? m2 / double(n - 1) : 0.0; }
  double mean_se() const {
    return n > 0 ? std::sqrt(sample_variance() / double(n)) : 0.0;
  }
};

// Per-grid-point running mean/M2 across paths.
struct PerTimeWelford {
  std::int64_t count = 0;
  std::vector<double> mean;
  std::vector<double> m2;

  explicit PerTimeWelford(std::size_t n) : mean(n, 0.0), m2(n, 0.0) {}

  void reset() {
    count = 0;
    std::fill(mean.begin(), mean.end(), 0.0);
    std::fill(m2.begin(), m2.end(), 0.0);
  }

  void add_path(std::span<const double> states) {
    ++count;
    const double inv = 1.0 / double(count);
    for (std::size_t i = 0; i < mean.size(); ++i) {
      const double d = states[i] - mean[i];
      mean[i] += d * inv;
      m2[i] += d * (states[i] - mean[i]);
    }
  }

  void merge(const PerTimeWelford& block) {
    if (block.count == 0) return;
    if (count == 0) {
      count = block.count;
      mean = block.mean;
      m2 = block.m2;
      return;
    }
    const double na = double(count);
    const double nb = double(block.count);
    const double nab = na + nb;
    for (std::size_t i = 0; i < mean.size(); ++i) {
      const double delta = block.mean[i] - mean[i];
      mean[i] += delta * (nb / nab);
      m2[i] += block.m2[i] + delta * delta * (na * nb / nab);
    }
    count += block.count;
  }
};

// Generic ordered-block runner: block_fn fills thread-local scratch for one
// block of items, merge_fn folds the scratch into globals in block order.
template <typename MakeScratch, typename BlockFn, typename MergeFn>
void run_blocked(std::int64_t n_items, int n_threads, MakeScratch&& make_scratch,
                 BlockFn&& block_fn, MergeFn&& merge_fn) {
  const std::int64_t n_blocks = (n_items + kBlockSize - 1) / kBlockSize;
  const int threads = resolve_threads(n_threads, n_blocks);

  std::atomic<std::int64_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex merge_mutex;
  std::condition_variable merge_cv;
  std::int64_t turn = 0;
  std::mutex error_mutex;
  std::exception_ptr error;

  auto record_error = [&] {
    failed.store(true, std::memory_order_relaxed);
    std::lock_guard<std::mutex> guard(error_mutex);
    if (!error) error = std::current_exception();
  };

  auto worker = [&] {
    auto scratch = make_scratch();
    for (;;) {
      if (failed.load(std::memory_order_relaxed)) break;
      const std::int64_t blk = next.fetch_add(1);
      if (blk >= n_blocks) break;
      const std::int64_t lo = blk * kBlockSize;
      const std::int64_t hi = std::min(n_items, lo + kBlockSize);
      bool ok = true;
      try {
        block_fn(scratch, lo, hi);
      } catch (...) {
        ok = false;
        record_error();
      }
      // A block owner always advances the turn, even on failure, so waiters
      // can never stall.
      {
        std::unique_lock<std::mutex> lock(merge_mutex);
        merge_cv.wait(lock, [&] { return turn == blk; });
        if (ok) {
          try {
            merge_fn(scratch);
          } catch (...) {
            record_error();
          }
        }
        ++turn;
      }
      merge_cv.notify_all();
    }
  };

  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(std::size_t(threads));
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
}

std::int64_t checkpoint_index(double t, const SimGrid& grid) {
  const std::int64_t idx = std::llround(t / grid.dt());
  const bool on_grid =
      idx >= 0 && idx <= grid.n_steps() &&
      std::abs(double(idx) * grid.dt() - t) <= 1e-9 * std::max(1.0, std::abs(t));
  if (!on_grid) {
    throw std::invalid_argument(
        "dynkin checkpoint " + std::to_string(t) +
        " is not a grid time within the horizon");
  }
  return idx;
}

std::int64_t burn_in_index(double burn_in, const SimGrid& grid) {
  const auto k0 =
      std::int64_t(std::ceil(burn_in / grid.dt() - 1e-9));
  return std::clamp<std::int64_t>(k0, 0, grid.n_steps());
}

double regression_slope(std::span<const double> xs, std::span<const double> ys) {
  const std::size_t n = xs.size();
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= double(n);
  my /= double(n);
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace

void EnsembleConfig::validate() const {
  if (!std::isfinite(x0) || !(x0 > absorb_eps)) {
    throw std::invalid_argument(
        "EnsembleConfig: x0 must be finite and exceed absorb_eps");
  }
  if (n_paths < 1) {
    throw std::invalid_argument("EnsembleConfig: n_paths must be >= 1");
  }
  if (!(absorb_eps >= 0.0)) {
    throw std::invalid_argument("EnsembleConfig: absorb_eps must be >= 0");
  }
  if (!(burn_in >= 0.0) || burn_in >= grid.horizon()) {
    throw std::invalid_argument(
        "EnsembleConfig: burn_in must lie in [0, horizon)");
  }
  if (!(extinction_threshold > 0.0) || extinction_threshold < absorb_eps) {
    throw std::invalid_argument(
        "EnsembleConfig: extinction_threshold must be positive and >= absorb_eps");
  }
  if (min_surviving < 1) {
    throw std::invalid_argument("EnsembleConfig: min_surviving must be >= 1");
  }
  if (scheme == Scheme::Reference) {
    throw std::invalid_argument(
        "EnsembleConfig: ensembles run a stepping scheme, not the reference");
  }
  for (const double t : dynkin_checkpoints) checkpoint_index(t, grid);
}

EnsembleStats run_ensemble(const EnsembleConfig& cfg) {
  cfg.validate();

  const SimGrid& grid = cfg.grid;
  const std::int64_t n = grid.n_steps();
  const std::size_t n_points = std::size_t(n + 1);
  const double dt = grid.dt();
  const std::int64_t k0 = burn_in_index(cfg.burn_in, grid);
  const Band band = band_endpoints(cfg.params);
  const double xstar = cfg.params.carrying_capacity();
  const double lv_coeff = cfg.params.b() / xstar;
  const double lv_max = 0.5 * cfg.params.sigma() * cfg.params.sigma();

  // Checkpoints sorted by grid index, remembering their original order.
  const std::size_t n_cp = cfg.dynkin_checkpoints.size();
  std::vector<std::pair<std::int64_t, std::size_t>> cp_order(n_cp);
  for (std::size_t c = 0; c < n_cp; ++c) {
    cp_order[c] = {checkpoint_index(cfg.dynkin_checkpoints[c], grid), c};
  }
  std::sort(cp_order.begin(), cp_order.end());

  const std::size_t n_paths = std::size_t(cfg.n_paths);
  std::vector<double> occupancy(n_paths);
  std::vector<double> time_avg(n_paths);
  std::vector<double> fpt(n_paths, -1.0);
  std::vector<std::uint8_t> tavg_in_band(n_paths, 0);
  std::vector<std::uint8_t> absorbed(n_paths, 0);
  std::vector<std::int64_t> clamps(n_paths, 0);
  std::vector<double> cp_v(n_cp * n_paths, 0.0);
  std::vector<double> cp_integral(n_cp * n_paths, 0.0);
  std::vector<std::uint8_t> cp_alive(n_cp * n_paths, 0);

  PerTimeWelford global(n_points);

  struct Scratch {
    std::vector<double> increments;
    std::vector<double> states;
    PerTimeWelford partial;
    Scratch(std::size_t n_steps, std::size_t n_pts)
        : increments(n_steps), states(n_pts), partial(n_pts) {}
  };

  auto block_fn = [&](Scratch& scratch, std::int64_t lo, std::int64_t hi) {
    scratch.partial.reset();
    for (std::int64_t i = lo; i < hi; ++i) {
      wiener_increments_into({cfg.master_seed, std::uint64_t(i)}, grid,
                             scratch.increments);
      const auto meta =
          detail::simulate_states(cfg.params, cfg.x0, grid, cfg.scheme,
                                  scratch.increments, cfg.absorb_eps,
                                  scratch.states);
      const std::span<const double> states(scratch.states);
      scratch.partial.add_path(states);

      const std::int64_t absorbed_idx = meta.absorbed_index;
      NeumaierSum tavg_sum;
      NeumaierSum integral;
      std::int64_t in_band = 0;
      std::int64_t fpt_idx = -1;
      std::size_t next_cp = 0;
      double prev_lv = -lv_coeff * (states[0] - xstar) * (states[0] - xstar) +
                       lv_max;
      for (std::int64_t k = 0; k <= n; ++k) {
        const double x = states[std::size_t(k)];
        const bool alive = absorbed_idx < 0 || k < absorbed_idx;
        if (k > 0 && alive) {
          const double lv = -lv_coeff * (x - xstar) * (x - xstar) + lv_max;
          integral.add(0.5 * dt * (prev_lv + lv));
          prev_lv = lv;
        }
        if (k >= k0) {
          tavg_sum.add(x);
          if (x >= band.x1 && x <= band.x2) ++in_band;
        }
        if (fpt_idx < 0 && x <= cfg.extinction_threshold) fpt_idx = k;
        while (next_cp < n_cp && cp_order[next_cp].first == k) {
          const std::size_t slot =
              cp_order[next_cp].second * n_paths + std::size_t(i);
          if (alive) {
            cp_alive[slot] = 1;
            cp_v[slot] = volterra_v(x, xstar);
            cp_integral[slot] = integral.value();
          }
          ++next_cp;
        }
      }
      const double tail_points = double(n - k0 + 1);
      occupancy[std::size_t(i)] = double(in_band) / tail_points;
      const double avg = tavg_sum.value() / tail_points;
      time_avg[std::size_t(i)] = avg;
      tavg_in_band[std::size_t(i)] = (avg > band.x1 && avg < band.x2) ? 1 : 0;
      if (fpt_idx >= 0) fpt[std::size_t(i)] = grid.time_at(fpt_idx);
      absorbed[std::size_t(i)] = absorbed_idx >= 0 ? 1 : 0;
      clamps[std::size_t(i)] = meta.clamp_count;
    }
  };
  auto merge_fn = [&](Scratch& scratch) { global.merge(scratch.partial); };

  run_blocked(
      cfg.n_paths, cfg.n_threads,
      [&] { return Scratch(std::size_t(n), n_points); }, block_fn, merge_fn);

  EnsembleStats stats;
  stats.band = band;
  stats.xstar = xstar;
  stats.regime = classify_regime(cfg.params);
  stats.times.resize(n_points);
  for (std::int64_t k = 0; k <= n; ++k) stats.times[std::size_t(k)] = grid.time_at(k);
  stats.mean_traj = std::move(global.mean);
  stats.var_traj.resize(n_points, 0.0);
  if (cfg.n_paths > 1) {
    const double denom = double(cfg.n_paths - 1);
    for (std::size_t i = 0; i < n_points; ++i) {
      stats.var_traj[i] = global.m2[i] / denom;
    }
  }

  NeumaierSum occ_sum;
  WelfordScalar tavg_stats;
  std::int64_t in_band_count = 0;
  std::int64_t extinct = 0;
  std::int64_t absorbed_count = 0;
  std::int64_t clamp_total = 0;
  for (std::size_t i = 0; i < n_paths; ++i) {
    occ_sum.add(occupancy[i]);
    tavg_stats.add(time_avg[i]);
    in_band_count += tavg_in_band[i];
    if (fpt[i] >= 0.0) {
      ++extinct;
      stats.first_passage_times.push_back(fpt[i]);
    }
    absorbed_count += absorbed[i];
    clamp_total += clamps[i];
  }
  std::sort(stats.first_passage_times.begin(), stats.first_passage_times.end());
  stats.band_occupancy = occ_sum.value() / double(n_paths);
  stats.mean_in_band_fraction = double(in_band_count) / double(n_paths);
  stats.extinct_fraction = double(extinct) / double(n_paths);
  stats.time_avg_state = tavg_stats.mean;
  stats.time_avg_state_se = tavg_stats.mean_se();
  stats.absorbed_count = absorbed_count;
  stats.clamp_count_total = clamp_total;

  const double v0 = volterra_v(cfg.x0, xstar);
  stats.dynkin.resize(n_cp);
  for (std::size_t c = 0; c < n_cp; ++c) {
    DynkinCheckpoint cp;
    cp.t = grid.time_at(checkpoint_index(cfg.dynkin_checkpoints[c], grid));
    NeumaierSum integral_sum;
    WelfordScalar v_stats;
    for (std::size_t i = 0; i < n_paths; ++i) {
      const std::size_t slot = c * n_paths + i;
      if (!cp_alive[slot]) continue;
      v_stats.add(cp_v[slot]);
      integral_sum.add(cp_integral[slot]);
    }
    cp.surviving = v_stats.n;
    cp.excluded = cfg.n_paths - v_stats.n;
    if (cp.surviving < cfg.min_surviving) {
      throw InsufficientSurvivorsError(
          "dynkin checkpoint t=" + std::to_string(cp.t) + ": only " +
          std::to_string(cp.surviving) + " surviving paths (minimum " +
          std::to_string(cfg.min_surviving) + ")");
    }
    cp.mean_v = v_stats.mean;
    cp.mean_v_se = v_stats.mean_se();
    cp.mean_integral = integral_sum.value() / double(cp.surviving);
    cp.residual = cp.mean_v - v0 - cp.mean_integral;
    stats.dynkin[c] = cp;
  }
  return stats;
}

double band_occupancy(const Path& path, const Band& band, double burn_in) {
  if (path.times.empty() || path.times.size() != path.states.size()) {
    throw std::invalid_argument("band_occupancy: malformed path");
  }
  if (!(burn_in >= 0.0) || burn_in >= path.times.back()) {
    throw std::invalid_argument("band_occupancy: burn_in must lie in [0, horizon)");
  }
  std::int64_t total = 0;
  std::int64_t inside = 0;
  for (std::size_t k = 0; k < path.times.size(); ++k) {
    if (path.times[k] < burn_in - 1e-12) continue;
    ++total;
    if (path.states[k] >= band.x1 && path.states[k] <= band.x2) ++inside;
  }
  return double(inside) / double(total);
}

ExtinctionStats extinction_stats(std::span<const Path> paths, double threshold) {
  if (!(threshold > 0.0)) {
    throw std::invalid_argument("extinction_stats: threshold must be > 0");
  }
  ExtinctionStats result;
  std::int64_t extinct = 0;
  for (const Path& path : paths) {
    for (std::size_t k = 0; k < path.states.size(); ++k) {
      if (path.states[k] <= threshold) {
        result.first_passage_times.push_back(path.times[k]);
        ++extinct;
        break;
      }
    }
  }
  std::sort(result.first_passage_times.begin(),
            result.first_passage_times.end());
  result.extinct_fraction =
      paths.empty() ? 0.0 : double(extinct) / double(paths.size());
  return result;
}

std::vector<DynkinCheckpoint> dynkin_residual(const EnsembleConfig& cfg,
                                              std::span<const double> checkpoints) {
  EnsembleConfig with_cp = cfg;
  with_cp.dynkin_checkpoints.assign(checkpoints.begin(), checkpoints.end());
  return run_ensemble(with_cp).dynkin;
}

double stationary_mean_prediction(const ModelParams& p) {
  if (classify_regime(p) != Regime::PersistentBand) {
    throw std::invalid_argument(
        "stationary_mean_prediction: requires the persistent-band regime");
  }
  return (2.0 * p.a() - p.sigma() * p.sigma()) / (2.0 * p.b());
}

StationaryCheck stationary_mean_check(const EnsembleConfig& cfg) {
  StationaryCheck check;
  check.predicted = stationary_mean_prediction(cfg.params);
  check.time_avg_state = run_ensemble(cfg).time_avg_state;
  return check;
}

ConvergenceResult strong_convergence_order(const ModelParams& p, double x0,
                                           Scheme scheme,
                                           std::span<const double> dts,
                                           std::int64_t n_paths,
                                           std::uint64_t seed, double t_end,
                                           int n_threads) {
  if (dts.empty()) {
    throw std::invalid_argument("strong_convergence_order: need at least one dt");
  }
  if (n_paths < 2) {
    throw std::invalid_argument("strong_convergence_order: need >= 2 paths");
  }
  if (!(t_end > 0.0) || !std::isfinite(t_end)) {
    throw std::invalid_argument("strong_convergence_order: t_end must be > 0");
  }
  if (scheme == Scheme::Reference) {
    throw std::invalid_argument(
        "strong_convergence_order: scheme must be a stepping scheme");
  }
  double dt_min = dts[0];
  for (const double dt : dts) {
    if (!(dt > 0.0)) {
      throw std::invalid_argument("strong_convergence_order: dt must be > 0");
    }
    dt_min = std::min(dt_min, dt);
  }
  const double dt_fine = dt_min / 32.0;
  const std::int64_t n_fine = std::llround(t_end / dt_fine);
  if (std::abs(double(n_fine) * dt_fine - t_end) > 1e-9 * t_end) {
    throw std::invalid_argument(
        "strong_convergence_order: t_end must be a multiple of min(dts)/32");
  }
  const std::size_t n_dts = dts.size();
  std::vector<std::int64_t> coarse_steps(n_dts);
  std::vector<std::int64_t> ratios(n_dts);
  for (std::size_t j = 0; j < n_dts; ++j) {
    coarse_steps[j] = std::llround(t_end / dts[j]);
    ratios[j] = std::llround(dts[j] / dt_fine);
    const bool consistent =
        ratios[j] >= 1 && coarse_steps[j] >= 1 &&
        ratios[j] * coarse_steps[j] == n_fine &&
        std::abs(double(coarse_steps[j]) * dts[j] - t_end) <= 1e-9 * t_end;
    if (!consistent) {
      throw std::invalid_argument(
          "strong_convergence_order: every dt must divide t_end and be a "
          "multiple of the fine dt");
    }
  }

  const SimGrid fine_grid(dt_fine, n_fine);
  const double a = p.a();
  const double b = p.b();
  const double sigma = p.sigma();
  const double mu = a - 0.5 * sigma * sigma;
  const bool milstein = scheme == Scheme::Milstein;

  std::vector<double> sq_errors(std::size_t(n_paths) * n_dts, 0.0);

  struct Scratch {
    std::vector<double> increments;
    explicit Scratch(std::size_t n) : increments(n) {}
  };
  auto block_fn = [&](Scratch& scratch, std::int64_t lo, std::int64_t hi) {
    for (std::int64_t i = lo; i < hi; ++i) {
      wiener_increments_into({seed, std::uint64_t(i)}, fine_grid,
                             scratch.increments);
      // Reference endpoint, O(1) memory.
      double w = 0.0;
      double integral = 0.0;
      double growth_prev = 1.0;
      double x_ref = x0;
      for (std::int64_t k = 1; k <= n_fine; ++k) {
        w += scratch.increments[std::size_t(k - 1)];
        const double growth = std::exp(mu * fine_grid.time_at(k) + sigma * w);
        integral += 0.5 * dt_fine * (growth_prev + growth);
        x_ref = x0 * growth / (1.0 + b * x0 * integral);
        growth_prev = growth;
      }
      for (std::size_t j = 0; j < n_dts; ++j) {
        const double dt = dts[j];
        const std::int64_t ratio = ratios[j];
        double x = x0;
        for (std::int64_t m = 0; m < coarse_steps[j]; ++m) {
          double dw = 0.0;
          const std::size_t base = std::size_t(m * ratio);
          for (std::int64_t r = 0; r < ratio; ++r) {
            dw += scratch.increments[base + std::size_t(r)];
          }
          double value = x + (a * x - b * x * x) * dt + sigma * x * dw;
          if (milstein) value += 0.5 * sigma * sigma * x * (dw * dw - dt);
          if (value <= kDefaultAbsorbEps) {
            throw AbsorptionError(
                "strong_convergence_order: path " + std::to_string(i) +
                " absorbed at dt=" + std::to_string(dt) +
                "; use persistent-regime parameters");
          }
          x = value;
        }
        const double err = x - x_ref;
        sq_errors[std::size_t(i) * n_dts + j] = err * err;
      }
    }
  };
  auto merge_fn = [](Scratch&) {};
  run_blocked(
      n_paths, n_threads,
      [&] { return Scratch(std::size_t(n_fine)); }, block_fn, merge_fn);

  ConvergenceResult result;
  result.scheme = scheme;
  result.dts.assign(dts.begin(), dts.end());
  result.rms_errors.resize(n_dts);
  std::vector<double> log_dt(n_dts);
  std::vector<double> log_rms(n_dts);
  for (std::size_t j = 0; j < n_dts; ++j) {
    NeumaierSum sum;
    for (std::int64_t i = 0; i < n_paths; ++i) {
      sum.add(sq_errors[std::size_t(i) * n_dts + j]);
    }
    result.rms_errors[j] = std::sqrt(sum.value() / double(n_paths));
    log_dt[j] = std::log(dts[j]);
    log_rms[j] = std::log(result.rms_errors[j]);
  }
  result.slope = n_dts > 1 ? regression_slope(log_dt, log_rms) : 0.0;
  return result;
}

}  // namespace stologistic
