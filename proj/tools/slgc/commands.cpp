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

#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "emit.hpp"

namespace slgc {
namespace {

struct ModelHandle {
  slg_model* ptr = nullptr;
  ModelHandle() = default;
  ModelHandle(const ModelHandle&) = delete;
  ModelHandle& operator=(const ModelHandle&) = delete;
  ~ModelHandle() { slg_model_destroy(ptr); }
};

struct PathHandle {
  slg_path* ptr = nullptr;
  PathHandle() = default;
  PathHandle(PathHandle&& other) noexcept : ptr(other.ptr) {
    other.ptr = nullptr;
  }
  PathHandle& operator=(PathHandle&& other) noexcept {
    std::swap(ptr, other.ptr);
    return *this;
  }
  PathHandle(const PathHandle&) = delete;
  PathHandle& operator=(const PathHandle&) = delete;
  ~PathHandle() { slg_path_destroy(ptr); }
};

struct EnsembleHandle {
  slg_ensemble* ptr = nullptr;
  EnsembleHandle() = default;
  EnsembleHandle(const EnsembleHandle&) = delete;
  EnsembleHandle& operator=(const EnsembleHandle&) = delete;
  ~EnsembleHandle() { slg_ensemble_destroy(ptr); }
};

bool create_model(double a, double b, double sigma, ModelHandle& model) {
  if (slg_model_create(a, b, sigma, &model.ptr) != SLG_OK) {
    std::cerr << "error: " << slg_last_error() << "\n";
    return false;
  }
  return true;
}

double round2(double value) { return std::round(value * 100.0) / 100.0; }

std::string two_decimals(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", value);
  return buf;
}

nlohmann::json analysis_json(const slg_model* model) {
  double x1 = 0.0;
  double x2 = 0.0;
  slg_model_band(model, &x1, &x2);
  const double sigma = slg_model_sigma(model);
  return nlohmann::json{
      {"schema_version", kSchemaVersion},
      {"kind", "analysis"},
      {"xstar", slg_model_carrying_capacity(model)},
      {"x1", x1},
      {"x2", x2},
      {"regime", slg_regime_name(slg_model_regime(model))},
      {"sigma_sq", sigma * sigma},
      {"two_a", 2.0 * slg_model_a(model)},
  };
}

std::vector<double> grid_times(double dt, std::int64_t n_steps) {
  std::vector<double> times(std::size_t(n_steps) + 1);
  for (std::int64_t k = 0; k <= n_steps; ++k) {
    times[std::size_t(k)] = dt * double(k);
  }
  return times;
}

slg_ensemble_config ensemble_config_from(const RunConfig& cfg, int threads) {
  slg_ensemble_config ec;
  slg_ensemble_config_defaults(&ec);
  ec.a = cfg.a;
  ec.b = cfg.b;
  ec.sigma = cfg.sigma;
  ec.x0 = cfg.x0;
  ec.dt = cfg.dt;
  ec.n_steps = cfg.n_steps();
  ec.n_paths = cfg.paths;
  ec.master_seed = cfg.seed;
  ec.scheme = parse_scheme(cfg.scheme);
  ec.burn_in = cfg.resolved_burn_in();
  ec.extinction_threshold = cfg.threshold;
  ec.absorb_eps = cfg.absorb_eps;
  ec.min_surviving = cfg.min_surviving;
  ec.n_threads = threads;
  return ec;
}

struct SimulatedSet {
  std::vector<double> times;
  std::vector<PathHandle> paths;
};

bool simulate_set(const slg_model* model, const RunConfig& cfg,
                  double x0, std::int64_t n_paths, std::uint64_t first_index,
                  SimulatedSet& set) {
  const std::int64_t n_steps = cfg.n_steps();
  if (set.times.empty()) set.times = grid_times(cfg.dt, n_steps);
  const slg_scheme scheme = parse_scheme(cfg.scheme);
  for (std::int64_t i = 0; i < n_paths; ++i) {
    PathHandle handle;
    if (slg_simulate_path(model, x0, cfg.dt, n_steps, scheme, cfg.seed,
                          first_index + std::uint64_t(i), cfg.absorb_eps,
                          &handle.ptr) != SLG_OK) {
      std::cerr << "error: " << slg_last_error() << "\n";
      return false;
    }
    set.paths.push_back(std::move(handle));
  }
  return true;
}

// The echoed config describes the data, not its destination.
nlohmann::json config_echo(const RunConfig& cfg) {
  nlohmann::json j = to_json(cfg);
  j.erase("out");
  return j;
}

nlohmann::json path_meta_json(const slg_path* path, std::int64_t index) {
  double t_abs = 0.0;
  const bool absorbed = slg_path_absorbed_at(path, &t_abs) != 0;
  return nlohmann::json{
      {"path_index", index},
      {"absorbed_at", absorbed ? nlohmann::json(t_abs) : nlohmann::json()},
      {"clamp_count", slg_path_clamp_count(path)},
  };
}

struct CheckResult {
  std::string name;
  bool pass = false;
  nlohmann::json detail;
};

nlohmann::json checks_json(const std::vector<CheckResult>& checks) {
  nlohmann::json arr = nlohmann::json::array();
  for (const CheckResult& check : checks) {
    nlohmann::json entry = check.detail;
    entry["name"] = check.name;
    entry["pass"] = check.pass;
    arr.push_back(entry);
  }
  return arr;
}

// ---- verify suites ----

bool verify_signs(std::vector<CheckResult>& checks) {
  struct ParamSet {
    const char* label;
    double a, b, sigma;
  };
  const ParamSet sets[] = {{"fig1", 1.5, 1.0, 0.25},
                           {"fig2", 1.5, 1.0, 0.025},
                           {"fig3", 2.5, 1.0, 1.5},
                           {"fig4", 1.5, 1.0, 0.5}};
  const double delta = 1e-6;
  const int n_grid = 1000;
  bool all = true;
  for (const ParamSet& set : sets) {
    ModelHandle model;
    if (!create_model(set.a, set.b, set.sigma, model)) return false;
    double x1 = 0.0;
    double x2 = 0.0;
    slg_model_band(model.ptr, &x1, &x2);
    const double half_sigma_sq = 0.5 * set.sigma * set.sigma;

    double min_inside = half_sigma_sq;
    double max_inside = -half_sigma_sq;
    const double lo_in = x1 * (1.0 + delta);
    const double hi_in = x2 * (1.0 - delta);
    for (int i = 0; i <= n_grid; ++i) {
      const double x = lo_in + (hi_in - lo_in) * i / n_grid;
      double lv = 0.0;
      slg_model_volterra_generator(model.ptr, x, &lv);
      min_inside = std::min(min_inside, lv);
      max_inside = std::max(max_inside, lv);
    }
    double max_outside = -1e300;
    const double intervals[2][2] = {{1e-9, x1 * (1.0 - delta)},
                                    {x2 * (1.0 + delta), 10.0 * x2}};
    for (const auto& interval : intervals) {
      for (int i = 0; i <= n_grid; ++i) {
        const double x =
            interval[0] + (interval[1] - interval[0]) * i / n_grid;
        double lv = 0.0;
        slg_model_volterra_generator(model.ptr, x, &lv);
        max_outside = std::max(max_outside, lv);
      }
    }
    double lv_at_xstar = 0.0;
    slg_model_volterra_generator(
        model.ptr, slg_model_carrying_capacity(model.ptr), &lv_at_xstar);
    const double peak_err = std::abs(lv_at_xstar - half_sigma_sq);

    CheckResult check;
    check.name = std::string("lv sign structure ") + set.label;
    check.pass = min_inside > 0.0 && max_inside <= half_sigma_sq &&
                 max_outside < 0.0 && peak_err <= 1e-12;
    check.detail = {{"x1", x1},
                    {"x2", x2},
                    {"min_inside", min_inside},
                    {"max_inside", max_inside},
                    {"max_outside", max_outside},
                    {"lv_at_xstar_error", peak_err},
                    {"tolerance_peak", 1e-12}};
    all = all && check.pass;
    checks.push_back(std::move(check));
  }

  // Khasminskii generator signs: nonpositive past the stabilisation
  // threshold, positive below it, identically zero for b = 0 or
  // sigma^2 = 2a.
  {
    ModelHandle noisy;
    if (!create_model(1.0, 1.0, 2.45, noisy)) return false;
    double max_lv = -1e300;
    for (int i = 1; i <= n_grid; ++i) {
      const double x = 10.0 * slg_model_carrying_capacity(noisy.ptr) * i / n_grid;
      double lv = 0.0;
      slg_model_khasminskii_generator(noisy.ptr, x, &lv);
      max_lv = std::max(max_lv, lv);
    }
    CheckResult check;
    check.name = "khasminskii generator nonpositive for sigma^2 > 2a";
    check.pass = max_lv <= 0.0;
    check.detail = {{"max", max_lv}};
    all = all && check.pass;
    checks.push_back(std::move(check));
  }
  {
    ModelHandle quiet;
    if (!create_model(1.5, 1.0, 0.25, quiet)) return false;
    double min_lv = 1e300;
    for (int i = 1; i <= n_grid; ++i) {
      const double x = 10.0 * slg_model_carrying_capacity(quiet.ptr) * i / n_grid;
      double lv = 0.0;
      slg_model_khasminskii_generator(quiet.ptr, x, &lv);
      min_lv = std::min(min_lv, lv);
    }
    CheckResult check;
    check.name = "khasminskii generator nonnegative for sigma^2 < 2a";
    check.pass = min_lv >= 0.0;
    check.detail = {{"min", min_lv}};
    all = all && check.pass;
    checks.push_back(std::move(check));
  }
  {
    ModelHandle critical;
    if (!create_model(2.0, 1.0, 2.0, critical)) return false;
    double worst = 0.0;
    for (int i = 1; i <= n_grid; ++i) {
      const double x = 10.0 * i / n_grid;
      double b0 = 0.0;
      slg_khasminskii_generator_eval(1.0, 0.0, 2.45, x, &b0);
      worst = std::max(worst, std::abs(b0));
      double at_threshold = 0.0;
      slg_model_khasminskii_generator(critical.ptr, x, &at_threshold);
      worst = std::max(worst, std::abs(at_threshold));
    }
    CheckResult check;
    check.name = "khasminskii generator vanishes for b = 0 and sigma^2 = 2a";
    check.pass = worst == 0.0;
    check.detail = {{"max_abs", worst}};
    all = all && check.pass;
    checks.push_back(std::move(check));
  }
  return all;
}

bool verify_dynkin(int threads, std::vector<CheckResult>& checks) {
  slg_ensemble_config ec;
  slg_ensemble_config_defaults(&ec);
  ec.n_steps = 2000;  // T = 2
  ec.n_paths = 10000;
  ec.burn_in = 0.0;
  ec.n_threads = threads;
  const double checkpoints[3] = {0.5, 1.0, 2.0};
  EnsembleHandle handle;
  if (slg_run_ensemble(&ec, checkpoints, 3, &handle.ptr) != SLG_OK) {
    std::cerr << "error: " << slg_last_error() << "\n";
    return false;
  }
  const double sigma_sq = ec.sigma * ec.sigma;
  bool all = true;
  for (int64_t c = 0; c < slg_ensemble_n_dynkin(handle.ptr); ++c) {
    double t = 0.0;
    double residual = 0.0;
    double mean_v = 0.0;
    double se = 0.0;
    int64_t surviving = 0;
    int64_t excluded = 0;
    slg_ensemble_dynkin(handle.ptr, c, &t, &residual, &mean_v, &se,
                        &surviving, &excluded);
    const double tol = 3.0 * se + 0.05 * sigma_sq * t;
    CheckResult check;
    check.name = "dynkin residual at t=" + format_double(t);
    check.pass = std::abs(residual) <= tol;
    check.detail = {{"residual", residual}, {"tolerance", tol},
                    {"mean_v", mean_v},     {"mean_v_se", se},
                    {"surviving", surviving}, {"excluded", excluded}};
    all = all && check.pass;
    checks.push_back(std::move(check));
  }
  return all;
}

bool verify_stationary(int threads, std::vector<CheckResult>& checks) {
  slg_ensemble_config ec;
  slg_ensemble_config_defaults(&ec);  // the persistent-band demo set
  ec.n_threads = threads;
  EnsembleHandle handle;
  if (slg_run_ensemble(&ec, nullptr, 0, &handle.ptr) != SLG_OK) {
    std::cerr << "error: " << slg_last_error() << "\n";
    return false;
  }
  ModelHandle model;
  if (!create_model(ec.a, ec.b, ec.sigma, model)) return false;
  double predicted = 0.0;
  slg_stationary_mean_prediction(model.ptr, &predicted);

  const double time_avg = slg_ensemble_time_avg_state(handle.ptr);
  CheckResult mean_check;
  mean_check.name = "time average within 2% of the stationary mean";
  mean_check.pass = std::abs(time_avg - predicted) <= 0.02 * predicted;
  mean_check.detail = {{"time_avg_state", time_avg},
                       {"predicted", predicted},
                       {"tolerance", 0.02 * predicted}};
  checks.push_back(mean_check);

  const double in_band = slg_ensemble_mean_in_band_fraction(handle.ptr);
  CheckResult band_check;
  band_check.name = "per-path time averages inside the open band";
  band_check.pass = in_band >= 0.99;
  band_check.detail = {{"fraction", in_band}, {"minimum", 0.99}};
  checks.push_back(band_check);
  return mean_check.pass && band_check.pass;
}

bool verify_convergence(int threads, std::vector<CheckResult>& checks) {
  const double dts[5] = {1.0 / 64, 1.0 / 128, 1.0 / 256, 1.0 / 512,
                         1.0 / 1024};
  struct Expect {
    slg_scheme scheme;
    const char* label;
    double lo, hi;
  };
  const Expect expects[] = {
      {SLG_SCHEME_EULER_MARUYAMA, "euler", 0.3, 0.7},
      {SLG_SCHEME_MILSTEIN, "milstein", 0.8, 1.2},
  };
  bool all = true;
  for (const Expect& expect : expects) {
    double slope = 0.0;
    double rms[5] = {};
    if (slg_convergence_order(1.5, 1.0, 0.25, 1.5, expect.scheme, dts, 5, 200,
                              42, 1.0, threads, &slope, rms) != SLG_OK) {
      std::cerr << "error: " << slg_last_error() << "\n";
      return false;
    }
    CheckResult check;
    check.name = std::string("strong order ") + expect.label;
    check.pass = slope >= expect.lo && slope <= expect.hi;
    check.detail = {{"slope", slope},
                    {"expected", {expect.lo, expect.hi}},
                    {"dts", std::vector<double>(dts, dts + 5)},
                    {"rms_errors", std::vector<double>(rms, rms + 5)}};
    all = all && check.pass;
    checks.push_back(std::move(check));
  }
  return all;
}

}  // namespace

int cmd_analyze(const RunConfig& cfg) {
  ModelHandle model;
  if (!create_model(cfg.a, cfg.b, cfg.sigma, model)) return 1;
  const nlohmann::json j = analysis_json(model.ptr);
  const std::string format = cfg.format.value_or("text");

  std::string stdout_text;
  if (format == "json") {
    stdout_text = j.dump(2) + "\n";
  } else if (format == "text") {
    std::ostringstream os;
    os << "regime            : " << j["regime"].get<std::string>() << "\n"
       << "carrying capacity : " << two_decimals(j["xstar"].get<double>())
       << "\n"
       << "band x1           : " << two_decimals(j["x1"].get<double>()) << "\n"
       << "band x2           : " << two_decimals(j["x2"].get<double>()) << "\n"
       << "sigma^2           : " << format_double(j["sigma_sq"].get<double>())
       << "\n"
       << "2a                : " << format_double(j["two_a"].get<double>())
       << "\n"
       << "margin 2a-sigma^2 : "
       << format_double(j["two_a"].get<double>() - j["sigma_sq"].get<double>())
       << "\n";
    stdout_text = os.str();
  } else {
    std::cerr << "error: analyze supports --format text|json\n";
    return 1;
  }
  std::cout << stdout_text;
  if (cfg.out.has_value()) {
    if (!write_text_output(cfg.out, std::cout, j.dump(2) + "\n")) return 1;
  }
  return 0;
}

int cmd_simulate(const RunConfig& cfg) {
  ModelHandle model;
  if (!create_model(cfg.a, cfg.b, cfg.sigma, model)) return 1;
  if (cfg.paths < 0) {
    std::cerr << "error: paths must be >= 0\n";
    return 1;
  }
  if (cfg.stride < 1) {
    std::cerr << "error: stride must be >= 1\n";
    return 1;
  }
  SimulatedSet set;
  set.times = grid_times(cfg.dt, cfg.n_steps());
  if (cfg.paths > 0 && !simulate_set(model.ptr, cfg, cfg.x0, cfg.paths, 0, set)) {
    return 1;
  }

  double x1 = 0.0;
  double x2 = 0.0;
  slg_model_band(model.ptr, &x1, &x2);
  nlohmann::json meta{
      {"schema_version", kSchemaVersion},
      {"kind", "trajectory_meta"},
      {"config", config_echo(cfg)},
      {"xstar", slg_model_carrying_capacity(model.ptr)},
      {"regime", slg_regime_name(slg_model_regime(model.ptr))},
      {"band", {{"x1", x1}, {"x2", x2}}},
  };
  nlohmann::json path_meta = nlohmann::json::array();
  for (std::size_t i = 0; i < set.paths.size(); ++i) {
    path_meta.push_back(path_meta_json(set.paths[i].ptr, std::int64_t(i)));
  }
  meta["paths"] = path_meta;

  const std::string format = cfg.format.value_or("csv");
  if (format == "csv") {
    std::vector<TrajectoryRows> rows;
    rows.reserve(set.paths.size());
    for (std::size_t i = 0; i < set.paths.size(); ++i) {
      rows.push_back({std::int64_t(i),
                      {slg_path_states(set.paths[i].ptr), set.times.size()}});
    }
    std::ostringstream os;
    write_trajectories_csv(os, set.times, rows, cfg.stride);
    if (!write_text_output(cfg.out, std::cout, os.str())) return 1;
    if (cfg.out.has_value()) {
      if (!write_text_output(*cfg.out + ".meta.json", std::cout,
                             meta.dump(2) + "\n")) {
        return 1;
      }
    }
    return 0;
  }
  if (format == "json") {
    nlohmann::json doc = meta;
    doc["kind"] = "trajectories";
    doc["times"] = strided(set.times, cfg.stride);
    nlohmann::json paths = nlohmann::json::array();
    for (std::size_t i = 0; i < set.paths.size(); ++i) {
      nlohmann::json entry = path_meta[i];
      entry["states"] = strided(
          {slg_path_states(set.paths[i].ptr), set.times.size()}, cfg.stride);
      paths.push_back(std::move(entry));
    }
    doc["paths"] = std::move(paths);
    if (!write_text_output(cfg.out, std::cout, doc.dump(2) + "\n")) return 1;
    return 0;
  }
  std::cerr << "error: simulate supports --format csv|json\n";
  return 1;
}

int cmd_ensemble(const RunConfig& cfg, int threads,
                 const std::vector<double>& dynkin_checkpoints) {
  if (cfg.format.has_value() && *cfg.format != "json") {
    std::cerr << "error: ensemble emits JSON only\n";
    return 1;
  }
  if (cfg.stride < 1) {
    std::cerr << "error: stride must be >= 1\n";
    return 1;
  }
  slg_ensemble_config ec;
  try {
    ec = ensemble_config_from(cfg, threads);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  EnsembleHandle handle;
  if (slg_run_ensemble(&ec,
                       dynkin_checkpoints.empty() ? nullptr
                                                  : dynkin_checkpoints.data(),
                       std::int64_t(dynkin_checkpoints.size()),
                       &handle.ptr) != SLG_OK) {
    std::cerr << "error: " << slg_last_error() << "\n";
    return 1;
  }
  const slg_ensemble* e = handle.ptr;
  const std::size_t n_points = std::size_t(slg_ensemble_n_points(e));
  const std::span<const double> times(slg_ensemble_times(e), n_points);
  const std::span<const double> mean(slg_ensemble_mean(e), n_points);
  const std::span<const double> variance(slg_ensemble_variance(e), n_points);
  std::vector<double> mean_se(n_points);
  for (std::size_t k = 0; k < n_points; ++k) {
    mean_se[k] = std::sqrt(variance[k] / double(cfg.paths));
  }

  ModelHandle model;
  if (!create_model(cfg.a, cfg.b, cfg.sigma, model)) return 1;
  double x1 = 0.0;
  double x2 = 0.0;
  slg_model_band(model.ptr, &x1, &x2);

  const std::size_t n_fpt = std::size_t(slg_ensemble_n_first_passage(e));
  const std::span<const double> fpt(slg_ensemble_first_passage_times(e),
                                    n_fpt);

  nlohmann::json dynkin = nlohmann::json::array();
  for (int64_t c = 0; c < slg_ensemble_n_dynkin(e); ++c) {
    double t = 0.0;
    double residual = 0.0;
    double mean_v = 0.0;
    double se = 0.0;
    int64_t surviving = 0;
    int64_t excluded = 0;
    slg_ensemble_dynkin(e, c, &t, &residual, &mean_v, &se, &surviving,
                        &excluded);
    dynkin.push_back({{"t", t},
                      {"residual", residual},
                      {"mean_v", mean_v},
                      {"mean_v_se", se},
                      {"surviving", surviving},
                      {"excluded", excluded}});
  }

  nlohmann::json doc{
      {"schema_version", kSchemaVersion},
      {"kind", "ensemble_stats"},
      {"config", config_echo(cfg)},
      {"xstar", slg_model_carrying_capacity(model.ptr)},
      {"regime", slg_regime_name(slg_model_regime(model.ptr))},
      {"band", {{"x1", x1}, {"x2", x2}}},
      {"band_occupancy", slg_ensemble_band_occupancy(e)},
      {"mean_in_band_fraction", slg_ensemble_mean_in_band_fraction(e)},
      {"extinct_fraction", slg_ensemble_extinct_fraction(e)},
      {"time_avg_state", slg_ensemble_time_avg_state(e)},
      {"time_avg_state_se", slg_ensemble_time_avg_state_se(e)},
      {"absorbed_count", slg_ensemble_absorbed_count(e)},
      {"clamp_count_total", slg_ensemble_clamp_count(e)},
      {"first_passage_quantiles", quantiles_json(fpt)},
      {"first_passage_times", std::vector<double>(fpt.begin(), fpt.end())},
      {"dynkin", std::move(dynkin)},
      {"times", strided(times, cfg.stride)},
      {"mean", strided(mean, cfg.stride)},
      {"var", strided(variance, cfg.stride)},
      {"mean_se", strided(mean_se, cfg.stride)},
  };
  if (!write_text_output(cfg.out, std::cout, doc.dump(2) + "\n")) return 1;
  return 0;
}

int cmd_figures(int figure_id, const std::string& out_dir,
                const RunConfig& cfg) {
  struct Group {
    double x0;           // ignored when at_band_edge != 0
    std::int64_t paths;
    int at_band_edge;    // 0: explicit x0, 1: start at x1, 2: start at x2
  };
  struct Figure {
    int id;
    double a, b, sigma;
    std::vector<Group> groups;
    double shown_x1, shown_x2;
    double x1_tol;  // display-rounding slack on x1
  };
  // Bundled datasets: parameters, initial conditions, and the 2-decimal
  // band endpoints each one must reproduce.
  static const std::vector<Figure> figures = {
      {1, 1.5, 1.0, 0.25, {{2.3, 10, 0}, {0.65, 10, 0}}, 1.28, 1.72, 0.0},
      {2, 1.5, 1.0, 0.025, {{2.3, 10, 0}, {0.65, 10, 0}}, 1.47, 1.52, 0.01},
      {3, 2.5, 1.0, 1.5, {{2.0, 1, 0}, {0.1, 1, 0}}, 0.82, 4.18, 0.0},
      {4, 1.5, 1.0, 0.5, {{0.0, 1, 1}, {0.0, 1, 2}}, 1.07, 1.93, 0.0},
      {5, 1.0, 1.0, 2.45, {{1.75, 1, 0}}, 0.0, 2.73, 0.0},
  };
  const Figure* figure = nullptr;
  for (const Figure& f : figures) {
    if (f.id == figure_id) figure = &f;
  }
  if (figure == nullptr) {
    std::cerr << "error: unknown figure id " << figure_id << " (expected 1-5)\n";
    return 1;
  }

  ModelHandle model;
  if (!create_model(figure->a, figure->b, figure->sigma, model)) return 1;
  double x1 = 0.0;
  double x2 = 0.0;
  slg_model_band(model.ptr, &x1, &x2);
  const double x1_err = std::abs(round2(x1) - figure->shown_x1);
  const double x2_err = std::abs(round2(x2) - figure->shown_x2);
  if (x1_err > figure->x1_tol + 1e-9 || x2_err > 1e-9) {
    std::cerr << "error: band endpoints (" << two_decimals(x1) << ", "
              << two_decimals(x2) << ") do not match the figure table ("
              << two_decimals(figure->shown_x1) << ", "
              << two_decimals(figure->shown_x2) << ")\n";
    return 1;
  }

  RunConfig run = cfg;
  run.a = figure->a;
  run.b = figure->b;
  run.sigma = figure->sigma;

  SimulatedSet set;
  nlohmann::json groups = nlohmann::json::array();
  std::uint64_t next_index = 0;
  for (const Group& group : figure->groups) {
    const double x0 = group.at_band_edge == 1   ? x1
                      : group.at_band_edge == 2 ? x2
                                                : group.x0;
    if (!simulate_set(model.ptr, run, x0, group.paths, next_index, set)) {
      return 1;
    }
    groups.push_back({{"x0", x0},
                      {"first_path_index", next_index},
                      {"n_paths", group.paths}});
    next_index += std::uint64_t(group.paths);
  }

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  const std::string stem = "fig" + std::to_string(figure_id);
  const std::string csv_path = out_dir + "/" + stem + "_paths.csv";
  const std::string meta_path = out_dir + "/" + stem + "_meta.json";

  std::vector<TrajectoryRows> rows;
  for (std::size_t i = 0; i < set.paths.size(); ++i) {
    rows.push_back({std::int64_t(i),
                    {slg_path_states(set.paths[i].ptr), set.times.size()}});
  }
  std::ostringstream os;
  write_trajectories_csv(os, set.times, rows, run.stride);
  if (!write_text_output(csv_path, std::cout, os.str())) return 1;

  nlohmann::json path_meta = nlohmann::json::array();
  for (std::size_t i = 0; i < set.paths.size(); ++i) {
    path_meta.push_back(path_meta_json(set.paths[i].ptr, std::int64_t(i)));
  }
  const nlohmann::json meta{
      {"schema_version", kSchemaVersion},
      {"kind", "figure_meta"},
      {"figure", figure_id},
      {"params",
       {{"a", figure->a}, {"b", figure->b}, {"sigma", figure->sigma}}},
      {"xstar", slg_model_carrying_capacity(model.ptr)},
      {"regime", slg_regime_name(slg_model_regime(model.ptr))},
      {"band", {{"x1", x1}, {"x2", x2}}},
      {"band_displayed",
       {{"x1", two_decimals(x1)}, {"x2", two_decimals(x2)}}},
      {"grid",
       {{"dt", run.dt}, {"t_end", run.t_end}, {"stride", run.stride}}},
      {"scheme", run.scheme},
      {"master_seed", run.seed},
      {"groups", groups},
      {"paths", path_meta},
      {"csv", stem + "_paths.csv"},
  };
  if (!write_text_output(meta_path, std::cout, meta.dump(2) + "\n")) return 1;
  std::cerr << "figure " << figure_id << ": wrote " << csv_path << " and "
            << meta_path << "\n";
  return 0;
}

int cmd_verify(const std::vector<std::string>& suites, int threads,
               const std::optional<std::string>& out) {
  std::vector<std::string> selected = suites;
  if (selected.empty()) {
    selected = {"signs", "dynkin", "stationary", "convergence"};
  }
  nlohmann::json report{{"schema_version", kSchemaVersion},
                        {"kind", "verify_report"}};
  nlohmann::json suites_json = nlohmann::json::array();
  bool all_pass = true;
  for (const std::string& name : selected) {
    std::vector<CheckResult> checks;
    bool pass = false;
    if (name == "signs") {
      pass = verify_signs(checks);
    } else if (name == "dynkin") {
      pass = verify_dynkin(threads, checks);
    } else if (name == "stationary") {
      pass = verify_stationary(threads, checks);
    } else if (name == "convergence") {
      pass = verify_convergence(threads, checks);
    } else {
      std::cerr << "error: unknown suite '" << name
                << "' (expected signs, dynkin, stationary, convergence)\n";
      return 1;
    }
    std::cerr << "suite " << name << ": " << (pass ? "PASS" : "FAIL") << "\n";
    suites_json.push_back(
        {{"name", name}, {"pass", pass}, {"checks", checks_json(checks)}});
    all_pass = all_pass && pass;
  }
  report["suites"] = std::move(suites_json);
  report["pass"] = all_pass;
  if (!write_text_output(out, std::cout, report.dump(2) + "\n")) return 1;
  return all_pass ? 0 : 2;
}

int cmd_convergence(const RunConfig& cfg, const std::string& schemes,
                    int threads) {
  std::vector<std::pair<slg_scheme, std::string>> selected;
  if (schemes == "both") {
    selected = {{SLG_SCHEME_EULER_MARUYAMA, "euler"},
                {SLG_SCHEME_MILSTEIN, "milstein"}};
  } else {
    selected = {{parse_scheme(schemes), schemes}};
  }
  std::vector<double> dts;
  for (int k = 6; k <= 10; ++k) dts.push_back(cfg.t_end / double(1 << k));

  nlohmann::json results = nlohmann::json::array();
  for (const auto& [scheme, label] : selected) {
    double slope = 0.0;
    std::vector<double> rms(dts.size(), 0.0);
    if (slg_convergence_order(cfg.a, cfg.b, cfg.sigma, cfg.x0, scheme,
                              dts.data(), std::int64_t(dts.size()), cfg.paths,
                              cfg.seed, cfg.t_end, threads, &slope,
                              rms.data()) != SLG_OK) {
      std::cerr << "error: " << slg_last_error() << "\n";
      return 1;
    }
    results.push_back({{"scheme", label},
                       {"slope", slope},
                       {"dts", dts},
                       {"rms_errors", rms}});
  }
  const nlohmann::json doc{
      {"schema_version", kSchemaVersion},
      {"kind", "convergence"},
      {"params", {{"a", cfg.a}, {"b", cfg.b}, {"sigma", cfg.sigma}}},
      {"x0", cfg.x0},
      {"t_end", cfg.t_end},
      {"n_paths", cfg.paths},
      {"seed", cfg.seed},
      {"results", std::move(results)},
  };
  if (!write_text_output(cfg.out, std::cout, doc.dump(2) + "\n")) return 1;
  return 0;
}

}  // namespace slgc
