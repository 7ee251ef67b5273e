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

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "run_config.hpp"
#include "stologistic/stologistic.h"

namespace {

// Mutable staging area for flag values; only flags the user actually set
// override the config file, which overrides the built-in defaults.
struct Flags {
  slgc::RunConfig values;
  std::string config_path;

  void add_model(CLI::App* cmd) {
    cmd->add_option("--a", values.a, "growth rate a (> 0)");
    cmd->add_option("--b", values.b, "crowding coefficient b (> 0)");
    cmd->add_option("--sigma", values.sigma, "noise intensity sigma");
    cmd->add_option("--config", config_path, "JSON config file");
  }

  void add_simulation(CLI::App* cmd) {
    cmd->add_option("--x0", values.x0, "initial state (> 0)");
    cmd->add_option("--dt", values.dt, "time step");
    cmd->add_option("--t-end", values.t_end, "horizon (multiple of dt)");
    cmd->add_option("--paths", values.paths, "number of paths");
    cmd->add_option("--seed", values.seed, "master seed");
    cmd->add_option("--scheme", values.scheme,
                    "euler | milstein | reference");
    cmd->add_option("--absorb-eps", values.absorb_eps,
                    "absorption threshold");
    cmd->add_option("--stride", values.stride,
                    "emit every stride-th grid point");
  }

  void add_ensemble(CLI::App* cmd) {
    cmd->add_option("--burn-in", values.burn_in,
                    "discard interval before statistics (default t_end/2)");
    cmd->add_option("--threshold", values.threshold,
                    "extinction threshold for first-passage times");
    cmd->add_option("--min-surviving", values.min_surviving,
                    "minimum surviving paths behind reported expectations");
  }

  void add_output(CLI::App* cmd) {
    cmd->add_option("--out", values.out, "output file (default stdout)");
    cmd->add_option("--format", values.format, "output format");
  }

  slgc::RunConfig resolve(CLI::App* cmd, slgc::RunConfig defaults) const {
    slgc::RunConfig cfg = defaults;
    if (cmd->get_option_no_throw("--config") != nullptr &&
        cmd->count("--config") > 0) {
      cfg = slgc::load_config_file(config_path, cfg);
    }
    auto take = [&](const char* flag, auto member) {
      if (cmd->get_option_no_throw(flag) != nullptr && cmd->count(flag) > 0) {
        cfg.*member = values.*member;
      }
    };
    take("--a", &slgc::RunConfig::a);
    take("--b", &slgc::RunConfig::b);
    take("--sigma", &slgc::RunConfig::sigma);
    take("--x0", &slgc::RunConfig::x0);
    take("--dt", &slgc::RunConfig::dt);
    take("--t-end", &slgc::RunConfig::t_end);
    take("--paths", &slgc::RunConfig::paths);
    take("--seed", &slgc::RunConfig::seed);
    take("--scheme", &slgc::RunConfig::scheme);
    take("--absorb-eps", &slgc::RunConfig::absorb_eps);
    take("--stride", &slgc::RunConfig::stride);
    take("--threshold", &slgc::RunConfig::threshold);
    take("--min-surviving", &slgc::RunConfig::min_surviving);
    take("--burn-in", &slgc::RunConfig::burn_in);
    take("--out", &slgc::RunConfig::out);
    take("--format", &slgc::RunConfig::format);
    return cfg;
  }
};

template <typename Fn>
void run_command(int& rc, Fn&& fn) {
  try {
    rc = fn();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    rc = 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "band analysis and reproducible Monte-Carlo simulation of the "
      "stochastic logistic equation dx = (a x - b x^2) dt + sigma x dw"};
  app.require_subcommand(1);
  app.set_version_flag("--version", SLG_VERSION_STRING);
  int rc = 0;

  // analyze
  auto analyze_flags = std::make_shared<Flags>();
  CLI::App* analyze =
      app.add_subcommand("analyze", "print band endpoints and regime");
  analyze_flags->add_model(analyze);
  analyze_flags->add_output(analyze);
  analyze->callback([&rc, analyze, analyze_flags] {
    run_command(rc, [&] {
      return slgc::cmd_analyze(analyze_flags->resolve(analyze, {}));
    });
  });

  // simulate
  auto simulate_flags = std::make_shared<Flags>();
  CLI::App* simulate =
      app.add_subcommand("simulate", "emit trajectories as CSV or JSON");
  simulate_flags->add_model(simulate);
  simulate_flags->add_simulation(simulate);
  simulate_flags->add_output(simulate);
  simulate->callback([&rc, simulate, simulate_flags] {
    run_command(rc, [&] {
      return slgc::cmd_simulate(simulate_flags->resolve(simulate, {}));
    });
  });

  // ensemble
  auto ensemble_flags = std::make_shared<Flags>();
  auto ensemble_threads = std::make_shared<int>(0);
  auto dynkin_checkpoints = std::make_shared<std::vector<double>>();
  CLI::App* ensemble = app.add_subcommand(
      "ensemble", "run a path ensemble and emit its statistics as JSON");
  ensemble_flags->add_model(ensemble);
  ensemble_flags->add_simulation(ensemble);
  ensemble_flags->add_ensemble(ensemble);
  ensemble_flags->add_output(ensemble);
  ensemble->add_option("--threads", *ensemble_threads,
                       "worker threads (0 = hardware); results identical");
  ensemble->add_option("--dynkin", *dynkin_checkpoints,
                       "checkpoint times for the integral-identity residual")
      ->delimiter(',');
  ensemble->callback([&rc, ensemble, ensemble_flags, ensemble_threads,
                      dynkin_checkpoints] {
    run_command(rc, [&] {
      slgc::RunConfig defaults;
      defaults.paths = 1000;
      return slgc::cmd_ensemble(ensemble_flags->resolve(ensemble, defaults),
                                *ensemble_threads, *dynkin_checkpoints);
    });
  });

  // figures
  auto figures_flags = std::make_shared<Flags>();
  auto figure_id = std::make_shared<int>(0);
  auto out_dir = std::make_shared<std::string>();
  if (const char* env = std::getenv("STOLOGISTIC_OUT_DIR")) {
    *out_dir = env;
  } else {
    *out_dir = ".";
  }
  CLI::App* figures = app.add_subcommand(
      "figures", "emit one of the five bundled demonstration datasets");
  figures->add_option("id", *figure_id, "figure id (1-5)")->required();
  figures->add_option("--out-dir", *out_dir,
                      "output directory (default $STOLOGISTIC_OUT_DIR or .)");
  figures->add_option("--dt", figures_flags->values.dt, "time step");
  figures->add_option("--t-end", figures_flags->values.t_end, "horizon");
  figures->add_option("--seed", figures_flags->values.seed, "master seed");
  figures->add_option("--scheme", figures_flags->values.scheme,
                      "euler | milstein | reference");
  figures->add_option("--stride", figures_flags->values.stride,
                      "emit every stride-th grid point");
  figures->callback([&rc, figures, figures_flags, figure_id, out_dir] {
    run_command(rc, [&] {
      slgc::RunConfig defaults;
      defaults.stride = 50;
      return slgc::cmd_figures(*figure_id, *out_dir,
                               figures_flags->resolve(figures, defaults));
    });
  });

  // verify
  auto suites = std::make_shared<std::vector<std::string>>();
  auto verify_threads = std::make_shared<int>(0);
  auto verify_out = std::make_shared<std::string>();
  CLI::App* verify = app.add_subcommand(
      "verify", "run the built-in verification suites and report JSON");
  verify->add_option("suite", *suites,
                     "signs, dynkin, stationary, convergence (default all)");
  verify->add_option("--threads", *verify_threads, "worker threads");
  verify->add_option("--out", *verify_out, "report file (default stdout)");
  verify->callback([&rc, verify, suites, verify_threads, verify_out] {
    run_command(rc, [&] {
      std::optional<std::string> out;
      if (verify->count("--out") > 0) out = *verify_out;
      return slgc::cmd_verify(*suites, *verify_threads, out);
    });
  });

  // convergence
  auto conv_flags = std::make_shared<Flags>();
  auto conv_threads = std::make_shared<int>(0);
  auto conv_schemes = std::make_shared<std::string>("both");
  CLI::App* convergence = app.add_subcommand(
      "convergence", "strong-order study against the pathwise reference");
  conv_flags->add_model(convergence);
  convergence->add_option("--x0", conv_flags->values.x0,
                          "initial state (default: carrying capacity)");
  convergence->add_option("--t-end", conv_flags->values.t_end, "horizon");
  convergence->add_option("--paths", conv_flags->values.paths,
                          "number of paths");
  convergence->add_option("--seed", conv_flags->values.seed, "master seed");
  convergence->add_option("--schemes", *conv_schemes,
                          "euler | milstein | both");
  convergence->add_option("--threads", *conv_threads, "worker threads");
  convergence->add_option("--out", conv_flags->values.out, "output file");
  convergence->callback([&rc, convergence, conv_flags, conv_threads,
                         conv_schemes] {
    run_command(rc, [&] {
      slgc::RunConfig defaults;
      defaults.t_end = 1.0;
      defaults.paths = 200;
      slgc::RunConfig cfg = conv_flags->resolve(convergence, defaults);
      if (convergence->count("--x0") == 0) cfg.x0 = cfg.a / cfg.b;
      return slgc::cmd_convergence(cfg, *conv_schemes, *conv_threads);
    });
  });

  CLI11_PARSE(app, argc, argv);
  return rc;
}
