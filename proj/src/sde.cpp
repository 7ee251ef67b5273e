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

#include "stologistic/sde.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "stologistic/rng.hpp"

namespace stologistic {

SimGrid::SimGrid(double dt, std::int64_t n_steps) : dt_(dt), n_steps_(n_steps) {
  if (!std::isfinite(dt) || dt <= 0.0) {
    throw std::invalid_argument("SimGrid: dt must be finite and > 0");
  }
  if (n_steps < 1) {
    throw std::invalid_argument("SimGrid: n_steps must be >= 1");
  }
}

std::string_view scheme_name(Scheme scheme) {
  switch (scheme) {
    case Scheme::EulerMaruyama:
      return "euler";
    case Scheme::Milstein:
      return "milstein";
    case Scheme::Reference:
      return "reference";
  }
  return "unknown";
}

std::vector<double> wiener_increments(const NoiseStream& stream,
                                      const SimGrid& grid) {
  std::vector<double> out(std::size_t(grid.n_steps()));
  wiener_increments_into(stream, grid, out);
  return out;
}

void wiener_increments_into(const NoiseStream& stream, const SimGrid& grid,
                            std::span<double> out) {
  if (out.size() != std::size_t(grid.n_steps())) {
    throw std::invalid_argument("wiener_increments: buffer/grid size mismatch");
  }
  rng::fill_gaussian(stream.master_seed, stream.path_index, out,
                     std::sqrt(grid.dt()));
}

namespace {

inline double absorb(double value, double absorb_eps) {
  if (value < 0.0) value = 0.0;
  return value <= absorb_eps ? 0.0 : value;
}

void check_step_args(double x, double dt) {
  if (!(x >= 0.0)) {
    throw std::domain_error("step: x must be >= 0");
  }
  if (!(dt > 0.0)) {
    throw std::invalid_argument("step: dt must be > 0");
  }
}

}  // namespace

double step_euler_maruyama(double x, const ModelParams& p, double dt,
                           double dw, double absorb_eps) {
  check_step_args(x, dt);
  const double value = x + drift(x, p) * dt + diffusion(x, p) * dw;
  return absorb(value, absorb_eps);
}

double step_milstein(double x, const ModelParams& p, double dt, double dw,
                     double absorb_eps) {
  check_step_args(x, dt);
  const double sigma = p.sigma();
  const double value = x + drift(x, p) * dt + diffusion(x, p) * dw +
                       0.5 * sigma * sigma * x * (dw * dw - dt);
  return absorb(value, absorb_eps);
}

namespace detail {

SimMeta simulate_states(const ModelParams& p, double x0, const SimGrid& grid,
                        Scheme scheme, std::span<const double> increments,
                        double absorb_eps, std::span<double> states) {
  const std::int64_t n = grid.n_steps();
  if (increments.size() != std::size_t(n)) {
    throw std::invalid_argument("simulate_states: increment/grid size mismatch");
  }
  if (states.size() != std::size_t(n + 1)) {
    throw std::invalid_argument("simulate_states: state/grid size mismatch");
  }
  if (!(absorb_eps >= 0.0)) {
    throw std::invalid_argument("simulate_states: absorb_eps must be >= 0");
  }
  if (!(x0 > absorb_eps)) {
    throw std::invalid_argument(
        "simulate_states: x0 must exceed the absorption threshold");
  }
  if (scheme == Scheme::Reference) {
    reference_states(p, x0, grid, increments, states);
    return {};
  }

  const double a = p.a();
  const double b = p.b();
  const double sigma = p.sigma();
  const double dt = grid.dt();
  const bool milstein = scheme == Scheme::Milstein;

  SimMeta meta;
  states[0] = x0;
  double x = x0;
  for (std::int64_t k = 1; k <= n; ++k) {
    const double dw = increments[std::size_t(k - 1)];
    double value = x + (a * x - b * x * x) * dt + sigma * x * dw;
    if (milstein) {
      value += 0.5 * sigma * sigma * x * (dw * dw - dt);
    }
    if (value < 0.0) {
      ++meta.clamp_count;
      value = 0.0;
    }
    if (value <= absorb_eps) {
      meta.absorbed_index = k;
      // Zero is invariant: fill the tail and stop stepping.
      for (std::int64_t j = k; j <= n; ++j) states[std::size_t(j)] = 0.0;
      return meta;
    }
    x = value;
    states[std::size_t(k)] = x;
  }
  return meta;
}

void reference_states(const ModelParams& p, double x0, const SimGrid& grid,
                      std::span<const double> increments,
                      std::span<double> states) {
  const std::int64_t n = grid.n_steps();
  if (increments.size() != std::size_t(n)) {
    throw std::invalid_argument("reference_states: increment/grid size mismatch");
  }
  if (states.size() != std::size_t(n + 1)) {
    throw std::invalid_argument("reference_states: state/grid size mismatch");
  }
  if (!(x0 > 0.0)) {
    throw std::invalid_argument("reference_states: x0 must be > 0");
  }
  const double b = p.b();
  const double sigma = p.sigma();
  const double mu = p.a() - 0.5 * sigma * sigma;
  const double dt = grid.dt();

  states[0] = x0;
  double w = 0.0;
  double growth_prev = 1.0;  // E(0)
  double integral = 0.0;     // trapezoid of E over [0, t_k]
  for (std::int64_t k = 1; k <= n; ++k) {
    w += increments[std::size_t(k - 1)];
    const double growth = std::exp(mu * grid.time_at(k) + sigma * w);
    integral += 0.5 * dt * (growth_prev + growth);
    states[std::size_t(k)] = x0 * growth / (1.0 + b * x0 * integral);
    growth_prev = growth;
  }
}

}  // namespace detail

namespace {

Path make_path(const ModelParams& p, double x0, const SimGrid& grid,
               Scheme scheme, std::span<const double> increments,
               double absorb_eps, std::uint64_t master_seed,
               std::uint64_t path_index) {
  Path path;
  path.scheme = scheme;
  path.master_seed = master_seed;
  path.path_index = path_index;
  path.times.resize(std::size_t(grid.n_points()));
  for (std::int64_t k = 0; k <= grid.n_steps(); ++k) {
    path.times[std::size_t(k)] = grid.time_at(k);
  }
  path.states.resize(std::size_t(grid.n_points()));
  const auto meta = detail::simulate_states(p, x0, grid, scheme, increments,
                                            absorb_eps, path.states);
  path.clamp_count = meta.clamp_count;
  if (meta.absorbed_index >= 0) {
    path.absorbed_at = grid.time_at(meta.absorbed_index);
  }
  return path;
}

}  // namespace

Path simulate_path(const ModelParams& p, double x0, const SimGrid& grid,
                   Scheme scheme, const NoiseStream& stream,
                   double absorb_eps) {
  const auto increments = wiener_increments(stream, grid);
  return make_path(p, x0, grid, scheme, increments, absorb_eps,
                   stream.master_seed, stream.path_index);
}

Path simulate_path(const ModelParams& p, double x0, const SimGrid& grid,
                   Scheme scheme, std::span<const double> increments,
                   double absorb_eps) {
  return make_path(p, x0, grid, scheme, increments, absorb_eps, 0, 0);
}

Path reference_path(const ModelParams& p, double x0, const SimGrid& fine_grid,
                    const NoiseStream& stream) {
  const auto increments = wiener_increments(stream, fine_grid);
  Path path = make_path(p, x0, fine_grid, Scheme::Reference, increments, 0.0,
                        stream.master_seed, stream.path_index);
  return path;
}

Path reference_path(const ModelParams& p, double x0, const SimGrid& fine_grid,
                    std::span<const double> increments) {
  return make_path(p, x0, fine_grid, Scheme::Reference, increments, 0.0, 0, 0);
}

}  // namespace stologistic
