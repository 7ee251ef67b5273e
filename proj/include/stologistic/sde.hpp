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
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "stologistic/model.hpp"

namespace stologistic {

/// States at or below this value are set to 0 and the path stays there; the
/// origin is an exact equilibrium and the noise is multiplicative, so
/// absorption is the model-consistent way to handle explicit-scheme
/// overshoot.
inline constexpr double kDefaultAbsorbEps = 1e-8;

/// Uniform time grid.  The horizon T = dt * n_steps is always derived.
class SimGrid {
 public:
  SimGrid(double dt, std::int64_t n_steps);

  double dt() const { return dt_; }
  std::int64_t n_steps() const { return n_steps_; }
  std::int64_t n_points() const { return n_steps_ + 1; }
  double horizon() const { return dt_ * double(n_steps_); }
  double time_at(std::int64_t k) const { return dt_ * double(k); }

 private:
  double dt_;
  std::int64_t n_steps_;
};

enum class Scheme {
  EulerMaruyama,
  Milstein,
  Reference,  ///< pathwise closed form; no absorption, oracle use only
};

std::string_view scheme_name(Scheme scheme);

/// Identifies one noise stream.  The increment sequence is a pure function
/// of (master_seed, path_index, grid), independent of execution order and
/// thread count.
struct NoiseStream {
  std::uint64_t master_seed = 0;
  std::uint64_t path_index = 0;
};

/// One simulated trajectory.
struct Path {
  std::vector<double> times;
  std::vector<double> states;
  Scheme scheme = Scheme::Milstein;
  std::uint64_t master_seed = 0;
  std::uint64_t path_index = 0;
  /// Set iff the path reached the absorption threshold; every later state
  /// is exactly 0.
  std::optional<double> absorbed_at;
  /// How often a raw post-step value was negative and had to be clamped.
  /// Nonzero counts in a persistent regime flag a too-coarse dt.
  std::int64_t clamp_count = 0;
};

/// n_steps i.i.d. N(0, dt) Wiener increments for the given stream.
std::vector<double> wiener_increments(const NoiseStream& stream,
                                      const SimGrid& grid);
void wiener_increments_into(const NoiseStream& stream, const SimGrid& grid,
                            std::span<double> out);

/// Explicit Euler-Maruyama update
///     x' = max(0, x + (a x - b x^2) dt + sigma x dW),
/// followed by absorption at absorb_eps.
double step_euler_maruyama(double x, const ModelParams& p, double dt,
                           double dw, double absorb_eps = kDefaultAbsorbEps);

/// Milstein update: the Euler-Maruyama value plus the multiplicative-noise
/// correction sigma^2 x (dW^2 - dt) / 2, clamped and absorbed the same way.
double step_milstein(double x, const ModelParams& p, double dt, double dw,
                     double absorb_eps = kDefaultAbsorbEps);

/// Simulates one path of length n_steps + 1 with the chosen scheme, driven
/// by wiener_increments(stream, grid).  x0 must exceed absorb_eps.
Path simulate_path(const ModelParams& p, double x0, const SimGrid& grid,
                   Scheme scheme, const NoiseStream& stream,
                   double absorb_eps = kDefaultAbsorbEps);

/// Same, driven by caller-supplied increments (size must equal n_steps).
Path simulate_path(const ModelParams& p, double x0, const SimGrid& grid,
                   Scheme scheme, std::span<const double> increments,
                   double absorb_eps = kDefaultAbsorbEps);

/// Pathwise exact solution on a fine grid, used as the strong-convergence
/// oracle.  The substitution y = 1/x linearizes the equation to
///     dy = (b + (sigma^2 - a) y) dt - sigma y dw,
/// whose variation-of-constants solution gives
///     x(t) = x0 E(t) / (1 + b x0 Int_0^t E(s) ds),
///     E(t) = exp((a - sigma^2/2) t + sigma w(t)).
/// w is the cumulative sum of the stream's increments and the integral is
/// evaluated by the trapezoid rule, so the fine dt should be well below any
/// scheme dt the result is compared against.  sigma = 0 reduces to the
/// classical logistic solution, b = 0 to geometric Brownian motion.
Path reference_path(const ModelParams& p, double x0, const SimGrid& fine_grid,
                    const NoiseStream& stream);
Path reference_path(const ModelParams& p, double x0, const SimGrid& fine_grid,
                    std::span<const double> increments);

namespace detail {

struct SimMeta {
  std::int64_t absorbed_index = -1;  // -1: never absorbed
  std::int64_t clamp_count = 0;
};

/// Core stepping loop writing n_steps + 1 states into a caller buffer.
SimMeta simulate_states(const ModelParams& p, double x0, const SimGrid& grid,
                        Scheme scheme, std::span<const double> increments,
                        double absorb_eps, std::span<double> states);

void reference_states(const ModelParams& p, double x0, const SimGrid& grid,
                      std::span<const double> increments,
                      std::span<double> states);

}  // namespace detail

}  // namespace stologistic
