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

#include <string_view>

namespace stologistic {

/// Qualitative regime of dx = (a x - b x^2) dt + sigma x dw, decided by
/// comparing sigma^2 against 2a with exact floating-point comparison.
/// Regimes are definitions, not measurements, so no tolerance is applied.
enum class Regime {
  Deterministic,   ///< sigma == 0
  PersistentBand,  ///< 0 < sigma^2 < 2a: solutions oscillate around (x1, x2)
  Critical,        ///< sigma^2 == 2a exactly
  Extinction,      ///< sigma^2 > 2a: extinction occurs with probability one
};

std::string_view regime_name(Regime regime);

/// Endpoints of the oscillation band: the closure of the interval where the
/// Volterra generator is positive.  x1 <= x* <= x2 always; x1 == 0 exactly
/// when sigma^2 >= 2a, and x1 == x2 == x* when sigma == 0.
struct Band {
  double x1 = 0.0;
  double x2 = 0.0;
};

/// Parameters of the stochastic logistic equation
///     dx = (a x - b x^2) dt + sigma x dw.
/// a and b must be strictly positive and finite.  sigma may be any finite
/// real; it enters every derived quantity through sigma^2 or |sigma|, so
/// -sigma is equivalent to sigma.
class ModelParams {
 public:
  /// Throws std::invalid_argument unless a > 0, b > 0 and all values finite.
  ModelParams(double a, double b, double sigma);

  double a() const { return a_; }
  double b() const { return b_; }
  double sigma() const { return sigma_; }

  /// Carrying capacity x* = a / b, the positive equilibrium of the
  /// deterministic equation.
  double carrying_capacity() const { return a_ / b_; }

 private:
  double a_;
  double b_;
  double sigma_;
};

/// Drift a x - b x^2.
inline double drift(double x, const ModelParams& p) {
  return p.a() * x - p.b() * x * x;
}

/// Diffusion sigma x.
inline double diffusion(double x, const ModelParams& p) {
  return p.sigma() * x;
}

double carrying_capacity(const ModelParams& p);

Regime classify_regime(const ModelParams& p);

/// Band endpoints x2 = x* (1 + |sigma| / sqrt(2a)) for every sigma, and
/// x1 = x* (1 - |sigma| / sqrt(2a)) while sigma^2 < 2a, else x1 = 0.
Band band_endpoints(const ModelParams& p);

/// Volterra function v(x) = x/x* - ln(x/x*) - 1, defined for x > 0.
/// Nonnegative, zero only at x*, decreasing on (0, x*) and increasing on
/// (x*, inf).  Throws std::domain_error for x <= 0.
double volterra_v(double x, double xstar);

/// Generator of the model applied to the Volterra function:
///     Lv(x) = -(b / x*) (x - x*)^2 + sigma^2 / 2.
/// Positive exactly on (x1, x2), zero at the endpoints, with maximum
/// sigma^2 / 2 attained at x*.  Throws std::domain_error for x <= 0.
double volterra_generator(double x, const ModelParams& p);

/// Khasminskii function V(x) = |x|^(1 - 2a/sigma^2).  Requires sigma != 0;
/// additionally rejects x == 0 when the exponent is not positive.
double khasminskii_v(double x, const ModelParams& p);

/// Generator applied to the Khasminskii function:
///     LV(x) = -(1 - 2a/sigma^2) b |x|^(2 - 2a/sigma^2).
/// Nonpositive for sigma^2 > 2a (stabilisation by noise), positive for
/// 0 < sigma^2 < 2a, identically zero when sigma^2 == 2a or b == 0.
/// Requires sigma != 0 and x > 0.
double khasminskii_generator(double x, const ModelParams& p);

/// Evaluation-only overload that admits b == 0 (the pure stabilisation
/// case, which ModelParams excludes).
double khasminskii_generator(double x, double a, double b, double sigma);

}  // namespace stologistic
