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

#include "stologistic/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace stologistic {

ModelParams::ModelParams(double a, double b, double sigma)
    : a_(a), b_(b), sigma_(sigma) {
  if (!std::isfinite(a) || a <= 0.0) {
    throw std::invalid_argument("ModelParams: a must be finite and > 0, got " +
                                std::to_string(a));
  }
  if (!std::isfinite(b) || b <= 0.0) {
    throw std::invalid_argument("ModelParams: b must be finite and > 0, got " +
                                std::to_string(b));
  }
  if (!std::isfinite(sigma)) {
    throw std::invalid_argument("ModelParams: sigma must be finite");
  }
}

std::string_view regime_name(Regime regime) {
  switch (regime) {
    case Regime::Deterministic:
      return "deterministic";
    case Regime::PersistentBand:
      return "persistent-band";
    case Regime::Critical:
      return "critical";
    case Regime::Extinction:
      return "extinction";
  }
  return "unknown";
}

double carrying_capacity(const ModelParams& p) {
  return p.carrying_capacity();
}

Regime classify_regime(const ModelParams& p) {
  if (p.sigma() == 0.0) return Regime::Deterministic;
  const double sigma_sq = p.sigma() * p.sigma();
  const double two_a = 2.0 * p.a();
  if (sigma_sq < two_a) return Regime::PersistentBand;
  if (sigma_sq == two_a) return Regime::Critical;
  return Regime::Extinction;
}

Band band_endpoints(const ModelParams& p) {
  const double xstar = p.carrying_capacity();
  if (p.sigma() == 0.0) return {xstar, xstar};
  const double ratio = std::abs(p.sigma()) / std::sqrt(2.0 * p.a());
  Band band;
  band.x2 = xstar * (1.0 + ratio);
  if (p.sigma() * p.sigma() < 2.0 * p.a()) {
    band.x1 = std::max(0.0, xstar * (1.0 - ratio));
  } else {
    band.x1 = 0.0;
  }
  return band;
}

double volterra_v(double x, double xstar) {
  if (!(x > 0.0)) {
    throw std::domain_error("volterra_v: x must be > 0");
  }
  if (!(xstar > 0.0)) {
    throw std::domain_error("volterra_v: xstar must be > 0");
  }
  const double r = x / xstar;
  return r - std::log(r) - 1.0;
}

double volterra_generator(double x, const ModelParams& p) {
  if (!(x > 0.0)) {
    throw std::domain_error("volterra_generator: x must be > 0");
  }
  const double xstar = p.carrying_capacity();
  const double d = x - xstar;
  return -(p.b() / xstar) * d * d + 0.5 * p.sigma() * p.sigma();
}

double khasminskii_v(double x, const ModelParams& p) {
  if (p.sigma() == 0.0) {
    throw std::domain_error("khasminskii_v: sigma must be nonzero");
  }
  const double exponent = 1.0 - 2.0 * p.a() / (p.sigma() * p.sigma());
  if (x == 0.0 && exponent <= 0.0) {
    throw std::domain_error("khasminskii_v: x == 0 with nonpositive exponent");
  }
  return std::pow(std::abs(x), exponent);
}

double khasminskii_generator(double x, const ModelParams& p) {
  return khasminskii_generator(x, p.a(), p.b(), p.sigma());
}

double khasminskii_generator(double x, double a, double b, double sigma) {
  if (!std::isfinite(a) || a <= 0.0) {
    throw std::invalid_argument("khasminskii_generator: a must be > 0");
  }
  if (!std::isfinite(b) || b < 0.0) {
    throw std::invalid_argument("khasminskii_generator: b must be >= 0");
  }
  if (sigma == 0.0) {
    throw std::domain_error("khasminskii_generator: sigma must be nonzero");
  }
  if (!(x > 0.0)) {
    throw std::domain_error("khasminskii_generator: x must be > 0");
  }
  const double q = 2.0 * a / (sigma * sigma);
  return -(1.0 - q) * b * std::pow(std::abs(x), 2.0 - q);
}

}  // namespace stologistic
