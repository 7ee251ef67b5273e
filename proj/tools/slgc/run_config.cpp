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

#include "run_config.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace slgc {

std::int64_t RunConfig::n_steps() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("dt must be finite and > 0");
  }
  if (!(t_end > 0.0) || !std::isfinite(t_end)) {
    throw std::invalid_argument("t_end must be finite and > 0");
  }
  const std::int64_t n = std::llround(t_end / dt);
  if (n < 1 || std::abs(double(n) * dt - t_end) > 1e-9 * std::max(1.0, t_end)) {
    throw std::invalid_argument("t_end must be a multiple of dt");
  }
  return n;
}

nlohmann::json to_json(const RunConfig& cfg) {
  nlohmann::json j{
      {"schema_version", kSchemaVersion},
      {"a", cfg.a},
      {"b", cfg.b},
      {"sigma", cfg.sigma},
      {"x0", cfg.x0},
      {"dt", cfg.dt},
      {"t_end", cfg.t_end},
      {"paths", cfg.paths},
      {"seed", cfg.seed},
      {"scheme", cfg.scheme},
      {"threshold", cfg.threshold},
      {"absorb_eps", cfg.absorb_eps},
      {"min_surviving", cfg.min_surviving},
      {"stride", cfg.stride},
  };
  if (cfg.burn_in.has_value()) j["burn_in"] = *cfg.burn_in;
  if (cfg.format.has_value()) j["format"] = *cfg.format;
  if (cfg.out.has_value()) j["out"] = *cfg.out;
  return j;
}

RunConfig config_from_json(const nlohmann::json& j, RunConfig base) {
  if (!j.is_object()) {
    throw std::invalid_argument("config must be a JSON object");
  }
  for (const auto& [key, value] : j.items()) {
    if (key == "schema_version") {
      if (value.get<int>() != kSchemaVersion) {
        throw std::invalid_argument("unsupported schema_version");
      }
    } else if (key == "a") {
      base.a = value.get<double>();
    } else if (key == "b") {
      base.b = value.get<double>();
    } else if (key == "sigma") {
      base.sigma = value.get<double>();
    } else if (key == "x0") {
      base.x0 = value.get<double>();
    } else if (key == "dt") {
      base.dt = value.get<double>();
    } else if (key == "t_end") {
      base.t_end = value.get<double>();
    } else if (key == "paths") {
      base.paths = value.get<std::int64_t>();
    } else if (key == "seed") {
      base.seed = value.get<std::uint64_t>();
    } else if (key == "scheme") {
      base.scheme = value.get<std::string>();
    } else if (key == "burn_in") {
      base.burn_in = value.get<double>();
    } else if (key == "threshold") {
      base.threshold = value.get<double>();
    } else if (key == "absorb_eps") {
      base.absorb_eps = value.get<double>();
    } else if (key == "min_surviving") {
      base.min_surviving = value.get<std::int64_t>();
    } else if (key == "stride") {
      base.stride = value.get<std::int64_t>();
    } else if (key == "format") {
      base.format = value.get<std::string>();
    } else if (key == "out") {
      base.out = value.get<std::string>();
    } else {
      throw std::invalid_argument("unknown config key: " + key);
    }
  }
  return base;
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open config file: " + path);
  }
  nlohmann::json j;
  in >> j;
  return config_from_json(j, base);
}

slg_scheme parse_scheme(const std::string& name) {
  if (name == "euler" || name == "euler-maruyama") {
    return SLG_SCHEME_EULER_MARUYAMA;
  }
  if (name == "milstein") return SLG_SCHEME_MILSTEIN;
  if (name == "reference") return SLG_SCHEME_REFERENCE;
  throw std::invalid_argument("unknown scheme: " + name +
                              " (expected euler, milstein or reference)");
}

}  // namespace slgc
