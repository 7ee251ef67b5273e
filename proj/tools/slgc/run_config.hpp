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
#include <string>

#include <json.hpp>

#include "stologistic/stologistic.h"

namespace slgc {

inline constexpr int kSchemaVersion = 1;

/// One flat, JSON-serializable bag of settings shared by every subcommand.
/// Precedence: built-in defaults < config file < command-line flags.
struct RunConfig {
  double a = 1.5;
  double b = 1.0;
  double sigma = 0.25;
  double x0 = 2.3;
  double dt = 1e-3;
  double t_end = 50.0;
  std::int64_t paths = 10;
  std::uint64_t seed = 42;
  std::string scheme = "milstein";
  std::optional<double> burn_in;  ///< absent: t_end / 2
  double threshold = 1e-6;
  double absorb_eps = 1e-8;
  std::int64_t min_surviving = 100;  ///< floor under any reported expectation
  std::int64_t stride = 1;  ///< emission subsampling; statistics use the full grid
  std::optional<std::string> format;
  std::optional<std::string> out;

  bool operator==(const RunConfig&) const = default;

  double resolved_burn_in() const {
    return burn_in.has_value() ? *burn_in : t_end / 2.0;
  }

  /// Number of steps implied by (dt, t_end); throws unless t_end is a
  /// multiple of dt.
  std::int64_t n_steps() const;
};

nlohmann::json to_json(const RunConfig& cfg);

/// Applies the keys present in `j` on top of `base`; rejects unknown keys
/// and a schema_version other than the current one.
RunConfig config_from_json(const nlohmann::json& j, RunConfig base = {});

/// Reads a JSON config file and overlays it on `base`.
RunConfig load_config_file(const std::string& path, RunConfig base = {});

slg_scheme parse_scheme(const std::string& name);

}  // namespace slgc
