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
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace slgc {

/// Shortest decimal form that round-trips the exact double.
std::string format_double(double value);

struct TrajectoryRows {
  std::int64_t path_index = 0;
  std::span<const double> states;
};

/// Header exactly `t,x,path_index`; rows path-major, every stride-th point.
void write_trajectories_csv(std::ostream& os, std::span<const double> times,
                            std::span<const TrajectoryRows> paths,
                            std::int64_t stride);

/// Sends `text` to the file when `out` is set, to `fallback` otherwise.
/// Returns false (with a diagnostic on stderr) on I/O failure.
bool write_text_output(const std::optional<std::string>& out,
                       std::ostream& fallback, const std::string& text);

nlohmann::json quantiles_json(std::span<const double> sorted_values);

std::vector<double> strided(std::span<const double> values,
                            std::int64_t stride);

}  // namespace slgc
