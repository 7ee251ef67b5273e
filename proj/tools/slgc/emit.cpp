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

#include "emit.hpp"

#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iostream>

namespace slgc {

std::string format_double(double value) {
  char buf[32];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

void write_trajectories_csv(std::ostream& os, std::span<const double> times,
                            std::span<const TrajectoryRows> paths,
                            std::int64_t stride) {
  os << "t,x,path_index\n";
  std::string line;
  for (const TrajectoryRows& path : paths) {
    for (std::size_t k = 0; k < times.size(); k += std::size_t(stride)) {
      line.clear();
      line += format_double(times[k]);
      line += ',';
      line += format_double(path.states[k]);
      line += ',';
      line += std::to_string(path.path_index);
      line += '\n';
      os << line;
    }
  }
}

bool write_text_output(const std::optional<std::string>& out,
                       std::ostream& fallback, const std::string& text) {
  if (!out.has_value()) {
    fallback << text;
    return true;
  }
  std::ofstream file(*out, std::ios::binary);
  if (!file) {
    std::cerr << "error: cannot open " << *out << " for writing\n";
    return false;
  }
  file << text;
  file.flush();
  if (!file) {
    std::cerr << "error: failed writing " << *out << "\n";
    return false;
  }
  return true;
}

nlohmann::json quantiles_json(std::span<const double> sorted_values) {
  if (sorted_values.empty()) return nullptr;
  auto pick = [&](double p) {
    const auto idx =
        std::size_t(std::llround(p * double(sorted_values.size() - 1)));
    return sorted_values[idx];
  };
  return nlohmann::json{
      {"p10", pick(0.10)}, {"p50", pick(0.50)}, {"p90", pick(0.90)}};
}

std::vector<double> strided(std::span<const double> values,
                            std::int64_t stride) {
  std::vector<double> out;
  out.reserve(values.size() / std::size_t(stride) + 1);
  for (std::size_t k = 0; k < values.size(); k += std::size_t(stride)) {
    out.push_back(values[k]);
  }
  return out;
}

}  // namespace slgc
