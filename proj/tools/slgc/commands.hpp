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

#include <optional>
#include <string>
#include <vector>

#include "run_config.hpp"

namespace slgc {

int cmd_analyze(const RunConfig& cfg);
int cmd_simulate(const RunConfig& cfg);
int cmd_ensemble(const RunConfig& cfg, int threads,
                 const std::vector<double>& dynkin_checkpoints);
int cmd_figures(int figure_id, const std::string& out_dir,
                const RunConfig& cfg);
int cmd_verify(const std::vector<std::string>& suites, int threads,
               const std::optional<std::string>& out);
int cmd_convergence(const RunConfig& cfg, const std::string& schemes,
                    int threads);

}  // namespace slgc
