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

#include <array>
#include <cstdint>
#include <span>

namespace stologistic::rng {

// Counter-based generation: every output is a pure function of
// (key, stream, position), so streams can be evaluated in any order, on any
// number of threads, with bit-identical results.

/// One block of Philox4x32 with 10 rounds (Salmon et al., SC'11 constants).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Fills out[i] = scale * z_i with z_i standard normal.  z_(2j) and z_(2j+1)
/// come from the Philox block at counter (stream, j) via a Box-Muller pair,
/// so the sequence depends only on (key, stream) and the index range.
void fill_gaussian(std::uint64_t key, std::uint64_t stream,
                   std::span<double> out, double scale);

}  // namespace stologistic::rng
