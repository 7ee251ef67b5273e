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

#include "stologistic/rng.hpp"

#include <cmath>
#include <numbers>

namespace stologistic::rng {
namespace {

constexpr std::uint32_t kMult0 = 0xD2511F53u;
constexpr std::uint32_t kMult1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void philox_round(std::array<std::uint32_t, 4>& c, std::uint32_t k0,
                         std::uint32_t k1) {
  const std::uint64_t p0 = std::uint64_t(kMult0) * c[0];
  const std::uint64_t p1 = std::uint64_t(kMult1) * c[2];
  c = {std::uint32_t(p1 >> 32) ^ c[1] ^ k0, std::uint32_t(p1),
       std::uint32_t(p0 >> 32) ^ c[3] ^ k1, std::uint32_t(p0)};
}

// Uniform in [0, 1) with 53 random bits.
inline double to_unit(std::uint64_t bits) {
  return double(bits >> 11) * 0x1.0p-53;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) {
  std::uint32_t k0 = key[0];
  std::uint32_t k1 = key[1];
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      k0 += kWeyl0;
      k1 += kWeyl1;
    }
    philox_round(counter, k0, k1);
  }
  return counter;
}

void fill_gaussian(std::uint64_t key, std::uint64_t stream,
                   std::span<double> out, double scale) {
  const std::array<std::uint32_t, 2> k{std::uint32_t(key),
                                       std::uint32_t(key >> 32)};
  const std::uint32_t s_lo = std::uint32_t(stream);
  const std::uint32_t s_hi = std::uint32_t(stream >> 32);
  const double two_pi = 2.0 * std::numbers::pi;
  const std::size_t n = out.size();
  for (std::uint64_t block = 0; 2 * block < n; ++block) {
    const auto words = philox4x32(
        {s_lo, s_hi, std::uint32_t(block), std::uint32_t(block >> 32)}, k);
    const std::uint64_t bits0 = (std::uint64_t(words[1]) << 32) | words[0];
    const std::uint64_t bits1 = (std::uint64_t(words[3]) << 32) | words[2];
    // u in (0, 1] keeps the log finite; angle in [0, 2*pi).
    const double u = 1.0 - to_unit(bits0);
    const double angle = two_pi * to_unit(bits1);
    const double radius = std::sqrt(-2.0 * std::log(u));
    out[2 * block] = scale * (radius * std::cos(angle));
    if (2 * block + 1 < n) {
      out[2 * block + 1] = scale * (radius * std::sin(angle));
    }
  }
}

}  // namespace stologistic::rng
