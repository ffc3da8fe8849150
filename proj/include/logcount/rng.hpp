// Copyright 2026 The logcount Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>

namespace logcount {

// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Counter-mode generator: every variate is a pure function of
// (seed, stream, index), so the order in which values are drawn never
// matters. That makes precomputed and on-demand runs sample-aligned by
// construction, which the side-information path relies on.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : base_(mix64(seed) ^ mix64(0x5851F42D4C957F2DULL + stream)) {}

  // U(0,1), never exactly 0 or 1.
  double uniform(std::uint64_t index) const {
    return to_unit(mix64(base_ + (index + 1) * 0x9E3779B97F4A7C15ULL));
  }

  // Standard normal via the Box-Muller transform (deterministic, no
  // rejection), one value per index.
  double normal(std::uint64_t index) const {
    const std::uint64_t s = base_ + (index + 1) * 0x9E3779B97F4A7C15ULL;
    const double u1 = to_unit(mix64(s));
    const double u2 = to_unit(mix64(s ^ 0xD1B54A32D192ED03ULL));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

 private:
  static double to_unit(std::uint64_t x) {
    return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53;
  }

  std::uint64_t base_;
};

}  // namespace logcount
