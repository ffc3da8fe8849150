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
#include <cstddef>
#include <utility>

namespace logcount::quad {

// One quadrature node on (0, 1) with both endpoint distances and their logs
// computed without cancellation, so integrands with endpoint singularities
// can be evaluated stably arbitrarily deep into the corners.
struct Node {
  long double y;
  long double one_minus_y;
  long double log_y;
  long double log_one_minus_y;
};

struct Result {
  long double value = 0.0L;
  long double error_estimate = 0.0L;
  int levels = 0;
};

// Tanh-sinh rule on (0, 1) in long double. F maps a Node to the integrand
// value. Doubles the node density per level until the level-to-level change
// drops below rel_tol (relative) or max_level is reached; the last change is
// the error estimate.
template <typename F>
Result tanh_sinh_01(F&& f, long double rel_tol, int max_level = 12) {
  constexpr long double kPi = 3.141592653589793238462643383279503L;
  // tau beyond ~9.3 underflows 1-y past long double range
  constexpr long double kTauMax = 9.3L;

  const auto eval_pair = [&](long double tau) -> long double {
    const long double g = kPi * std::sinh(tau);
    const long double e = std::exp(-g);  // g >= 0
    const long double denom = 1.0L + e;
    const long double y_hi = 1.0L / denom;
    const long double y_lo = e / denom;
    const long double log_lo = -g - std::log1p(e);
    const long double log_hi = -std::log1p(e);
    const long double weight = kPi * std::cosh(tau) * y_hi * y_lo;
    if (weight == 0.0L) return 0.0L;
    long double acc = weight * f(Node{y_lo, y_hi, log_lo, log_hi});
    if (tau != 0.0L) acc += weight * f(Node{y_hi, y_lo, log_hi, log_lo});
    return acc;
  };

  Result out;
  long double h = 1.0L;
  long double sum = eval_pair(0.0L);  // level 0: j = 0 plus integer nodes
  for (long double tau = 1.0L; tau <= kTauMax; tau += 1.0L) sum += eval_pair(tau);
  long double prev = sum * h;
  out.value = prev;
  for (int level = 1; level <= max_level; ++level) {
    h *= 0.5L;
    long double add = 0.0L;
    for (long double tau = h; tau <= kTauMax; tau += 2.0L * h) add += eval_pair(tau);
    const long double cur = prev * 0.5L + h * add;
    out.error_estimate = std::abs(cur - prev);
    out.levels = level;
    out.value = cur;
    prev = cur;
    if (out.error_estimate <= rel_tol * std::abs(cur) && level >= 4) break;
  }
  return out;
}

// Convenience wrapper for a regular integrand on [a, b].
template <typename F>
Result tanh_sinh(F&& f, long double a, long double b, long double rel_tol, int max_level = 12) {
  const long double scale = b - a;
  Result r = tanh_sinh_01(
      [&](const Node& node) -> long double { return f(a + scale * node.y); }, rel_tol, max_level);
  r.value *= scale;
  r.error_estimate *= std::abs(scale);
  return r;
}

}  // namespace logcount::quad
