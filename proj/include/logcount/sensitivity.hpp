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
#include <span>

#include "logcount/errors.hpp"
#include "logcount/factor.hpp"
#include "logcount/quadrature.hpp"

namespace logcount {

// The limiting squared column norm of the right factor, computed by
// integrating |f_R|^2 over the unit circle, with the quadrature error
// estimate that came with it.
struct SensitivityResult {
  double delta_sq = 0.0;
  double delta = 0.0;
  double quad_error_estimate = 0.0;
  FactorParams params;
};

namespace sens_detail {

constexpr long double kPi = 3.141592653589793238462643383279503L;

// Value of the circle integrand at omega in (-pi/2, pi/2), with the branch
// offset of the arctangent term chosen by the sign of ln(2 cos omega), i.e.
// by which side of |omega| = pi/3 the point falls on. The two one-sided
// limits at pi/3 coincide, so no special handling is needed at the seam.
inline long double omega_integrand(long double w, long double gamma, long double delta) {
  const long double i1 = 2.0L * std::cos(w);
  if (!(std::abs(w) < kPi / 2.0L) || !(i1 > 0.0L)) {
    throw SingularPointError("integrand: omega must lie strictly inside (-pi/2, pi/2)");
  }
  const long double ln_i1 = std::log(i1);
  const long double i2 = ln_i1 * ln_i1 + w * w;
  long double value = std::exp(gamma * std::log(i2)) / i1;
  if (delta != 0.0L) {
    const long double aw = std::abs(w);
    const long double i3 = 0.25L * std::log(i2) * std::log(i2);
    // IEEE semantics give the correct one-sided value at ln_i1 == 0.
    const long double i4 = std::atan(-aw / ln_i1) + 2.0L * aw;
    const long double offset = ln_i1 > 0.0L ? 0.0L : kPi;
    const long double shifted = i4 - offset;
    value *= std::exp(delta * std::log(i3 + shifted * shifted));
  }
  return value;
}

// The tail substitution. Beyond omega1 = pi/2 - u0 the integral is taken in
// v = -ln(2 sin(pi/2 - omega)), where it reads
//   integral_{v0}^inf v^{-1-2 alpha} * G(v) dv,
// and then in xi = (v0 / v)^{2 alpha} on (0, 1], which absorbs the
// v^{-1-2 alpha} weight exactly. G stays O(poly(ln v)) all the way down, and
// everything is evaluated from ln v so no overflow occurs even though the
// mass of the integral sits at astronomically large v when alpha is small.
struct TailIntegrand {
  long double gamma;
  long double delta;
  long double alpha;
  long double ln_v0;

  long double operator()(const quad::Node& node) const {
    const long double lnv = ln_v0 - node.log_y / (2.0L * alpha);
    long double u, omega, ratio, cosu;
    if (lnv < 4.5L) {
      const long double v = std::exp(lnv);
      u = std::asin(0.5L * std::exp(-v));
      omega = kPi / 2.0L - u;
      ratio = omega / v;
      cosu = std::cos(u);
    } else {
      u = 0.0L;
      omega = kPi / 2.0L;
      ratio = omega * std::exp(-lnv);
      cosu = 1.0L;
    }
    const long double l2corr = std::log1p(ratio * ratio);  // ln I2 - 2 ln v
    long double g = std::exp(gamma * l2corr) / (2.0L * cosu);
    if (delta != 0.0L) {
      const long double half_l2 = lnv + 0.5L * l2corr;  // (ln I2)/2
      const long double i4m = std::atan(ratio) - 2.0L * u;
      const long double bracket = half_l2 * half_l2 + i4m * i4m;
      g *= std::exp(delta * std::log(bracket));
    }
    return g;
  }
};

}  // namespace sens_detail

// Circle integrand at omega in the split form
// I1^{-1} I2^{-1/2-alpha} (I3 + (I4 - offset)^2)^{delta_log}, with the branch
// offset 0 for |omega| < pi/3 and pi beyond.
inline double integrand(double omega, const FactorParams& params) {
  return static_cast<double>(sens_detail::omega_integrand(
      static_cast<long double>(omega), static_cast<long double>(params.gamma),
      static_cast<long double>(params.delta_log)));
}

struct SensitivityOptions {
  double split_omega = static_cast<double>(sens_detail::kPi / 3.0L);
  int max_level = 12;
  // Where the tail substitution takes over, as v0 = -ln(2 sin u0).
  double tail_v0 = 2.0;
};

// Delta^2 = lim_n ||[R]_n||_{1->2}^2 via
//   (2^{1+2 delta} / pi) * integral_0^{pi/2} of the split integrand,
// with the endpoint singularity at pi/2 handled by the double-log
// substitution above. tol is relative.
inline SensitivityResult compute_sensitivity(const FactorParams& params, double tol = 1e-12,
                                             const SensitivityOptions& options = {}) {
  if (!(params.gamma < -0.5)) {
    throw DivergentSensitivityError(
        "compute_sensitivity: column norm diverges unless gamma < -1/2");
  }
  const long double gamma = params.gamma;
  const long double delta = params.delta_log;
  const long double alpha = -0.5L - gamma;
  const long double split = options.split_omega;
  const long double v0 = options.tail_v0;
  const long double u0 = std::asin(0.5L * std::exp(-v0));
  const long double omega1 = sens_detail::kPi / 2.0L - u0;
  if (!(split > 0.0L && split < omega1)) {
    throw InvalidArgumentError("compute_sensitivity: split point out of range");
  }
  const long double piece_tol = static_cast<long double>(tol) / 4.0L;

  const auto f = [&](long double w) { return sens_detail::omega_integrand(w, gamma, delta); };
  const quad::Result a = quad::tanh_sinh(f, 0.0L, split, piece_tol, options.max_level);
  const quad::Result b = quad::tanh_sinh(f, split, omega1, piece_tol, options.max_level);

  sens_detail::TailIntegrand tail{gamma, delta, alpha, std::log(v0)};
  const quad::Result c01 = quad::tanh_sinh_01(tail, piece_tol, options.max_level);
  const long double tail_scale = std::exp(-2.0L * alpha * std::log(v0)) / (2.0L * alpha);

  const long double prefactor =
      std::exp((1.0L + 2.0L * delta) * std::log(2.0L)) / sens_detail::kPi;
  const long double inner = a.value + b.value + tail_scale * c01.value;
  const long double err =
      prefactor * (a.error_estimate + b.error_estimate + tail_scale * c01.error_estimate);

  SensitivityResult result;
  result.params = params;
  result.delta_sq = static_cast<double>(prefactor * inner);
  result.delta = std::sqrt(result.delta_sq);
  result.quad_error_estimate = static_cast<double>(err);
  if (!(err <= tol * std::abs(prefactor * inner))) {
    throw PrecisionError("compute_sensitivity: quadrature did not reach tolerance",
                         result.delta_sq, result.quad_error_estimate);
  }
  return result;
}

// sum_{m<N} ([z^m] f_R)^2, the truncated Parseval sum, straight from the
// coefficient pipeline. Monotone in N and bounded by delta_sq.
inline double partial_sum_oracle(const FactorParams& params, std::size_t n,
                                 MulBudget* budget = nullptr) {
  if (n == 0) throw InvalidArgumentError("partial_sum_oracle: N must be positive");
  const CoeffSeries r = factor_coeffs(params, n, budget);
  long double acc = 0.0L;
  for (double c : r) acc += static_cast<long double>(c) * static_cast<long double>(c);
  return static_cast<double>(acc);
}

}  // namespace logcount
