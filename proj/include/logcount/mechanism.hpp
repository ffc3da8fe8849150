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
#include <limits>
#include <optional>
#include <vector>

#include "logcount/errors.hpp"
#include "logcount/factor.hpp"
#include "logcount/rng.hpp"
#include "logcount/sensitivity.hpp"
#include "logcount/series.hpp"

namespace logcount {

// Classical Gaussian-mechanism calibration for unit l2 sensitivity. Isolated
// so a tighter analytic calibration can be swapped in.
inline double gaussian_scale(double epsilon, double delta_priv) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw InvalidArgumentError("gaussian_scale: epsilon must be positive");
  }
  if (!(delta_priv > 0.0 && delta_priv < 1.0)) {
    throw InvalidArgumentError("gaussian_scale: delta must lie in (0,1)");
  }
  return std::sqrt(2.0 * std::log(1.25 / delta_priv)) / epsilon;
}

struct PrivacyParams {
  double epsilon;
  double delta_priv;
  double C;  // derived Gaussian scale multiplier

  PrivacyParams(double epsilon, double delta_priv)
      : epsilon(epsilon), delta_priv(delta_priv), C(gaussian_scale(epsilon, delta_priv)) {}
};

// Prior side information n0 <= n <= c_factor * n0. Unreliable bounds are
// fine: a stream running past the hint falls back to doubling.
struct SideInfo {
  std::size_t n0 = 1;
  double c_factor = 1.0;
};

// Exact noise variance of the counter output as a function of time:
// sigma^2 * sum_{m<t} L[m]^2, evaluated from the left-factor coefficients
// (no sampling involved). Extends its coefficient stream lazily.
class VarianceProfile {
 public:
  VarianceProfile(const FactorParams& params, double sigma, MulBudget* budget = nullptr)
      : left_(-params.gamma, -params.delta_log, budget, 2), sigma_sq_(sigma * sigma) {
    append_prefix_sums();
  }

  double sigma_sq() const { return sigma_sq_; }

  // sigma^2 * ||[L]_t||^2_{2->inf}
  double at(std::size_t t) {
    if (t == 0) throw InvalidArgumentError("variance_at: t must be positive");
    while (left_.len() < t) {
      left_.extend();
      append_prefix_sums();
    }
    return sigma_sq_ * static_cast<double>(prefix_[t - 1]);
  }

  // squared row norm without the noise scale
  double squared_row_norm(std::size_t t) {
    at(t);
    return static_cast<double>(prefix_[t - 1]);
  }

 private:
  void append_prefix_sums() {
    const CoeffSeries& l = left_.coeffs();
    long double acc = prefix_.empty() ? 0.0L : prefix_.back();
    for (std::size_t m = prefix_.size(); m < l.size(); ++m) {
      acc += static_cast<long double>(l[m]) * static_cast<long double>(l[m]);
      prefix_.push_back(acc);
    }
  }

  FactorStream left_;
  double sigma_sq_;
  std::vector<long double> prefix_;
};

// The unbounded streaming counter. Noise is calibrated once, to the limiting
// column norm of the right factor, and never changes no matter how long the
// stream runs; the left-factor prefix and its convolution with the noise are
// extended by doubling (or precomputed up front when side information is
// given, through the same extension path so the two modes are bit-identical
// wherever they overlap).
class Counter {
 public:
  Counter(const FactorParams& params, const PrivacyParams& privacy, std::uint64_t seed,
          std::optional<SideInfo> side = std::nullopt, MulBudget* budget = nullptr)
      : Counter(params, privacy.C * compute_sensitivity(params).delta, seed, side, budget) {}

  // Direct noise-scale constructor; sigma = 0 turns the mechanism into an
  // exact prefix-sum counter, which tests lean on.
  Counter(const FactorParams& params, double sigma, std::uint64_t seed,
          std::optional<SideInfo> side = std::nullopt, MulBudget* budget = nullptr,
          double input_bound = 1.0)
      : left_(-params.gamma, -params.delta_log, budget, 2),
        budget_(budget),
        rng_(seed),
        sigma_(sigma),
        input_bound_(input_bound) {
    if (sigma < 0.0 || !std::isfinite(sigma)) {
      throw InvalidArgumentError("Counter: bad noise scale");
    }
    std::size_t start = 2;
    if (side.has_value()) {
      if (side->n0 < 1 || side->c_factor < 1.0) {
        throw InvalidArgumentError("Counter: side info requires n0 >= 1, c_factor >= 1");
      }
      const double hinted = side->c_factor * static_cast<double>(side->n0);
      start = fft::ceil_pow2(static_cast<std::size_t>(hinted));
    }
    materialize(2);
    while (horizon_ < start) materialize(horizon_ * 2);
  }

  double sigma() const { return sigma_; }
  std::size_t time() const { return t_; }
  double running_sum() const { return sum_; }
  std::size_t horizon() const { return horizon_; }

  // Consumes x_t and returns the private running-total estimate
  // S_t + (L y)_t.
  double step(double x) {
    if (!(x >= 0.0 && x <= input_bound_)) {
      throw SensitivityViolationError("step: input outside the calibrated domain");
    }
    ++t_;
    if (t_ > horizon_) materialize(horizon_ * 2);
    sum_ += x;
    return sum_ + ly_[t_ - 1];
  }

  // Noise value that step number t (1-based) did or will emit.
  double noise_at(std::size_t t) {
    if (t == 0) throw InvalidArgumentError("noise_at: t must be positive");
    while (horizon_ < t) materialize(horizon_ * 2);
    return ly_[t - 1];
  }

 private:
  // Extends the factor prefix, the noise vector and their convolution to the
  // target horizon (a power of two).
  void materialize(std::size_t target) {
    if (y_.size() < target) {
      const std::size_t old = y_.size();
      y_.resize(target);
      for (std::size_t i = old; i < target; ++i) {
        y_[i] = sigma_ == 0.0 ? 0.0 : sigma_ * rng_.normal(i);
      }
    }
    left_.extend_to(target);
    if (ly_.empty()) {
      const CoeffSeries block = convolve(left_.coeffs(), y_, target, budget_);
      ly_ = block;
    } else {
      const std::size_t from = ly_.size();
      CoeffSeries block = product_block(left_.coeffs(), y_, from, target, budget_);
      ly_.insert(ly_.end(), block.begin(), block.end());
    }
    horizon_ = target;
  }

  FactorStream left_;
  MulBudget* budget_;
  CounterRng rng_;
  double sigma_;
  double input_bound_;
  std::size_t t_ = 0;
  double sum_ = 0.0;
  std::size_t horizon_ = 0;
  CoeffSeries y_;
  CoeffSeries ly_;
};

struct ErrorMetrics {
  double err_l22 = 0.0;  // (1/n) E[ (sum_{t<=n} e_t^2)^{1/2} ]
  double err_linf = 0.0;  // E[ max_{t<=n} |e_t| ]
  // Monte Carlo with e_t drawn independently per step. The mechanism's noise
  // at different times shares components through L, so this estimator is an
  // approximation of the joint-law metrics; the flag records that.
  static constexpr const char* estimator = "independent";
};

// Monte Carlo estimates of the additive-error metrics for a mechanism that
// adds zero-mean Gaussian noise with the given per-step variances.
inline ErrorMetrics error_metrics(std::span<const double> variance_by_step, std::size_t n,
                                  std::size_t trials, std::uint64_t seed) {
  if (n == 0 || n > variance_by_step.size()) {
    throw InvalidArgumentError("error_metrics: n out of range");
  }
  if (trials == 0) throw InvalidArgumentError("error_metrics: trials must be positive");
  std::vector<double> stddev(n);
  for (std::size_t t = 0; t < n; ++t) stddev[t] = std::sqrt(variance_by_step[t]);
  long double sum_l2 = 0.0L;
  long double sum_max = 0.0L;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    CounterRng rng(seed, /*stream=*/trial + 1);
    long double sq = 0.0L;
    double worst = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const double e = stddev[t] * rng.normal(t);
      sq += static_cast<long double>(e) * e;
      worst = std::max(worst, std::abs(e));
    }
    sum_l2 += std::sqrt(sq);
    sum_max += worst;
  }
  ErrorMetrics out;
  out.err_l22 = static_cast<double>(sum_l2 / trials) / static_cast<double>(n);
  out.err_linf = static_cast<double>(sum_max / trials);
  return out;
}

}  // namespace logcount
