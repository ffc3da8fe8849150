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
#include "logcount/mechanism.hpp"
#include "logcount/rng.hpp"

namespace logcount {

// Lazily extended prefix sums of the squared rsqrt-kernel coefficients:
// s1(k) = sum_{m<k} f1[m]^2, the shared norm table of the bounded baseline.
class RsqrtNorms {
 public:
  double s1(std::size_t k) {
    if (k == 0) return 0.0;
    while (prefix_.size() < k) grow();
    return static_cast<double>(prefix_[k - 1]);
  }

 private:
  void grow() {
    const std::size_t target = prefix_.empty() ? 1024 : prefix_.size() * 2;
    const std::size_t old = f1_.size();
    f1_.resize(target);
    if (old == 0) {
      f1_[0] = 1.0;
    }
    for (std::size_t m = std::max<std::size_t>(old, 1); m < target; ++m) {
      f1_[m] = f1_[m - 1] * (1.0 - 0.5 / static_cast<double>(m));
    }
    long double acc = prefix_.empty() ? 0.0L : prefix_.back();
    for (std::size_t m = prefix_.size(); m < target; ++m) {
      acc += static_cast<long double>(f1_[m]) * static_cast<long double>(f1_[m]);
      prefix_.push_back(acc);
    }
  }

  CoeffSeries f1_;
  std::vector<long double> prefix_;
};

// Exact variance of the bounded sqrt-factorization mechanism at step t when
// calibrated to horizon n: C^2 * s1(n) * s1(t). The column factor is pinned
// to the full horizon, which is what the bounded mechanism pays for knowing n.
inline double sqrt_matrix_variance(std::size_t t, std::size_t n, double noise_multiplier) {
  if (t < 1 || t > n) {
    throw InvalidArgumentError("sqrt_matrix_variance: need 1 <= t <= n");
  }
  RsqrtNorms norms;
  return noise_multiplier * noise_multiplier * norms.s1(n) * norms.s1(t);
}

inline double sqrt_matrix_variance(std::size_t t, std::size_t n, const PrivacyParams& privacy) {
  return sqrt_matrix_variance(t, n, privacy.C);
}

struct HybridConfig {
  enum class Unbounded { kIndependent, kLogMatrix };

  double rho = 0.75;  // bounded-component share of the privacy budget
  Unbounded unbounded_variant = Unbounded::kIndependent;
  bool reuse = true;
  FactorParams params{};  // factor parameters for the logmatrix variant

  void validate() const {
    if (!(rho > 0.0 && rho < 1.0)) throw InvalidArgumentError("HybridConfig: rho in (0,1)");
  }
};

// Exact output variance of the hybrid mechanism at time t = 2^k + r: the
// bounded sqrt-matrix component restarted each epoch plus the unbounded
// estimate of the completed-epoch totals, optionally improved by
// inverse-variance reuse of the finished bounded outputs. The budget split is
// in squared-scale terms (Gaussian variances add), so the component scales
// are C/sqrt(rho) and C/sqrt(1-rho).
class HybridVariance {
 public:
  HybridVariance(const HybridConfig& config, double noise_multiplier)
      : config_(config),
        cb2_(noise_multiplier * noise_multiplier / config.rho),
        cu2_(noise_multiplier * noise_multiplier / (1.0 - config.rho)) {
    config_.validate();
    if (config_.unbounded_variant == HybridConfig::Unbounded::kLogMatrix) {
      const double delta = compute_sensitivity(config_.params).delta;
      log_profile_.emplace(config_.params, std::sqrt(cu2_) * delta);
    }
  }

  double bounded_scale_sq() const { return cb2_; }
  double unbounded_scale_sq() const { return cu2_; }

  // variance of the unbounded mechanism's own estimate of sum_{i<k} y_i
  double unbounded_raw_variance(std::size_t k) {
    if (k == 0) return 0.0;
    if (config_.unbounded_variant == HybridConfig::Unbounded::kIndependent) {
      return static_cast<double>(k) * cu2_;
    }
    return log_profile_->at(k);
  }

  // variance of the combined estimate of sum_{i<k} y_i
  double epoch_sum_variance(std::size_t k) {
    if (k == 0) return 0.0;
    const double var_u = unbounded_raw_variance(k);
    if (!config_.reuse) return var_u;
    const double var_f = finals_variance(k);
    if (var_u + var_f == 0.0) return 0.0;
    return var_u * var_f / (var_u + var_f);
  }

  // variance of the sum of completed bounded-epoch finals for epochs < k
  double finals_variance(std::size_t k) {
    long double acc = 0.0L;
    for (std::size_t i = 0; i < k; ++i) {
      const double s = norms_.s1(std::size_t{1} << i);
      acc += static_cast<long double>(cb2_) * s * s;
    }
    return static_cast<double>(acc);
  }

  double at(std::size_t t) {
    if (t < 1) throw InvalidArgumentError("hybrid_variance: t must be positive");
    std::size_t k = 0;
    while ((std::size_t{2} << k) <= t) ++k;  // t in [2^k, 2^{k+1})
    const std::size_t epoch = std::size_t{1} << k;
    const std::size_t offset = t - epoch;
    const double bounded = cb2_ * norms_.s1(epoch) * norms_.s1(offset + 1);
    return epoch_sum_variance(k) + bounded;
  }

 private:
  HybridConfig config_;
  double cb2_;
  double cu2_;
  RsqrtNorms norms_;
  std::optional<VarianceProfile> log_profile_;
};

inline double hybrid_variance(std::size_t t, const HybridConfig& config, double noise_multiplier) {
  HybridVariance hv(config, noise_multiplier);
  return hv.at(t);
}

inline double hybrid_variance(std::size_t t, const HybridConfig& config,
                              const PrivacyParams& privacy) {
  return hybrid_variance(t, config, privacy.C);
}

// Streaming hybrid mechanism with the same step contract as Counter. The
// bounded sqrt-matrix component is restarted whenever t reaches a power of
// two and computed by direct convolution (O(epoch) per step); the condensed
// epoch totals feed the unbounded component at each boundary.
class HybridStream {
 public:
  HybridStream(const HybridConfig& config, const PrivacyParams& privacy, std::uint64_t seed)
      : HybridStream(config, privacy.C, seed) {}

  HybridStream(const HybridConfig& config, double noise_multiplier, std::uint64_t seed)
      : config_(config),
        cb_(noise_multiplier / std::sqrt(config.rho)),
        cu_(noise_multiplier / std::sqrt(1.0 - config.rho)),
        variance_(config, noise_multiplier),
        bounded_rng_(seed, /*stream=*/1),
        epoch_rng_(seed, /*stream=*/2) {
    config_.validate();
    if (config_.unbounded_variant == HybridConfig::Unbounded::kLogMatrix) {
      const double delta =
          noise_multiplier == 0.0 ? 0.0 : compute_sensitivity(config_.params).delta;
      log_counter_.emplace(config_.params, cu_ * delta, mix64(seed ^ 0xC2B2AE3D27D4EB4FULL),
                           std::nullopt, nullptr,
                           /*input_bound=*/std::numeric_limits<double>::infinity());
    }
  }

  double step(double x) {
    if (!(x >= 0.0 && x <= 1.0)) {
      throw SensitivityViolationError("step: input outside [0,1]");
    }
    ++t_;
    if (t_ == epoch_start_ * 2) finalize_epoch();
    // Bounded component for the in-epoch prefix. Its noise is calibrated to
    // the column norm of the epoch-sized right factor, sqrt(s1(epoch)).
    epoch_x_.push_back(x);
    const std::size_t r = epoch_x_.size() - 1;
    const double sb = cb_ * std::sqrt(s1(epoch_start_));
    long double rx = 0.0L;
    for (std::size_t i = 0; i <= r; ++i) {
      rx += static_cast<long double>(f1_[r - i]) * epoch_x_[i];
    }
    w_.push_back(static_cast<double>(rx) + sb * bounded_rng_.normal(t_));
    long double out_b = 0.0L;
    for (std::size_t m = 0; m <= r; ++m) {
      out_b += static_cast<long double>(f1_[m]) * w_[r - m];
    }
    last_bounded_ = static_cast<double>(out_b);
    return epoch_sum_estimate() + last_bounded_;
  }

  std::size_t time() const { return t_; }

 private:
  void finalize_epoch() {
    long double total = 0.0L;
    for (double v : epoch_x_) total += v;
    const double y = static_cast<double>(total);
    if (config_.unbounded_variant == HybridConfig::Unbounded::kIndependent) {
      indep_estimate_ += y + cu_ * epoch_rng_.normal(completed_);
    } else {
      indep_estimate_ = log_counter_->step(y);
    }
    finals_sum_ += last_bounded_;
    ++completed_;
    epoch_start_ *= 2;
    epoch_x_.clear();
    w_.clear();
  }

  double epoch_sum_estimate() {
    if (completed_ == 0) return 0.0;
    if (!config_.reuse) return indep_estimate_;
    // inverse-variance weighting of the two independent unbiased estimates
    const double var_u = variance_.unbounded_raw_variance(completed_);
    const double var_f = variance_.finals_variance(completed_);
    if (var_u + var_f == 0.0) return indep_estimate_;  // noise-free run
    const double wu = var_f / (var_u + var_f);
    return wu * indep_estimate_ + (1.0 - wu) * finals_sum_;
  }

  // sum_{m<k} f1[m]^2 from a lazily grown local table
  double s1(std::size_t k) {
    while (f1_.size() < std::max<std::size_t>(k, 1)) {
      f1_.push_back(f1_.back() * (1.0 - 0.5 / static_cast<double>(f1_.size())));
    }
    while (f1_sq_prefix_.size() < f1_.size()) {
      const std::size_t m = f1_sq_prefix_.size();
      const long double prev = m == 0 ? 0.0L : f1_sq_prefix_.back();
      f1_sq_prefix_.push_back(prev + static_cast<long double>(f1_[m]) * f1_[m]);
    }
    return k == 0 ? 0.0 : static_cast<double>(f1_sq_prefix_[k - 1]);
  }

  HybridConfig config_;
  double cb_;
  double cu_;
  HybridVariance variance_;
  CounterRng bounded_rng_;
  CounterRng epoch_rng_;
  std::optional<Counter> log_counter_;

  std::size_t t_ = 0;
  std::size_t epoch_start_ = 1;
  std::size_t completed_ = 0;  // finished epochs, = current epoch index k
  std::vector<double> epoch_x_;
  std::vector<double> w_;
  CoeffSeries f1_{1.0};
  std::vector<long double> f1_sq_prefix_;
  double last_bounded_ = 0.0;
  double indep_estimate_ = 0.0;
  double finals_sum_ = 0.0;
};

}  // namespace logcount
