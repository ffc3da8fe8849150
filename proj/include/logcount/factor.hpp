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
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "logcount/budget.hpp"
#include "logcount/errors.hpp"
#include "logcount/series.hpp"

namespace logcount {

// Parameters of the factorization kernel
//   f(z; gamma, delta) = (1-z)^{-1/2}
//                      * [(1/z) ln(1/(1-z))]^{gamma}
//                      * [(2/z) ln((1/z) ln(1/(1-z)))]^{delta}.
// The right factor is f(z; gamma, delta_log), the left factor is
// f(z; -gamma, -delta_log). delta_log is named to keep it apart from the
// privacy parameter delta. The column norm of the right factor converges only
// for gamma < -1/2, i.e. alpha() > 0.
struct FactorParams {
  double gamma = -0.51;
  double delta_log = 0.51;

  double alpha() const { return -0.5 - gamma; }

  static FactorParams with_delta_preset_fast(double gamma = -0.51) { return {gamma, 0.0}; }
  static FactorParams with_delta_preset_matched(double gamma = -0.51) { return {gamma, -gamma}; }
  static FactorParams with_delta_preset_large_n(double gamma = -0.51) {
    return {gamma, -6.0 * gamma / 5.0};
  }
};

// First t coefficients of (1-z)^{-1/2} via the stable product recurrence;
// O(t) time and space.
inline CoeffSeries rsqrt_coeffs(std::size_t t) {
  if (t == 0) throw InvalidArgumentError("rsqrt_coeffs: zero length");
  CoeffSeries f(t, 1.0);
  for (std::size_t m = 1; m < t; ++m) {
    f[m] = f[m - 1] * (1.0 - 0.5 / static_cast<double>(m));
  }
  return f;
}

// First t coefficients of (1/z) ln(1/(1-z)): just 1/(m+1).
inline CoeffSeries log_factor_base(std::size_t t) {
  if (t == 0) throw InvalidArgumentError("log_factor_base: zero length");
  CoeffSeries f(t);
  for (std::size_t m = 0; m < t; ++m) f[m] = 1.0 / static_cast<double>(m + 1);
  return f;
}

// First t coefficients of (2/z) ln((1/z) ln(1/(1-z))): twice the shifted log
// of the previous factor, so f[0] = 1.
inline CoeffSeries loglog_factor_base(std::size_t t, MulBudget* budget = nullptr) {
  if (t == 0) throw InvalidArgumentError("loglog_factor_base: zero length");
  const CoeffSeries base = log_factor_base(t + 1);
  const CoeffSeries lf = log_series(base, t + 1, budget);
  CoeffSeries f(t);
  for (std::size_t m = 0; m < t; ++m) f[m] = 2.0 * lf[m + 1];
  return f;
}

// sqrt(sum_{m<t} coeffs[m]^2): the max-row norm of the truncated
// lower-triangular Toeplitz matrix (its last row).
inline double row_norm_prefix(std::span<const double> coeffs, std::size_t t) {
  if (t > coeffs.size()) throw InvalidArgumentError("row_norm_prefix: t exceeds length");
  long double acc = 0.0L;
  for (std::size_t m = 0; m < t; ++m) {
    acc += static_cast<long double>(coeffs[m]) * static_cast<long double>(coeffs[m]);
  }
  return static_cast<double>(std::sqrt(acc));
}

// The exponent-independent part of the coefficient pipeline: (1-z)^{-1/2} by
// recurrence, plus incrementally extended prefixes of ln of the two
// perturbation factors. A left/right pair shares one chain, which is where
// most of the warm-start savings come from.
class KernelLogChain {
 public:
  KernelLogChain(bool with_log, bool with_loglog, MulBudget* budget, std::size_t initial_len)
      : with_log_(with_log || with_loglog), with_loglog_(with_loglog), budget_(budget) {
    const std::size_t m0 = std::max<std::size_t>(2, fft::ceil_pow2(initial_len));
    len_ = m0;
    f1_ = rsqrt_coeffs(m0);
    if (!with_log_) return;
    materialize_bases(m0);
    q2_.emplace(df2_, f2_, m0, budget_);
    refresh_lf2(m0);
    if (with_loglog_) {
      refresh_f3(m0);
      // The base build sees a zero placeholder for the top term of f3'.
      q3_.emplace(df3_, f3_, m0, budget_);
      q3_stale_top_ = true;
      refresh_lf3(m0);
    }
  }

  std::size_t len() const { return len_; }
  const CoeffSeries& f1() const { return f1_; }
  const CoeffSeries& lf2() const { return lf2_; }
  const CoeffSeries& lf3() const { return lf3_; }
  bool has_loglog() const { return with_loglog_; }

  // Doubles every maintained prefix.
  void extend() {
    const std::size_t t = len_;
    const std::size_t nt = 2 * t;
    f1_.resize(nt);
    for (std::size_t m = t; m < nt; ++m) {
      f1_[m] = f1_[m - 1] * (1.0 - 0.5 / static_cast<double>(m));
    }
    if (with_log_) {
      materialize_bases(nt);
      q2_->extend(df2_, f2_);
      refresh_lf2(nt);
      if (with_loglog_) {
        refresh_f3(nt);
        // The previous extension could not see the top coefficient of f3'
        // (it depends on one more term of the inner log chain) and used a
        // zero placeholder. The induced error sits in the single stale
        // quotient entry and equals df3/f3[0] exactly; fix it before it can
        // enter the next doubling.
        if (q3_stale_top_) {
          q3_->adjust_last(df3_[t - 1] / f3_[0]);
          q3_stale_top_ = false;
        }
        q3_->extend(df3_, f3_);
        q3_stale_top_ = true;
        refresh_lf3(nt);
      }
    }
    len_ = nt;
  }

  void extend_to(std::size_t t) {
    while (len_ < t) extend();
  }

 private:
  void materialize_bases(std::size_t n) {
    const std::size_t old = f2_.size();
    f2_.resize(n);
    df2_.resize(n);
    for (std::size_t m = old; m < n; ++m) {
      f2_[m] = 1.0 / static_cast<double>(m + 1);
      df2_[m] = static_cast<double>(m + 1) / static_cast<double>(m + 2);
    }
  }

  void refresh_lf2(std::size_t n) {
    const std::size_t old = lf2_.size();
    lf2_.resize(n, 0.0);
    const CoeffSeries& q = q2_->values();
    for (std::size_t m = std::max<std::size_t>(old, 1); m < n; ++m) {
      lf2_[m] = q[m - 1] / static_cast<double>(m);
    }
  }

  // f3[m] = 2 * [z^{m+1}] ln f2 = 2 q2[m] / (m+1). The derivative's final
  // slot would need q2 one term past the current power of two; it is left 0
  // and patched on the next extension (see above).
  void refresh_f3(std::size_t n) {
    const CoeffSeries& q = q2_->values();
    const std::size_t old = f3_.size();
    f3_.resize(n);
    for (std::size_t m = old; m < n; ++m) {
      f3_[m] = 2.0 * q[m] / static_cast<double>(m + 1);
    }
    df3_.assign(n, 0.0);
    for (std::size_t m = 0; m + 1 < n; ++m) {
      df3_[m] = static_cast<double>(m + 1) * f3_[m + 1];
    }
  }

  void refresh_lf3(std::size_t n) {
    const std::size_t old = lf3_.size();
    lf3_.resize(n, 0.0);
    const CoeffSeries& q = q3_->values();
    for (std::size_t m = std::max<std::size_t>(old, 1); m < n; ++m) {
      lf3_[m] = q[m - 1] / static_cast<double>(m);
    }
  }

  bool with_log_;
  bool with_loglog_;
  MulBudget* budget_;
  std::size_t len_ = 0;

  CoeffSeries f1_, f2_, df2_, f3_, df3_;
  CoeffSeries lf2_, lf3_;
  std::optional<QuotientState> q2_, q3_;
  bool q3_stale_top_ = false;
};

// One exponent pair (e_log, e_loglog) evaluated over a shared KernelLogChain.
// Holds the Newton exp states and the assembled coefficient prefix.
class FactorSide {
 public:
  FactorSide(const KernelLogChain* chain, double exp_log, double exp_loglog, MulBudget* budget)
      : chain_(chain), e2_(exp_log), e3_(exp_loglog), budget_(budget) {
    const std::size_t m0 = chain_->len();
    len_ = m0;
    if (pure()) {
      coeff_ = chain_->f1();
      return;
    }
    if (combined()) {
      ec_.emplace(scaled_combined_log(m0), m0, budget_);
      coeff_ = convolve(chain_->f1(), ec_->values(), m0, budget_);
      return;
    }
    if (e2_ != 0.0) p2_.emplace(scaled_log(chain_->lf2(), e2_, m0), m0, budget_);
    if (e3_ != 0.0) p3_.emplace(scaled_log(chain_->lf3(), e3_, m0), m0, budget_);
    if (p2_ && p3_) {
      p23_ = convolve(p2_->values(), p3_->values(), m0, budget_);
    } else {
      p23_ = p2_ ? p2_->values() : p3_->values();
    }
    coeff_ = convolve(chain_->f1(), p23_, m0, budget_);
  }

  std::size_t len() const { return len_; }
  const CoeffSeries& coeffs() const { return coeff_; }
  double exp_log() const { return e2_; }
  double exp_loglog() const { return e3_; }

  // Doubles the prefix; the chain must already be extended to 2*len().
  void extend() {
    const std::size_t t = len_;
    const std::size_t nt = 2 * t;
    if (chain_->len() < nt) throw InvalidArgumentError("FactorSide: chain not extended");
    if (pure()) {
      coeff_ = chain_->f1();
      len_ = nt;
      return;
    }
    if (combined()) {
      ec_->extend(scaled_combined_log(nt));
      append(coeff_, product_block(chain_->f1(), ec_->values(), t, nt, budget_));
      len_ = nt;
      return;
    }
    if (p2_) p2_->extend(scaled_log(chain_->lf2(), e2_, nt));
    if (p3_) p3_->extend(scaled_log(chain_->lf3(), e3_, nt));
    if (p2_ && p3_) {
      append(p23_, product_block(p2_->values(), p3_->values(), t, nt, budget_));
    } else {
      p23_ = p2_ ? p2_->values() : p3_->values();
    }
    append(coeff_, product_block(chain_->f1(), p23_, t, nt, budget_));
    len_ = nt;
  }

 private:
  bool pure() const { return e2_ == 0.0 && e3_ == 0.0; }
  bool combined() const { return e3_ != 0.0 && e3_ == -e2_; }

  static void append(CoeffSeries& dst, CoeffSeries block) {
    dst.insert(dst.end(), block.begin(), block.end());
  }

  static CoeffSeries scaled_log(const CoeffSeries& lf, double s, std::size_t n) {
    CoeffSeries h(n);
    for (std::size_t m = 0; m < n; ++m) h[m] = s * lf[m];
    return h;
  }

  CoeffSeries scaled_combined_log(std::size_t n) const {
    CoeffSeries h(n);
    const CoeffSeries& a = chain_->lf2();
    const CoeffSeries& b = chain_->lf3();
    for (std::size_t m = 0; m < n; ++m) h[m] = e2_ * (a[m] - b[m]);
    return h;
  }

  const KernelLogChain* chain_;
  double e2_;
  double e3_;
  MulBudget* budget_;
  std::size_t len_ = 0;
  std::optional<ExpState> p2_, p3_, ec_;
  CoeffSeries p23_;
  CoeffSeries coeff_;
};

// Self-contained stream for one factor: a private chain plus one side.
class FactorStream {
 public:
  FactorStream(double exp_log, double exp_loglog, MulBudget* budget = nullptr,
               std::size_t initial_len = 16)
      : chain_(std::make_unique<KernelLogChain>(exp_log != 0.0, exp_loglog != 0.0, budget,
                                                initial_len)),
        side_(chain_.get(), exp_log, exp_loglog, budget) {}

  std::size_t len() const { return side_.len(); }
  const CoeffSeries& coeffs() const { return side_.coeffs(); }

  void extend() {
    chain_->extend();
    side_.extend();
  }

  void extend_to(std::size_t t) {
    while (len() < t) extend();
  }

 private:
  std::unique_ptr<KernelLogChain> chain_;
  FactorSide side_;
};

// First t coefficients of f(z; exp_log, exp_loglog).
inline CoeffSeries factor_coeffs(double exp_log, double exp_loglog, std::size_t t,
                                 MulBudget* budget = nullptr) {
  if (t == 0) throw InvalidArgumentError("factor_coeffs: zero length");
  if (t == 1) return {1.0};
  FactorStream stream(exp_log, exp_loglog, budget, std::min<std::size_t>(16, fft::ceil_pow2(t)));
  stream.extend_to(fft::ceil_pow2(t));
  CoeffSeries out = stream.coeffs();
  out.resize(t);
  return out;
}

// Right-factor convention: f(z; params.gamma, params.delta_log).
inline CoeffSeries factor_coeffs(const FactorParams& params, std::size_t t,
                                 MulBudget* budget = nullptr) {
  return factor_coeffs(params.gamma, params.delta_log, t, budget);
}

// The left/right factor pair over one shared chain, extended jointly.
// Satisfies convolve(L, R, t) = ones(t) up to roundoff at every length.
class FactorPair {
 public:
  FactorPair(const FactorParams& params, std::size_t initial_len = 16, MulBudget* budget = nullptr)
      : params_(params),
        chain_(std::make_unique<KernelLogChain>(params.gamma != 0.0, params.delta_log != 0.0,
                                                budget, initial_len)),
        left_(chain_.get(), -params.gamma, -params.delta_log, budget),
        right_(chain_.get(), params.gamma, params.delta_log, budget) {}

  const FactorParams& params() const { return params_; }
  const CoeffSeries& left() const { return left_.coeffs(); }
  const CoeffSeries& right() const { return right_.coeffs(); }
  std::size_t len() const { return left_.len(); }

  void extend() {
    chain_->extend();
    left_.extend();
    right_.extend();
  }

  void extend_to(std::size_t t) {
    while (len() < t) extend();
  }

  // max_m |(L*R)[m] - 1| over the first t coefficients.
  double joint_validity_defect(std::size_t t, MulBudget* budget = nullptr) const {
    const CoeffSeries prod = convolve(left(), right(), t, budget);
    double worst = 0.0;
    for (double c : prod) worst = std::max(worst, std::abs(c - 1.0));
    return worst;
  }

 private:
  FactorParams params_;
  std::unique_ptr<KernelLogChain> chain_;
  FactorSide left_;
  FactorSide right_;
};

}  // namespace logcount
