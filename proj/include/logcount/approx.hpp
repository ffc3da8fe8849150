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
#include <cstdint>
#include <vector>

#include "logcount/errors.hpp"
#include "logcount/factor.hpp"
#include "logcount/mechanism.hpp"
#include "logcount/rng.hpp"
#include "logcount/series.hpp"

namespace logcount {

namespace approx_detail {

constexpr long double kGammaEuler = 0.5772156649015328606065120900824024L;
constexpr long double kSqrtPi = 1.7724538509055160272981674833411452L;

// zeta(2) .. zeta(9)
constexpr long double kZeta[] = {
    1.6449340668482264364724151666460252L, 1.2020569031595942853997381615114500L,
    1.0823232337111381915160036965411679L, 1.0369277551433699263313654864570342L,
    1.0173430619844491397145179297909205L, 1.0083492773819228268397975498497968L,
    1.0040773561979443393786852385086525L, 1.0020083928260822144178527692324121L};

}  // namespace approx_detail

// d^k/ds^k (1/Gamma(-s)) at s = -1/2 for k = 0..K, from the Taylor series of
// 1/Gamma(1/2 - u) = (1/sqrt(pi)) exp(sum_j c_j u^j) with coefficients built
// out of polygamma values at 1/2:
//   c_1 = psi(1/2) = -(gamma_E + 2 ln 2),  c_j = -(2^j - 1) zeta(j) / j.
inline std::vector<double> recip_gamma_derivs(std::size_t order) {
  if (order > 8) throw InvalidArgumentError("recip_gamma_derivs: order capped at 8");
  std::vector<long double> c(order + 1, 0.0L);
  if (order >= 1) c[1] = -(approx_detail::kGammaEuler + 2.0L * std::log(2.0L));
  for (std::size_t j = 2; j <= order; ++j) {
    c[j] = -(std::pow(2.0L, static_cast<long double>(j)) - 1.0L) * approx_detail::kZeta[j - 2] /
           static_cast<long double>(j);
  }
  // exp of the series, one coefficient at a time
  std::vector<long double> w(order + 1, 0.0L);
  w[0] = 1.0L;
  for (std::size_t k = 1; k <= order; ++k) {
    long double acc = 0.0L;
    for (std::size_t j = 1; j <= k; ++j) acc += static_cast<long double>(j) * c[j] * w[k - j];
    w[k] = acc / static_cast<long double>(k);
  }
  std::vector<double> derivs(order + 1);
  long double factorial = 1.0L;
  for (std::size_t k = 0; k <= order; ++k) {
    if (k > 0) factorial *= static_cast<long double>(k);
    derivs[k] = static_cast<double>(factorial * w[k] / approx_detail::kSqrtPi);
  }
  return derivs;
}

// First K+1 Taylor coefficients in u of
//   g(u) = (1 - x u)^gamma * (1 + (1/x) ln(1 - x u))^delta
// evaluated numerically at the given x > 0. The sign of the second factor is
// forced by matching the true singular expansion: with ln(1/(1-z)) written as
// (ln m)(1 - u) on the Hankel contour, its iterated log is
// x + ln(1 - u) = x (1 + ln(1 - u)/x), a plus sign. The flipped sign leaves a
// residual error of order 2 delta |psi(1/2)| / (ln m ln ln m) that no
// expansion order can remove; the coefficient-level tests pin this down.
inline std::vector<double> E_taylor(double x, std::size_t order, double gamma, double delta) {
  if (!(x > 0.0)) throw DomainError("E_taylor: requires x > 0");
  const std::size_t n = order + 1;
  CoeffSeries s1(n);
  long double b = 1.0L;
  long double xk = 1.0L;
  s1[0] = 1.0;
  for (std::size_t k = 1; k < n; ++k) {
    b *= (static_cast<long double>(gamma) - static_cast<long double>(k - 1)) /
         static_cast<long double>(k);
    xk *= -static_cast<long double>(x);
    s1[k] = static_cast<double>(b * xk);
  }
  if (delta == 0.0) return s1;
  // inner = 1 + (1/x) ln(1 - x u) = 1 - sum_{k>=1} x^{k-1} u^k / k
  CoeffSeries inner(n);
  inner[0] = 1.0;
  long double xpow = 1.0L;
  for (std::size_t k = 1; k < n; ++k) {
    inner[k] = static_cast<double>(-xpow / static_cast<long double>(k));
    xpow *= static_cast<long double>(x);
  }
  const CoeffSeries s2 = pow_series(inner, delta, n);
  return convolve(s1, s2, n);
}

// Precomputed state for the coefficient expansion: the scaled
// reciprocal-gamma derivatives sqrt(pi) * d^k/ds^k (1/Gamma(-s))|_{s=-1/2},
// the exponents, and the switch tolerance.
struct ExpansionContext {
  std::size_t order = 4;
  double gamma = -0.51;
  double delta_log = 0.51;
  double eta = 1e-3;
  std::vector<double> rg_derivs;  // already scaled by sqrt(pi); rg_derivs[0] = 1

  ExpansionContext(std::size_t order, double gamma, double delta_log, double eta)
      : order(order), gamma(gamma), delta_log(delta_log), eta(eta) {
    const auto is_nonneg_int = [](double v) {
      return v >= 0.0 && v == std::floor(v);
    };
    // The expansion machinery breaks down at nonnegative integer exponents.
    // delta_log = 0 is the benign degenerate case (the loglog factor is
    // absent altogether) and is allowed.
    if (is_nonneg_int(gamma) || (delta_log != 0.0 && is_nonneg_int(delta_log))) {
      throw InvalidArgumentError("ExpansionContext: exponents must not be nonnegative integers");
    }
    if (!(eta > 0.0)) throw InvalidArgumentError("ExpansionContext: eta must be positive");
    rg_derivs = recip_gamma_derivs(order);
    for (double& d : rg_derivs) d *= static_cast<double>(approx_detail::kSqrtPi);
  }
};

// Order-K asymptotic approximation of [z^m] f(z; gamma, delta):
//   (1/sqrt(m pi)) (ln m)^gamma (2 ln ln m)^delta
//     * (1 + sum_{k=1..K} e_k(ln ln m) / (ln m * ln ln m)^k),
// e_k(x) = rg_derivs[k] * E_k(x). Requires m >= 16 so that ln ln m > 1.
inline double approx_coeff(std::size_t m, const ExpansionContext& ctx) {
  if (m < 16) throw DomainError("approx_coeff: requires m >= 16");
  const long double md = static_cast<long double>(m);
  const long double lnm = std::log(md);
  const long double x = std::log(lnm);
  const std::vector<double> e = E_taylor(static_cast<double>(x), ctx.order, ctx.gamma, ctx.delta_log);
  long double corr = 1.0L;
  long double denom = 1.0L;
  for (std::size_t k = 1; k <= ctx.order; ++k) {
    denom *= lnm * x;
    corr += static_cast<long double>(ctx.rg_derivs[k]) * static_cast<long double>(e[k]) / denom;
  }
  const long double lead = std::exp(-0.5L * std::log(md * approx_detail::kSqrtPi *
                                                     approx_detail::kSqrtPi) +
                                    static_cast<long double>(ctx.gamma) * std::log(lnm) +
                                    static_cast<long double>(ctx.delta_log) * std::log(2.0L * x));
  return static_cast<double>(lead * corr);
}

// Right-factor coefficients under the switch rule: exact doubling extensions
// until the expansion's relative error at the top materialized index falls
// below eta, O(1)-per-coefficient extensions afterwards. The switch, once
// taken, is permanent.
class ApproxRightStream {
 public:
  ApproxRightStream(const FactorParams& params, std::size_t order, double eta,
                    MulBudget* budget = nullptr)
      : ctx_(order, params.gamma, params.delta_log, eta),
        exact_(params.gamma, params.delta_log, budget, 2) {
    rhat_ = exact_.coeffs();
  }

  const ExpansionContext& context() const { return ctx_; }
  const CoeffSeries& coeffs() const { return rhat_; }
  std::size_t len() const { return rhat_.size(); }
  bool switched() const { return switched_; }
  // First horizon that was materialized through the expansion (0 = none yet).
  std::size_t switch_horizon() const { return t_star_; }

  void extend() {
    const std::size_t t = rhat_.size();
    const std::size_t nt = 2 * t;
    if (!switched_ && t >= 17) {
      const std::size_t idx = t - 1;
      const double exact_top = rhat_[idx];
      const double approx_top = approx_coeff(idx, ctx_);
      if (std::abs(exact_top - approx_top) <= ctx_.eta * std::abs(exact_top)) {
        switched_ = true;
        t_star_ = nt;
      }
    }
    if (!switched_) {
      exact_.extend_to(nt);
      const CoeffSeries& c = exact_.coeffs();
      rhat_.insert(rhat_.end(), c.begin() + static_cast<std::ptrdiff_t>(t), c.end());
    } else {
      rhat_.resize(nt);
      for (std::size_t m = t; m < nt; ++m) rhat_[m] = approx_coeff(m, ctx_);
    }
  }

  void extend_to(std::size_t t) {
    while (len() < t) extend();
  }

 private:
  ExpansionContext ctx_;
  FactorStream exact_;
  CoeffSeries rhat_;
  bool switched_ = false;
  std::size_t t_star_ = 0;
};

// The approximate streaming counter: identical step contract to Counter, with
// noise calibrated to (1+eta) * C * Delta and outputs produced as
// (Rhat^{-1} M_count y)_t + S_t. The quotient extension costs one series
// division per doubling instead of the full factor pipeline.
class ApproxCounter {
 public:
  ApproxCounter(const FactorParams& params, const PrivacyParams& privacy, std::size_t order,
                double eta, std::uint64_t seed, MulBudget* budget = nullptr)
      : ApproxCounter(params, (1.0 + eta) * privacy.C * compute_sensitivity(params).delta, order,
                      eta, seed, budget) {}

  // Direct noise-scale constructor (sigma is the full scale, including any
  // (1+eta) inflation the caller wants).
  ApproxCounter(const FactorParams& params, double sigma, std::size_t order, double eta,
                std::uint64_t seed, MulBudget* budget = nullptr, double input_bound = 1.0)
      : right_(params, order, eta, budget),
        budget_(budget),
        rng_(seed),
        sigma_(sigma),
        input_bound_(input_bound) {
    if (sigma < 0.0 || !std::isfinite(sigma)) {
      throw InvalidArgumentError("ApproxCounter: bad noise scale");
    }
    materialize(2);
  }

  double sigma() const { return sigma_; }
  std::size_t time() const { return t_; }
  std::size_t horizon() const { return horizon_; }
  bool switched() const { return right_.switched(); }
  std::size_t switch_horizon() const { return right_.switch_horizon(); }
  const CoeffSeries& right_coeffs() const { return right_.coeffs(); }

  // Left factor implied by the current Rhat: Rhat^{-1}/(1-z), materialized on
  // demand for diagnostics and exact variance evaluation.
  CoeffSeries left_hat(std::size_t t) {
    while (horizon_ < t) materialize(horizon_ * 2);
    return divide(CoeffSeries(t, 1.0), right_.coeffs(), t, budget_);
  }

  double step(double x) {
    if (!(x >= 0.0 && x <= input_bound_)) {
      throw SensitivityViolationError("step: input outside the calibrated domain");
    }
    ++t_;
    if (t_ > horizon_) materialize(horizon_ * 2);
    sum_ += x;
    return sum_ + out_->values()[t_ - 1];
  }

 private:
  void materialize(std::size_t target) {
    if (y_.size() < target) {
      const std::size_t old = y_.size();
      y_.resize(target);
      ypsum_.resize(target);
      long double acc = old == 0 ? 0.0L : static_cast<long double>(ypsum_[old - 1]);
      for (std::size_t i = old; i < target; ++i) {
        y_[i] = sigma_ == 0.0 ? 0.0 : sigma_ * rng_.normal(i);
        acc += y_[i];
        ypsum_[i] = static_cast<double>(acc);
      }
    }
    right_.extend_to(target);
    if (!out_.has_value()) {
      out_.emplace(ypsum_, right_.coeffs(), target, budget_);
    } else {
      while (out_->len() < target) out_->extend(ypsum_, right_.coeffs());
    }
    horizon_ = target;
  }

  ApproxRightStream right_;
  MulBudget* budget_;
  CounterRng rng_;
  double sigma_;
  double input_bound_;
  std::size_t t_ = 0;
  double sum_ = 0.0;
  std::size_t horizon_ = 0;
  CoeffSeries y_;
  CoeffSeries ypsum_;  // prefix sums of y = M_count y
  std::optional<QuotientState> out_;  // (M_count y) / Rhat
};

}  // namespace logcount
