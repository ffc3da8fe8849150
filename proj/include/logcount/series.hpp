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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "logcount/budget.hpp"
#include "logcount/errors.hpp"
#include "logcount/fft.hpp"

namespace logcount {

// Finite prefix of the Taylor coefficients of an analytic function;
// coeffs[m] is the coefficient of z^m. Doubles throughout: every series in
// this library has coefficients decaying like m^(-1/2) times log factors, so
// the dynamic range is modest.
using CoeffSeries = std::vector<double>;

namespace series_detail {

constexpr std::size_t kDirectThreshold = 16;

inline double at(std::span<const double> v, std::size_t i) {
  return i < v.size() ? v[i] : 0.0;
}

// Truncated schoolbook product, used below the FFT threshold.
inline CoeffSeries direct_truncated_product(std::span<const double> a, std::span<const double> b,
                                            std::size_t n) {
  CoeffSeries out(n, 0.0);
  const std::size_t la = std::min(a.size(), n);
  for (std::size_t i = 0; i < la; ++i) {
    const double ai = a[i];
    if (ai == 0.0) continue;
    const std::size_t lb = std::min(b.size(), n - i);
    for (std::size_t j = 0; j < lb; ++j) out[i + j] += ai * b[j];
  }
  return out;
}

}  // namespace series_detail

// result[m] = sum_j a[j] * b[m-j] for m < n. Charges about one M(n) to the
// budget (three real transforms at the fold-free cyclic size).
inline CoeffSeries convolve(std::span<const double> a, std::span<const double> b, std::size_t n,
                            MulBudget* budget = nullptr) {
  if (n == 0) throw InvalidArgumentError("convolve: zero output length");
  const std::size_t la = std::min(a.size(), n);
  const std::size_t lb = std::min(b.size(), n);
  if (la == 0 || lb == 0) return CoeffSeries(n, 0.0);
  const std::size_t full = la + lb - 1;
  if (full <= series_detail::kDirectThreshold) {
    if (budget != nullptr) budget->add_product(n);
    return series_detail::direct_truncated_product(a.first(la), b.first(lb), n);
  }
  const std::size_t s = fft::ceil_pow2(full);
  CoeffSeries out = fft::cyclic_product(a.first(la), b.first(lb), s, budget);
  out.resize(n, 0.0);
  return out;
}

// (a * b)[from .. to), computed at a fold-free transform size so no cyclic
// wrap-around can reach the requested window.
inline CoeffSeries product_block(std::span<const double> a, std::span<const double> b,
                                 std::size_t from, std::size_t to, MulBudget* budget = nullptr) {
  if (to <= from) throw InvalidArgumentError("product_block: empty window");
  if (a.empty() || b.empty()) return CoeffSeries(to - from, 0.0);
  const std::size_t full = a.size() + b.size() - 1;
  CoeffSeries prod;
  if (full <= series_detail::kDirectThreshold) {
    if (budget != nullptr) budget->add_product(full);
    prod = series_detail::direct_truncated_product(a, b, full);
  } else {
    prod = fft::cyclic_product(a, b, fft::ceil_pow2(full), budget);
  }
  CoeffSeries out(to - from, 0.0);
  for (std::size_t m = from; m < to && m < prod.size(); ++m) out[m - from] = prod[m];
  return out;
}

inline CoeffSeries derivative(std::span<const double> a) {
  if (a.size() <= 1) return {0.0};
  CoeffSeries out(a.size() - 1);
  for (std::size_t m = 0; m + 1 < a.size(); ++m) {
    out[m] = static_cast<double>(m + 1) * a[m + 1];
  }
  return out;
}

inline CoeffSeries antiderivative(std::span<const double> a) {
  CoeffSeries out(a.size() + 1, 0.0);
  for (std::size_t m = 0; m < a.size(); ++m) {
    out[m + 1] = a[m] / static_cast<double>(m + 1);
  }
  return out;
}

// Newton state for 1/a. Holds the current prefix of the reciprocal; extend()
// doubles it. Already-emitted coefficients are never rewritten.
class ReciprocalState {
 public:
  ReciprocalState(std::span<const double> a, std::size_t initial_len, MulBudget* budget)
      : budget_(budget) {
    if (a.empty() || a[0] == 0.0) {
      throw NonInvertibleSeriesError("reciprocal: constant term is zero");
    }
    const std::size_t m = std::max<std::size_t>(1, initial_len);
    b_.resize(m, 0.0);
    b_[0] = 1.0 / a[0];
    for (std::size_t k = 1; k < m; ++k) {
      double acc = 0.0;
      for (std::size_t j = 1; j <= k; ++j) acc += series_detail::at(a, j) * b_[k - j];
      b_[k] = -acc * b_[0];
    }
    if (budget_ != nullptr && m > 1) budget_->add_product(m);
  }

  const CoeffSeries& values() const { return b_; }
  std::size_t len() const { return b_.size(); }

  // Doubles the prefix; needs the first 2*len() coefficients of a.
  void extend(std::span<const double> a) {
    const std::size_t k = b_.size();
    const std::size_t s = 2 * k;
    if (!fft::is_pow2(k)) throw InvalidArgumentError("reciprocal extend: length not a power of two");
    // e = (a * b mod z^{2k}) restricted to [k, 2k); the cyclic wrap of the
    // degree-(3k-2) product lands in [0, k-2] and cannot touch that window.
    fft::RealSpectrum sa = fft::real_fft(std::span<const double>(a).first(std::min(a.size(), s)), s, budget_);
    const fft::RealSpectrum sb = fft::real_fft(b_, s, budget_);
    fft::pointwise_mul_inplace(sa, sb);
    const CoeffSeries g = fft::real_ifft(sa, budget_);
    CoeffSeries e(k);
    for (std::size_t j = 0; j < k; ++j) e[j] = g[k + j];
    // b_{2k} = b_k - z^k * (b_k * e mod z^k); the product has degree 2k-2, so
    // the same transform size is exact.
    fft::RealSpectrum se = fft::real_fft(e, s, budget_);
    fft::pointwise_mul_inplace(se, sb);
    const CoeffSeries p = fft::real_ifft(se, budget_);
    b_.resize(2 * k);
    for (std::size_t j = 0; j < k; ++j) b_[k + j] = -p[j];
  }

 private:
  CoeffSeries b_;
  MulBudget* budget_;
};

// Newton state for num/den with the reciprocal of den maintained at half
// length, Karp-Markstein style: each extension folds the dividend into the
// final correction instead of refining the reciprocal all the way.
class QuotientState {
 public:
  QuotientState(std::span<const double> num, std::span<const double> den, std::size_t initial_len,
                MulBudget* budget)
      : binv_(den, std::max<std::size_t>(1, initial_len / 2), budget), budget_(budget) {
    if (den.empty() || den[0] == 0.0) throw NonInvertibleSeriesError("divide: constant term is zero");
    const std::size_t m = std::max<std::size_t>(1, initial_len);
    q_.resize(m, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
      double acc = series_detail::at(num, k);
      for (std::size_t j = 1; j <= k; ++j) acc -= series_detail::at(den, j) * q_[k - j];
      q_[k] = acc / den[0];
    }
    if (budget_ != nullptr && m > 1) budget_->add_product(m);
  }

  const CoeffSeries& values() const { return q_; }
  std::size_t len() const { return q_.size(); }

  // Applies a correction to the most recently produced coefficient. For a
  // numerator whose top term was unknown (taken as zero) at extension time,
  // the induced error is exactly that term times 1/den[0], and it is confined
  // to the last entry.
  void adjust_last(double delta) { q_.back() += delta; }

  // Doubles the quotient prefix; needs num and den materialized to 2*len().
  void extend(std::span<const double> num, std::span<const double> den) {
    const std::size_t t = q_.size();
    const std::size_t s = 2 * t;
    if (!fft::is_pow2(t)) throw InvalidArgumentError("quotient extend: length not a power of two");
    if (binv_.len() < t) binv_.extend(den);
    // residual block r = (num - den * q)[t, 2t); deg(den * q) <= 3t-2 wraps
    // into [0, t-2] only.
    fft::RealSpectrum sden =
        fft::real_fft(std::span<const double>(den).first(std::min(den.size(), s)), s, budget_);
    const fft::RealSpectrum sq = fft::real_fft(q_, s, budget_);
    fft::pointwise_mul_inplace(sden, sq);
    const CoeffSeries g = fft::real_ifft(sden, budget_);
    CoeffSeries r(t);
    for (std::size_t j = 0; j < t; ++j) r[j] = series_detail::at(num, t + j) - g[t + j];
    // q += z^t * (binv * r mod z^t); degree 2t-2, fold-free at size 2t.
    fft::RealSpectrum sb = fft::real_fft(binv_.values(), s, budget_);
    const fft::RealSpectrum sr = fft::real_fft(r, s, budget_);
    fft::pointwise_mul_inplace(sb, sr);
    const CoeffSeries p = fft::real_ifft(sb, budget_);
    q_.resize(2 * t);
    for (std::size_t j = 0; j < t; ++j) q_[t + j] = p[j];
  }

 private:
  CoeffSeries q_;
  ReciprocalState binv_;
  MulBudget* budget_;
};

// Newton state for w = exp(h), h[0] = 0, with 1/w maintained at half length.
// extend() consumes the next block of h and appends the next block of w, so
// one doubling costs 1.75 M(t) and already-emitted coefficients never change.
class ExpState {
 public:
  ExpState(std::span<const double> h, std::size_t initial_len, MulBudget* budget)
      : budget_(budget) {
    const std::size_t m = std::max<std::size_t>(1, initial_len);
    w_.resize(m, 0.0);
    w_[0] = 1.0;
    for (std::size_t k = 1; k < m; ++k) {
      double acc = 0.0;
      for (std::size_t j = 1; j <= k; ++j) {
        acc += static_cast<double>(j) * series_detail::at(h, j) * w_[k - j];
      }
      w_[k] = acc / static_cast<double>(k);
    }
    if (budget_ != nullptr && m > 1) budget_->add_product(m);
    v_.emplace(w_, std::max<std::size_t>(1, m / 2), budget);
  }

  // Warm start: adopt an existing half-size result verbatim.
  ExpState(CoeffSeries warm, MulBudget* budget) : w_(std::move(warm)), budget_(budget) {
    if (w_.empty() || w_[0] != 1.0) throw NormalizationError("exp warm start: w[0] must be 1");
    v_.emplace(w_, w_.size(), budget_);
    while (v_->len() < w_.size()) v_->extend(w_);
  }

  const CoeffSeries& values() const { return w_; }
  std::size_t len() const { return w_.size(); }

  // Doubles w using the next block of h (needs h[0 .. 2*len())).
  void extend(std::span<const double> h) {
    const std::size_t t = w_.size();
    const std::size_t s = 2 * t;
    if (!fft::is_pow2(t)) throw InvalidArgumentError("exp extend: length not a power of two");
    if (v_->len() < t) v_->extend(w_);
    // u = (ln w)' agrees with h' below t-1; extend it to 2t-1 terms by one
    // quotient step against den = w, then integrate to get ln w on [t, 2t).
    const fft::RealSpectrum sw = fft::real_fft(w_, s, budget_);
    CoeffSeries hp(t > 1 ? t - 1 : 1, 0.0);
    for (std::size_t m = 0; m + 1 < t; ++m) hp[m] = static_cast<double>(m + 1) * series_detail::at(h, m + 1);
    fft::RealSpectrum shp = fft::real_fft(hp, s, budget_);
    fft::pointwise_mul_inplace(shp, sw);
    const CoeffSeries g = fft::real_ifft(shp, budget_);
    // w' is a polynomial of degree t-2, so the residual block is just -g.
    CoeffSeries r(t);
    for (std::size_t j = 0; j < t; ++j) r[j] = -g[t - 1 + j];
    fft::RealSpectrum sv = fft::real_fft(v_->values(), s, budget_);
    const fft::RealSpectrum sr = fft::real_fft(r, s, budget_);
    fft::pointwise_mul_inplace(sv, sr);
    const CoeffSeries u = fft::real_ifft(sv, budget_);
    // err = h - ln w on [t, 2t); zero below t by the induction invariant.
    CoeffSeries err(t);
    for (std::size_t j = 0; j < t; ++j) {
      err[j] = series_detail::at(h, t + j) - u[j] / static_cast<double>(t + j);
    }
    fft::RealSpectrum serr = fft::real_fft(err, s, budget_);
    fft::pointwise_mul_inplace(serr, sw);
    const CoeffSeries dw = fft::real_ifft(serr, budget_);
    w_.resize(2 * t);
    for (std::size_t j = 0; j < t; ++j) w_[t + j] = dw[j];
  }

 private:
  CoeffSeries w_;
  std::optional<ReciprocalState> v_;
  MulBudget* budget_;
};

// 1/a to n terms. Costs about 1.7 M(n).
inline CoeffSeries reciprocal(std::span<const double> a, std::size_t n, MulBudget* budget = nullptr) {
  if (n == 0) throw InvalidArgumentError("reciprocal: zero length");
  const std::size_t target = fft::ceil_pow2(n);
  ReciprocalState st(a, std::min(target, series_detail::kDirectThreshold), budget);
  while (st.len() < target) st.extend(a);
  CoeffSeries out = st.values();
  out.resize(n);
  return out;
}

// num/den to n terms: a half-size reciprocal plus one Karp-Markstein
// correction, about 2.17 M(n) in total.
inline CoeffSeries divide(std::span<const double> num, std::span<const double> den, std::size_t n,
                          MulBudget* budget = nullptr) {
  if (n == 0) throw InvalidArgumentError("divide: zero length");
  if (den.empty() || den[0] == 0.0) throw NonInvertibleSeriesError("divide: constant term is zero");
  const std::size_t target = fft::ceil_pow2(n);
  if (target <= 2 * series_detail::kDirectThreshold) {
    QuotientState st(num, den, target, budget);
    CoeffSeries out = st.values();
    out.resize(n);
    return out;
  }
  const std::size_t h = target / 2;
  const CoeffSeries b = reciprocal(den, h, budget);
  // q0 = num * b mod z^h; degree <= target-2, fold-free at the full size.
  fft::RealSpectrum snum =
      fft::real_fft(std::span<const double>(num).first(std::min(num.size(), h)), target, budget);
  const fft::RealSpectrum sb = fft::real_fft(b, target, budget);
  fft::pointwise_mul_inplace(snum, sb);
  CoeffSeries q = fft::real_ifft(snum, budget);
  q.resize(h);
  // residual block r = (num - den * q0)[h, 2h)
  fft::RealSpectrum sden =
      fft::real_fft(std::span<const double>(den).first(std::min(den.size(), target)), target, budget);
  const fft::RealSpectrum sq = fft::real_fft(q, target, budget);
  fft::pointwise_mul_inplace(sden, sq);
  const CoeffSeries g = fft::real_ifft(sden, budget);
  CoeffSeries r(h);
  for (std::size_t j = 0; j < h; ++j) r[j] = series_detail::at(num, h + j) - g[h + j];
  fft::RealSpectrum sr = fft::real_fft(r, target, budget);
  fft::pointwise_mul_inplace(sr, sb);
  const CoeffSeries p = fft::real_ifft(sr, budget);
  q.resize(target);
  for (std::size_t j = 0; j < h; ++j) q[h + j] = p[j];
  q.resize(n);
  return q;
}

// ln(a) to n terms via term-by-term integration of a'/a; requires a[0] = 1 so
// the missing constant of integration is 0. About 2.2 M(n).
inline CoeffSeries log_series(std::span<const double> a, std::size_t n, MulBudget* budget = nullptr) {
  if (n == 0) throw InvalidArgumentError("log_series: zero length");
  if (a.empty() || std::abs(a[0] - 1.0) > 1e-9) {
    throw NormalizationError("log_series: constant term must be 1");
  }
  CoeffSeries out(n, 0.0);
  if (n == 1) return out;
  const CoeffSeries da = derivative(a);
  const CoeffSeries u = divide(da, a, n - 1, budget);
  for (std::size_t m = 1; m < n; ++m) out[m] = u[m - 1] / static_cast<double>(m);
  return out;
}

// exp(h) to n terms, h[0] = 0. With a warm start of length n/2 this performs
// a single Newton refinement (about 2.17 M(n)) and returns the warm prefix
// verbatim; without one it doubles from scratch.
inline CoeffSeries exp_series(std::span<const double> h, std::size_t n,
                              const CoeffSeries* warm_start = nullptr,
                              MulBudget* budget = nullptr) {
  if (n == 0) throw InvalidArgumentError("exp_series: zero length");
  if (!h.empty() && std::abs(h[0]) > 1e-9) {
    throw NormalizationError("exp_series: constant term must be 0");
  }
  const std::size_t target = fft::ceil_pow2(n);
  if (warm_start != nullptr) {
    if (warm_start->size() * 2 != target) {
      throw InvalidArgumentError("exp_series: warm start must have length n/2");
    }
    ExpState st(*warm_start, budget);
    st.extend(h);
    CoeffSeries out = st.values();
    out.resize(n);
    return out;
  }
  ExpState st(h, std::min(target, series_detail::kDirectThreshold), budget);
  while (st.len() < target) st.extend(h);
  CoeffSeries out = st.values();
  out.resize(n);
  return out;
}

// a^s = exp(s * ln(a)) to n terms, a[0] = 1.
inline CoeffSeries pow_series(std::span<const double> a, double s, std::size_t n,
                              MulBudget* budget = nullptr) {
  if (n == 0) throw InvalidArgumentError("pow_series: zero length");
  if (a.empty() || std::abs(a[0] - 1.0) > 1e-9) {
    throw NormalizationError("pow_series: constant term must be 1");
  }
  if (s == 0.0) {
    CoeffSeries out(n, 0.0);
    out[0] = 1.0;
    return out;
  }
  CoeffSeries h = log_series(a, n, budget);
  for (double& c : h) c *= s;
  return exp_series(h, n, nullptr, budget);
}

}  // namespace logcount
