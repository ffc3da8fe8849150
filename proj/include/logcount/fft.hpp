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
#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

#include "logcount/budget.hpp"
#include "logcount/errors.hpp"

namespace logcount::fft {

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t ceil_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

namespace detail {

// One shared table of roots exp(-2*pi*i*k/N) for k < N/2, grown on demand to
// the largest transform size requested. Smaller transforms stride into it.
// Readers take a shared_ptr snapshot, so concurrent growth is safe.
class TwiddleCache {
 public:
  using Table = std::vector<std::complex<double>>;

  static TwiddleCache& instance() {
    static TwiddleCache cache;
    return cache;
  }

  std::pair<std::shared_ptr<const Table>, std::size_t> get(std::size_t n) {
    std::lock_guard<std::mutex> lock(mu_);
    if (size_ < n) {
      auto table = std::make_shared<Table>(n / 2);
      const long double step = -2.0L * 3.14159265358979323846264338328L / static_cast<long double>(n);
      for (std::size_t k = 0; k < n / 2; ++k) {
        const long double a = step * static_cast<long double>(k);
        (*table)[k] = {static_cast<double>(std::cos(a)), static_cast<double>(std::sin(a))};
      }
      table_ = std::move(table);
      size_ = n;
    }
    return {table_, size_};
  }

 private:
  std::mutex mu_;
  std::shared_ptr<const Table> table_ = std::make_shared<Table>();
  std::size_t size_ = 0;
};

// Iterative radix-2 Cooley-Tukey on a power-of-two length.
inline void transform_pow2(std::complex<double>* a, std::size_t n, bool inverse) {
  if (n <= 1) return;
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j |= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  auto [table, table_n] = TwiddleCache::instance().get(n);
  const auto& roots = *table;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len >> 1;
    const std::size_t stride = table_n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < half; ++k) {
        std::complex<double> w = roots[k * stride];
        if (inverse) w = std::conj(w);
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + half] * w;
        a[i + k] = u + v;
        a[i + k + half] = u - v;
      }
    }
  }
  if (inverse) {
    const double s = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) a[i] *= s;
  }
}

}  // namespace detail

// Half-complex spectrum of a real length-n sequence: bins[k] = X_k for
// k = 0..n/2 (the remaining bins follow by conjugate symmetry).
struct RealSpectrum {
  std::size_t size = 0;
  std::vector<std::complex<double>> bins;
};

// DFT of x zero-padded to length n (n a power of two, x.size() <= n).
// Implemented as a complex transform of length n/2 on packed sample pairs.
inline RealSpectrum real_fft(std::span<const double> x, std::size_t n, MulBudget* budget) {
  if (!is_pow2(n) || x.size() > n) throw InvalidArgumentError("real_fft: bad transform size");
  if (budget != nullptr) budget->add_transform(n);
  RealSpectrum out;
  out.size = n;
  if (n == 1) {
    out.bins = {std::complex<double>(x.empty() ? 0.0 : x[0], 0.0)};
    return out;
  }
  const std::size_t h = n / 2;
  std::vector<std::complex<double>> z(h);
  for (std::size_t j = 0; j < h; ++j) {
    const double re = 2 * j < x.size() ? x[2 * j] : 0.0;
    const double im = 2 * j + 1 < x.size() ? x[2 * j + 1] : 0.0;
    z[j] = {re, im};
  }
  detail::transform_pow2(z.data(), h, /*inverse=*/false);
  auto [table, table_n] = detail::TwiddleCache::instance().get(n);
  const auto& roots = *table;
  const std::size_t stride = table_n / n;
  out.bins.resize(h + 1);
  out.bins[0] = {z[0].real() + z[0].imag(), 0.0};
  out.bins[h] = {z[0].real() - z[0].imag(), 0.0};
  for (std::size_t k = 1; k < h; ++k) {
    const std::complex<double> zk = z[k];
    const std::complex<double> zc = std::conj(z[h - k]);
    const std::complex<double> even = 0.5 * (zk + zc);
    const std::complex<double> odd = std::complex<double>(0.0, -0.5) * (zk - zc);
    out.bins[k] = even + roots[k * stride] * odd;
  }
  return out;
}

// Inverse of real_fft: spectrum (conjugate-symmetric half bins) -> n reals.
inline std::vector<double> real_ifft(const RealSpectrum& spec, MulBudget* budget) {
  const std::size_t n = spec.size;
  if (!is_pow2(n) || spec.bins.size() != n / 2 + 1) {
    throw InvalidArgumentError("real_ifft: bad spectrum");
  }
  if (budget != nullptr) budget->add_transform(n);
  if (n == 1) return {spec.bins[0].real()};
  const std::size_t h = n / 2;
  auto [table, table_n] = detail::TwiddleCache::instance().get(n);
  const auto& roots = *table;
  const std::size_t stride = table_n / n;
  std::vector<std::complex<double>> z(h);
  for (std::size_t k = 0; k < h; ++k) {
    const std::complex<double> yk = spec.bins[k];
    const std::complex<double> yc = std::conj(spec.bins[h - k]);
    const std::complex<double> even = 0.5 * (yk + yc);
    const std::complex<double> odd = 0.5 * (yk - yc) * std::conj(roots[k * stride]);
    z[k] = even + std::complex<double>(0.0, 1.0) * odd;
  }
  detail::transform_pow2(z.data(), h, /*inverse=*/true);
  std::vector<double> x(n);
  for (std::size_t j = 0; j < h; ++j) {
    x[2 * j] = z[j].real();
    x[2 * j + 1] = z[j].imag();
  }
  return x;
}

inline void pointwise_mul_inplace(RealSpectrum& a, const RealSpectrum& b) {
  if (a.size != b.size) throw InvalidArgumentError("pointwise_mul: size mismatch");
  for (std::size_t k = 0; k < a.bins.size(); ++k) a.bins[k] *= b.bins[k];
}

// a * b mod (z^n - 1) for power-of-two n. Callers are responsible for making
// sure any wrapped-around terms land outside the coefficient range they read.
inline std::vector<double> cyclic_product(std::span<const double> a, std::span<const double> b,
                                          std::size_t n, MulBudget* budget) {
  RealSpectrum sa = real_fft(a, n, budget);
  const RealSpectrum sb = real_fft(b, n, budget);
  pointwise_mul_inplace(sa, sb);
  return real_ifft(sa, budget);
}

}  // namespace logcount::fft
