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
//
// End-to-end acceptance suite. Each numbered check prints one PASS/FAIL line;
// the exit code is the number of failures. Checks 4 and the hybrid half of 6
// encode claims that the exact limiting sensitivity provably cannot satisfy;
// they are implemented as stated and report their measured values (see the
// analysis notes printed alongside).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "logcount/approx.hpp"
#include "logcount/baselines.hpp"
#include "logcount/factor.hpp"
#include "logcount/mechanism.hpp"
#include "logcount/quadrature.hpp"
#include "logcount/sensitivity.hpp"
#include "logcount/series.hpp"

namespace {

using logcount::CoeffSeries;
using logcount::FactorParams;

int failures = 0;
std::chrono::steady_clock::time_point t_start;

void begin() { t_start = std::chrono::steady_clock::now(); }

void report(const std::string& label, bool pass, const std::string& detail) {
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - t_start)
                      .count();
  std::printf("[%s] %s (%s) [%lldms]\n", pass ? "PASS" : "FAIL", label.c_str(), detail.c_str(),
              static_cast<long long>(ms));
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. Joint validity of the factor pair at 1e-9 through n = 2^12.
void criterion_1() {
  begin();
  bool pass = true;
  std::string detail;
  for (double delta_log : {0.0, 0.51, 0.612}) {
    logcount::FactorPair pair(FactorParams{-0.51, delta_log}, 2);
    pair.extend_to(std::size_t{1} << 12);
    for (std::size_t n : {std::size_t{1} << 4, std::size_t{1} << 8, std::size_t{1} << 12}) {
      const double defect = pair.joint_validity_defect(n);
      if (!(defect <= 1e-9)) pass = false;
      if (n == (std::size_t{1} << 12)) {
        detail += "d=" + fmt(delta_log) + ":" + fmt(defect) + " ";
      }
    }
  }
  report("criterion 1: joint validity <= 1e-9 at n in {2^4, 2^8, 2^12}", pass,
         "max defects " + detail);
}

// ---------------------------------------------------------------------------
// 2. Quadrature vs Parseval partial sums, with the asymptotic tail model
//    closing the gap to within 0.5%.

// integral of the squared order-K coefficient model over m in [N, inf),
// via v = ln m and then xi = (ln N / v)^{2 alpha} to absorb the slow tail
double tail_model(const FactorParams& p, std::size_t n_from, std::size_t order) {
  const long double alpha = -0.5L - static_cast<long double>(p.gamma);
  const long double v0 = std::log(static_cast<long double>(n_from));
  const logcount::ExpansionContext ctx(order, p.gamma, p.delta_log, 1e-3);
  const auto h = [&](const logcount::quad::Node& node) -> long double {
    const long double ln_v = std::log(v0) - node.log_y / (2.0L * alpha);
    const long double x = ln_v;  // ln V, the argument of the e_k polynomials
    const auto e = logcount::E_taylor(static_cast<double>(x), ctx.order, ctx.gamma, ctx.delta_log);
    long double corr = 1.0L;
    for (std::size_t k = 1; k <= ctx.order; ++k) {
      corr += static_cast<long double>(ctx.rg_derivs[k]) * static_cast<long double>(e[k]) *
              std::exp(-static_cast<long double>(k) * (ln_v + std::log(x)));
    }
    long double value = corr * corr / 3.14159265358979323846264338328L;
    if (p.delta_log != 0.0) {
      value *= std::exp(2.0L * static_cast<long double>(p.delta_log) * std::log(2.0L * x));
    }
    return value;
  };
  const auto q = logcount::quad::tanh_sinh_01(h, 1e-11L);
  const long double scale = std::exp(-2.0L * alpha * std::log(v0)) / (2.0L * alpha);
  return static_cast<double>(scale * q.value);
}

void criterion_2() {
  begin();
  bool pass = true;
  std::string detail;
  for (double delta_log : {0.0, 0.51}) {
    const FactorParams p{-0.51, delta_log};
    const auto sens = logcount::compute_sensitivity(p, 1e-12);
    logcount::FactorStream right(p.gamma, p.delta_log, nullptr, 2);
    std::vector<double> partials;
    long double acc = 0.0L;
    std::size_t consumed = 0;
    for (std::size_t n = std::size_t{1} << 10; n <= (std::size_t{1} << 22); n <<= 2) {
      right.extend_to(n);
      for (; consumed < n; ++consumed) {
        const double c = right.coeffs()[consumed];
        acc += static_cast<long double>(c) * c;
      }
      partials.push_back(static_cast<double>(acc));
    }
    double prev_gap = 1e300;
    for (double s : partials) {
      if (!(s < sens.delta_sq)) pass = false;
      const double gap = sens.delta_sq - s;
      if (!(gap < prev_gap)) pass = false;
      prev_gap = gap;
    }
    const double extrapolated = partials.back() + tail_model(p, std::size_t{1} << 22, 4);
    const double rel = std::abs(extrapolated - sens.delta_sq) / sens.delta_sq;
    if (!(rel <= 0.005)) pass = false;
    detail += "d=" + fmt(delta_log) + ": quad " + fmt(sens.delta_sq) + " vs extrapolated " +
              fmt(extrapolated) + " (rel " + fmt(rel) + ", partial(2^22) " +
              fmt(partials.back()) + ")  ";
  }
  report("criterion 2: sensitivity cross-validation within 0.5%", pass, detail);
}

// ---------------------------------------------------------------------------
// 3. alpha = 0 diverges: the quadrature refuses and the partial sums never
//    settle (doubling increments stay put instead of shrinking geometrically).
void criterion_3() {
  begin();
  bool threw = false;
  try {
    logcount::compute_sensitivity(FactorParams{-0.5, 0.0});
  } catch (const logcount::DivergentSensitivityError&) {
    threw = true;
  }
  std::vector<double> sums;
  logcount::FactorStream right(-0.5, 0.0, nullptr, 2);
  long double acc = 0.0L;
  std::size_t consumed = 0;
  for (std::size_t n : {std::size_t{1} << 10, std::size_t{1} << 14, std::size_t{1} << 18}) {
    right.extend_to(n);
    for (; consumed < n; ++consumed) {
      acc += static_cast<long double>(right.coeffs()[consumed]) * right.coeffs()[consumed];
    }
    sums.push_back(static_cast<double>(acc));
  }
  const double inc1 = sums[1] - sums[0];
  const double inc2 = sums[2] - sums[1];
  // The divergent tail behaves like sum 1/(m ln m): quadrupling increments
  // shrink only through ratios of iterated logs (toward 1, from ~0.75 at
  // these scales), nothing like a geometric tail.
  const bool growing = sums[2] > sums[1] && sums[1] > sums[0] && inc2 > 0.5 * inc1;
  report("criterion 3: divergence guard at alpha = 0", threw && growing,
         "error thrown: " + std::string(threw ? "yes" : "no") + ", increments " + fmt(inc1) +
             " then " + fmt(inc2));
}

// ---------------------------------------------------------------------------
// Shared profile for criteria 4-6.
struct Profiles {
  logcount::VarianceProfile log_default;   // gamma -0.51, delta_log 0.51, sigma = C * Delta
  logcount::VarianceProfile log_fast_raw;  // delta_log 0, sigma = 1 (shape checks)
  double c_mult;
  double delta_sq_default;
};

Profiles make_profiles() {
  const logcount::PrivacyParams privacy(1.0, 1e-6);
  const FactorParams def{-0.51, 0.51};
  const auto sens = logcount::compute_sensitivity(def);
  return Profiles{logcount::VarianceProfile(def, privacy.C * sens.delta),
                  logcount::VarianceProfile(FactorParams{-0.51, 0.0}, 1.0), privacy.C,
                  sens.delta_sq};
}

// 4. Variance ratio against the exactly-calibrated bounded baseline.
void criterion_4(Profiles& profiles) {
  begin();
  logcount::RsqrtNorms norms;
  bool pass = true;
  double worst = 0.0;
  std::string samples;
  for (std::size_t k = 0; k <= 20; ++k) {
    const std::size_t t = std::size_t{1} << k;
    const double ratio = profiles.log_default.at(t) /
                         (profiles.c_mult * profiles.c_mult * norms.s1(t) * norms.s1(t));
    worst = std::max(worst, ratio);
    if (!(ratio <= 1.5)) pass = false;
    if (k % 5 == 0) samples += "2^" + std::to_string(k) + ":" + fmt(ratio) + " ";
  }
  report("criterion 4: variance ratio vs sqrt baseline <= 1.5 for t = 2^k, k <= 20", pass,
         "ratios " + samples + "worst " + fmt(worst));
  if (!pass) {
    std::printf(
        "       note: the ratio at t = 1 equals Delta^2 itself, and the exact limit\n"
        "       Delta^2(-0.51, 0.51) = %.1f is dominated by Parseval mass near\n"
        "       ln ln m ~ delta/alpha, far beyond any reachable stream length. The\n"
        "       partial sums (criterion 2) already exceed 1.5 by 2^10, so no noise\n"
        "       calibrated to the true limit can meet this bound; it is attainable\n"
        "       only by truncating the sensitivity, which criterion 2 and the\n"
        "       unbounded-privacy contract both forbid.\n",
        profiles.delta_sq_default);
  }
}

// 5. Row-norm growth shape: || [L]_t ||^2 / ln^{2+2 alpha}(t) flat to 20%
//    across the top three octaves of 2^10..2^20.
void criterion_5(Profiles& profiles) {
  begin();
  const double expo = 2.0 + 2.0 * 0.01;
  bool pass = true;
  std::string detail;
  const auto shape = [&](logcount::VarianceProfile& profile, const char* name) {
    std::vector<double> ratios;
    for (std::size_t k = 16; k <= 20; k += 2) {
      const std::size_t t = std::size_t{1} << k;
      ratios.push_back(profile.squared_row_norm(t) /
                       std::pow(std::log(static_cast<double>(t)), expo));
    }
    const double lo = std::min({ratios[0], ratios[1], ratios[2]});
    const double hi = std::max({ratios[0], ratios[1], ratios[2]});
    if (!(hi / lo <= 1.2)) pass = false;
    detail += std::string(name) + " spread " + fmt(hi / lo) + " ";
  };
  shape(profiles.log_default, "delta=0.51");
  shape(profiles.log_fast_raw, "delta=0");
  report("criterion 5: row-norm growth flat within 20% over the top octaves", pass, detail);
}

// 6. Smoothness of the log-factorization mechanism vs epoch jumps of the
//    hybrid.
void criterion_6(Profiles& profiles) {
  begin();
  double worst_main = 0.0;
  for (std::size_t t = 64; t < (std::size_t{1} << 16); ++t) {
    worst_main =
        std::max(worst_main, profiles.log_default.at(t + 1) / profiles.log_default.at(t));
  }
  const bool smooth_ok = worst_main <= 1.02;

  bool hybrid_ok = false;
  std::string hybrid_detail;
  for (auto variant :
       {logcount::HybridConfig::Unbounded::kIndependent,
        logcount::HybridConfig::Unbounded::kLogMatrix}) {
    logcount::HybridConfig config;
    config.unbounded_variant = variant;
    logcount::HybridVariance hv(config, 1.0);
    bool all = true;
    double closest = 1e300;
    for (std::size_t k = 8; k <= 14; ++k) {
      const double ratio =
          hv.at(std::size_t{1} << k) / hv.at((std::size_t{1} << k) - 1);
      closest = std::min(closest, ratio);
      if (!(ratio > 1.1)) all = false;
      if (variant == logcount::HybridConfig::Unbounded::kIndependent && (k == 8 || k == 14)) {
        hybrid_detail += "k=" + std::to_string(k) + ":" + fmt(ratio) + " ";
      }
    }
    if (all) hybrid_ok = true;
  }
  report("criterion 6: logmatrix increment ratio <= 1.02 and hybrid boundary ratio > 1.1",
         smooth_ok && hybrid_ok,
         "logmatrix worst " + fmt(worst_main) + "; hybrid V(2^k)/V(2^k-1) " + hybrid_detail);
  if (smooth_ok && !hybrid_ok) {
    std::printf(
        "       note: the bounded component restarts at t = 2^k with a fresh row\n"
        "       norm, so the hybrid's variance DROPS at the boundary (ratios ~0.9)\n"
        "       and spikes at epoch ends instead; the move exceeds 10%% in magnitude\n"
        "       but in the inverse direction of the stated inequality. The\n"
        "       non-smoothness itself is real and measured above.\n");
  }
}

// ---------------------------------------------------------------------------
// 7. The approximate counter: early switch, joint validity by construction,
//    variance within (1+eta)^2 of the exact mechanism.
void criterion_7() {
  begin();
  const FactorParams p{-0.51, 0.0};
  const double eta = 1e-3;
  logcount::ApproxRightStream right(p, 4, eta);
  right.extend_to(std::size_t{1} << 16);
  const bool switched = right.switched() && right.switch_horizon() <= (std::size_t{1} << 13);

  bool validity = true;
  for (std::size_t n : {std::size_t{1} << 14, std::size_t{1} << 16}) {
    const CoeffSeries lhat = logcount::divide(CoeffSeries(n, 1.0), right.coeffs(), n);
    const CoeffSeries prod = logcount::convolve(right.coeffs(), lhat, n);
    for (double c : prod) {
      if (!(std::abs(c - 1.0) <= 1e-9)) validity = false;
    }
  }

  const std::size_t t = std::size_t{1} << 16;
  const CoeffSeries lhat = logcount::divide(CoeffSeries(t, 1.0), right.coeffs(), t);
  const CoeffSeries left = logcount::factor_coeffs(-p.gamma, -p.delta_log, t);
  long double hat_sq = 0.0L, exact_sq = 0.0L;
  for (std::size_t m = 0; m < t; ++m) {
    hat_sq += static_cast<long double>(lhat[m]) * lhat[m];
    exact_sq += static_cast<long double>(left[m]) * left[m];
  }
  // sigma_2^2 = (1+eta)^2 sigma_1^2, so the target ratio reduces to the row
  // norms of the implied and exact left factors
  const double ratio = static_cast<double>(hat_sq / exact_sq);
  const bool var_ok = std::abs(ratio - 1.0) <= 0.01;

  report("criterion 7: approximate counter switches early and stays faithful",
         switched && validity && var_ok,
         "switch horizon " + std::to_string(right.switch_horizon()) + ", row-norm ratio " +
             fmt(ratio));
}

// ---------------------------------------------------------------------------
// 8. Monte Carlo noise-scale checks for both streaming mechanisms.
void criterion_8() {
  begin();
  const FactorParams p{-0.51, 0.51};
  const std::vector<std::size_t> probes{16, 256, 4096};
  const std::size_t kSeeds = 10000;
  bool pass = true;
  std::string detail;

  // --- log-factorization counter, sigma = 1
  {
    logcount::VarianceProfile profile(p, 1.0);
    const CoeffSeries left = logcount::factor_coeffs(-p.gamma, -p.delta_log, 4096);
    // validate the direct evaluation against the driven mechanism
    for (std::uint64_t seed = 1; seed <= 32; ++seed) {
      logcount::Counter counter(p, 1.0, seed);
      logcount::CounterRng rng(seed);
      std::size_t probe = 0;
      for (std::size_t t = 1; t <= 4096 && probe < probes.size(); ++t) {
        const double out = counter.step(0.0);
        if (t != probes[probe]) continue;
        long double direct = 0.0L;
        for (std::size_t m = 0; m < t; ++m) {
          direct += static_cast<long double>(left[m]) * rng.normal(t - 1 - m);
        }
        if (std::abs(out - static_cast<double>(direct)) > 1e-9) pass = false;
        ++probe;
      }
    }
    // volume via the validated direct path
    std::vector<long double> sq(probes.size(), 0.0L);
    for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
      logcount::CounterRng rng(seed);
      std::vector<double> noise(4096);
      for (std::size_t i = 0; i < 4096; ++i) noise[i] = rng.normal(i);
      for (std::size_t pi = 0; pi < probes.size(); ++pi) {
        const std::size_t t = probes[pi];
        long double out = 0.0L;
        for (std::size_t m = 0; m < t; ++m) {
          out += static_cast<long double>(left[m]) * noise[t - 1 - m];
        }
        sq[pi] += out * out;
      }
    }
    for (std::size_t pi = 0; pi < probes.size(); ++pi) {
      const double empirical = static_cast<double>(sq[pi] / kSeeds);
      const double want = profile.at(probes[pi]);
      const double rel = std::abs(empirical / want - 1.0);
      if (!(rel <= 0.05)) pass = false;
      detail += "log@" + std::to_string(probes[pi]) + ":" + fmt(rel) + " ";
    }
  }

  // --- hybrid mechanism (independent variant, reuse on), scale 1
  {
    logcount::HybridConfig config;
    logcount::HybridVariance hv(config, 1.0);
    const double cb = 1.0 / std::sqrt(config.rho);
    const double cu = 1.0 / std::sqrt(1.0 - config.rho);
    logcount::RsqrtNorms norms;
    CoeffSeries f1 = logcount::rsqrt_coeffs(4096);
    // direct zero-stream output of the hybrid at time t
    const auto direct_at = [&](std::uint64_t seed, std::size_t t) -> double {
      logcount::CounterRng zb(seed, 1);
      logcount::CounterRng gu(seed, 2);
      std::size_t k = 0;
      while ((std::size_t{2} << k) <= t) ++k;
      const std::size_t epoch = std::size_t{1} << k;
      const std::size_t r = t - epoch;
      long double bounded = 0.0L;
      for (std::size_t m = 0; m <= r; ++m) {
        bounded += static_cast<long double>(f1[m]) * zb.normal(epoch + r - m);
      }
      bounded *= cb * std::sqrt(norms.s1(epoch));
      if (k == 0) return static_cast<double>(bounded);
      long double u = 0.0L;
      for (std::size_t i = 0; i < k; ++i) u += gu.normal(i);
      u *= cu;
      long double finals = 0.0L;
      for (std::size_t i = 0; i < k; ++i) {
        const std::size_t e = std::size_t{1} << i;
        long double fin = 0.0L;
        for (std::size_t m = 0; m < e; ++m) {
          fin += static_cast<long double>(f1[m]) * zb.normal(e + e - 1 - m);
        }
        finals += fin * cb * std::sqrt(norms.s1(e));
      }
      const double var_u = hv.unbounded_raw_variance(k);
      const double var_f = hv.finals_variance(k);
      const double wu = var_f / (var_u + var_f);
      return static_cast<double>(wu * u + (1.0 - wu) * finals + bounded);
    };
    // validate against the driven stream
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
      logcount::HybridStream stream(config, 1.0, seed);
      std::size_t probe = 0;
      for (std::size_t t = 1; t <= 4096 && probe < probes.size(); ++t) {
        const double out = stream.step(0.0);
        if (t != probes[probe]) continue;
        if (std::abs(out - direct_at(seed, t)) > 1e-9) pass = false;
        ++probe;
      }
    }
    std::vector<long double> sq(probes.size(), 0.0L);
    for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
      for (std::size_t pi = 0; pi < probes.size(); ++pi) {
        const double out = direct_at(seed, probes[pi]);
        sq[pi] += static_cast<long double>(out) * out;
      }
    }
    for (std::size_t pi = 0; pi < probes.size(); ++pi) {
      const double empirical = static_cast<double>(sq[pi] / kSeeds);
      const double want = hv.at(probes[pi]);
      const double rel = std::abs(empirical / want - 1.0);
      if (!(rel <= 0.05)) pass = false;
      detail += "hyb@" + std::to_string(probes[pi]) + ":" + fmt(rel) + " ";
    }
  }

  report("criterion 8: Monte Carlo output variance within 5% over 10^4 seeds", pass,
         "relative deviations " + detail);
}

// ---------------------------------------------------------------------------
// 9. Instrumented multiplication budget of full streaming runs to n = 2^16.
void criterion_9() {
  begin();
  bool pass = true;
  std::string detail;
  const std::size_t n = std::size_t{1} << 16;
  struct Case {
    double delta_log;
    double bound;
    const char* name;
  };
  for (const Case c : {Case{0.612, 24.0, "general"}, Case{0.51, 17.5, "matched"},
                       Case{0.0, 13.0, "fast"}}) {
    logcount::MulBudget budget;
    logcount::Counter counter(FactorParams{-0.51, c.delta_log}, 1.0, /*seed=*/1, std::nullopt,
                              &budget);
    for (std::size_t t = 1; t <= n; ++t) counter.step(0.0);
    const double measured = budget.in_units_of(n);
    if (!(measured <= c.bound * 1.1)) pass = false;
    detail += std::string(c.name) + " " + fmt(measured) + "/" + fmt(c.bound) + " ";
  }
  report("criterion 9: multiplication budget within bounds (+10%)", pass, "measured M(n): " + detail);
}

// ---------------------------------------------------------------------------
// 10. Series-engine property suite at length 1024.
void criterion_10() {
  begin();
  std::mt19937_64 gen(20260810);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const auto random_series = [&](double first) {
    CoeffSeries a(1024);
    a[0] = first;
    for (std::size_t m = 1; m < 1024; ++m) {
      a[m] = unif(gen) / (static_cast<double>(m + 1) * (m + 1));
    }
    return a;
  };
  bool pass = true;

  const CoeffSeries a = random_series(1.0);
  const CoeffSeries round = logcount::exp_series(logcount::log_series(a, 1024), 1024);
  for (std::size_t m = 0; m < 1024; ++m) {
    if (std::abs(round[m] - a[m]) > 1e-10) pass = false;
  }

  const CoeffSeries b = random_series(0.8);
  const CoeffSeries inv = logcount::reciprocal(b, 1024);
  const CoeffSeries prod = logcount::convolve(b, inv, 1024);
  for (std::size_t m = 0; m < 1024; ++m) {
    if (std::abs(prod[m] - (m == 0 ? 1.0 : 0.0)) > 1e-10) pass = false;
  }

  const CoeffSeries num = random_series(-0.6);
  const CoeffSeries q = logcount::divide(num, b, 1024);
  const CoeffSeries back = logcount::convolve(b, q, 1024);
  for (std::size_t m = 0; m < 1024; ++m) {
    if (std::abs(back[m] - num[m]) > 1e-10) pass = false;
  }

  const CoeffSeries f1 = logcount::rsqrt_coeffs(64);
  long double binom = 1.0L;
  for (std::size_t m = 0; m < 64; ++m) {
    if (m > 0) {
      binom *= (-0.5L - static_cast<long double>(m - 1)) / static_cast<long double>(m);
    }
    const double want = static_cast<double>(binom) * (m % 2 == 0 ? 1.0 : -1.0);
    if (std::abs(f1[m] - want) > 1e-14) pass = false;
  }

  report("criterion 10: series-engine property suite at length 1024", pass,
         "round trip, inverse, divide-multiply, binomial identity");
}

// ---------------------------------------------------------------------------
// 11. Side information: bit-identical overlap and graceful continuation.
void criterion_11() {
  begin();
  const FactorParams p{-0.51, 0.51};
  const std::uint64_t seed = 77;
  logcount::Counter hinted(p, 1.0, seed, logcount::SideInfo{1024, 4.0});
  logcount::Counter plain(p, 1.0, seed);
  logcount::CounterRng inputs(4242);
  bool identical = true;
  std::vector<double> stream_inputs;
  for (std::size_t t = 1; t <= 4096; ++t) {
    const double x = inputs.uniform(t);
    stream_inputs.push_back(x);
    if (hinted.step(x) != plain.step(x)) identical = false;  // bitwise
  }
  const bool precomputed = hinted.horizon() == 4096;

  // actual n = 8192: the run continues past the hint, sigma untouched
  logcount::Counter longer(p, 1.0, seed, logcount::SideInfo{1024, 4.0});
  const double sigma_before = longer.sigma();
  bool continued = true;
  for (std::size_t t = 1; t <= 8192; ++t) {
    const double x = t <= 4096 ? stream_inputs[t - 1] : inputs.uniform(t);
    if (!std::isfinite(longer.step(x))) continued = false;
  }
  const bool sigma_fixed = longer.sigma() == sigma_before && longer.horizon() == 8192;

  report("criterion 11: side-info runs are sample-aligned and degrade gracefully",
         identical && precomputed && continued && sigma_fixed,
         std::string("bitwise overlap: ") + (identical ? "yes" : "no") + ", continued to 8192: " +
             (continued && sigma_fixed ? "yes" : "no"));
}

}  // namespace

int main() {
  std::printf("acceptance suite\n");
  criterion_1();
  criterion_2();
  criterion_3();
  Profiles profiles = make_profiles();
  criterion_4(profiles);
  criterion_5(profiles);
  criterion_6(profiles);
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  std::printf("%d of 11 criteria failed\n", failures);
  return failures;
}
