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

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "logcount/approx.hpp"
#include "logcount/baselines.hpp"
#include "logcount/factor.hpp"
#include "logcount/mechanism.hpp"
#include "logcount/sensitivity.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

// Shortest round-trip decimal formatting, so emitted CSV parses back to the
// exact same doubles.
std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string resolve_output_path(const std::string& path) {
  if (path.empty() || path.front() == '/') return path;
  const char* dir = std::getenv("LOGCOUNT_OUT_DIR");
  if (dir == nullptr || *dir == '\0') return path;
  std::string out(dir);
  if (out.back() != '/') out.push_back('/');
  return out + path;
}

void emit(const std::string& output_path, const std::string& body) {
  if (output_path.empty()) {
    std::cout << body;
    return;
  }
  const std::string resolved = resolve_output_path(output_path);
  std::ofstream out(resolved);
  if (!out) throw logcount::InvalidArgumentError("cannot open output file: " + resolved);
  out << body;
}

// Every power of two plus three midpoints per octave, capped at t_max.
std::vector<std::size_t> geometric_grid(std::size_t t_max) {
  std::vector<std::size_t> grid{1};
  for (std::size_t base = 2; base <= t_max; base *= 2) {
    grid.push_back(base);
    for (int j = 1; j <= 3; ++j) {
      const double mid = static_cast<double>(base) * std::pow(2.0, j / 4.0);
      const auto t = static_cast<std::size_t>(mid + 0.5);
      if (t > grid.back() && t < 2 * base && t <= t_max) grid.push_back(t);
    }
    if (base > t_max / 2) break;
  }
  std::vector<std::size_t> out;
  for (std::size_t t : grid) {
    if (t <= t_max && (out.empty() || t > out.back())) out.push_back(t);
  }
  if (out.back() != t_max) out.push_back(t_max);
  return out;
}

struct CommonFlags {
  double gamma = -0.51;
  double delta_log = 0.51;
  double eps = 1.0;
  double delta_priv = 1e-6;
  double eta = 1e-3;
  std::size_t order = 4;
  std::size_t t_max = 1 << 16;
  std::uint64_t seed = 1;
  std::string output;
  std::string format = "csv";
};

const std::vector<std::string> kAllMechs = {"logmatrix-d0", "logmatrix-dg", "logmatrix-d6g5",
                                            "approx",       "sqrt",         "hybrid-indep",
                                            "hybrid-log"};

// variance as a function of t for one mechanism id, evaluated on a grid
std::vector<double> variance_curve(const std::string& mech, const CommonFlags& f,
                                   const std::vector<std::size_t>& grid) {
  const logcount::PrivacyParams privacy(f.eps, f.delta_priv);
  std::vector<double> out;
  out.reserve(grid.size());
  const auto from_profile = [&](const logcount::FactorParams& params) {
    const double sigma = privacy.C * logcount::compute_sensitivity(params).delta;
    logcount::VarianceProfile profile(params, sigma);
    for (std::size_t t : grid) out.push_back(profile.at(t));
  };
  if (mech == "logmatrix-d0") {
    from_profile(logcount::FactorParams::with_delta_preset_fast(f.gamma));
  } else if (mech == "logmatrix-dg") {
    from_profile(logcount::FactorParams::with_delta_preset_matched(f.gamma));
  } else if (mech == "logmatrix-d6g5") {
    from_profile(logcount::FactorParams::with_delta_preset_large_n(f.gamma));
  } else if (mech == "approx") {
    const logcount::FactorParams params{f.gamma, f.delta_log};
    const double sigma = (1.0 + f.eta) * privacy.C * logcount::compute_sensitivity(params).delta;
    logcount::ApproxRightStream right(params, f.order, f.eta);
    right.extend_to(logcount::fft::ceil_pow2(f.t_max));
    const logcount::CoeffSeries lhat =
        logcount::divide(logcount::CoeffSeries(f.t_max, 1.0), right.coeffs(), f.t_max);
    std::vector<long double> prefix(f.t_max);
    long double acc = 0.0L;
    for (std::size_t m = 0; m < f.t_max; ++m) {
      acc += static_cast<long double>(lhat[m]) * lhat[m];
      prefix[m] = acc;
    }
    for (std::size_t t : grid) {
      out.push_back(sigma * sigma * static_cast<double>(prefix[t - 1]));
    }
  } else if (mech == "sqrt") {
    logcount::RsqrtNorms norms;
    const double horizon_norm = norms.s1(f.t_max);
    for (std::size_t t : grid) out.push_back(privacy.C * privacy.C * horizon_norm * norms.s1(t));
  } else if (mech == "hybrid-indep" || mech == "hybrid-log") {
    logcount::HybridConfig config;
    config.unbounded_variant = mech == "hybrid-log"
                                   ? logcount::HybridConfig::Unbounded::kLogMatrix
                                   : logcount::HybridConfig::Unbounded::kIndependent;
    config.params = logcount::FactorParams{f.gamma, f.delta_log};
    logcount::HybridVariance hv(config, privacy.C);
    for (std::size_t t : grid) out.push_back(hv.at(t));
  } else {
    throw logcount::InvalidArgumentError("unknown mechanism id: " + mech);
  }
  return out;
}

std::string metadata_line(const CommonFlags& f, bool with_seed) {
  std::ostringstream os;
  os << "# version=" << kVersion;
  if (with_seed) os << " seed=" << f.seed;
  os << " gamma=" << fmt(f.gamma) << " delta_log=" << fmt(f.delta_log) << " eps=" << fmt(f.eps)
     << " delta_priv=" << fmt(f.delta_priv) << "\n";
  return os.str();
}

// minimal log-log line chart
std::string render_svg(const std::vector<std::size_t>& grid,
                       const std::map<std::string, std::vector<double>>& curves) {
  const double width = 840, height = 520, ml = 70, mr = 170, mt = 20, mb = 45;
  double ymin = 1e300, ymax = -1e300;
  for (const auto& [name, ys] : curves) {
    for (double y : ys) {
      if (y > 0) {
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
      }
    }
  }
  const double lx0 = std::log2(static_cast<double>(grid.front()));
  const double lx1 = std::log2(static_cast<double>(grid.back()));
  const double ly0 = std::log10(ymin), ly1 = std::log10(ymax);
  const auto px = [&](double t) {
    return ml + (std::log2(t) - lx0) / std::max(lx1 - lx0, 1e-9) * (width - ml - mr);
  };
  const auto py = [&](double v) {
    return height - mb - (std::log10(v) - ly0) / std::max(ly1 - ly0, 1e-9) * (height - mt - mb);
  };
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\"" << width - mr << "\" y2=\""
      << height - mb << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << height - mb
      << "\" stroke=\"black\"/>\n";
  for (double e = std::ceil(lx0); e <= lx1; e += 4.0) {
    const double x = px(std::pow(2.0, e));
    svg << "<text x=\"" << x << "\" y=\"" << height - mb + 18
        << "\" font-size=\"11\" text-anchor=\"middle\">2^" << static_cast<int>(e) << "</text>\n";
  }
  svg << "<text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 8
      << "\" font-size=\"12\" text-anchor=\"middle\">t</text>\n";
  svg << "<text x=\"14\" y=\"" << (mt + height - mb) / 2
      << "\" font-size=\"12\" transform=\"rotate(-90 14 " << (mt + height - mb) / 2
      << ")\">variance</text>\n";
  const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                          "#9467bd", "#8c564b", "#e377c2"};
  std::size_t ci = 0;
  for (const auto& [name, ys] : curves) {
    svg << "<polyline fill=\"none\" stroke=\"" << colors[ci % 7]
        << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (ys[i] <= 0) continue;
      svg << px(static_cast<double>(grid[i])) << "," << py(ys[i]) << " ";
    }
    svg << "\"/>\n";
    svg << "<text x=\"" << width - mr + 10 << "\" y=\"" << mt + 16 + 18 * ci
        << "\" font-size=\"12\" fill=\"" << colors[ci % 7] << "\">" << name << "</text>\n";
    ++ci;
  }
  svg << "</svg>\n";
  return svg.str();
}

int cmd_coeffs(const CommonFlags& f) {
  logcount::FactorPair pair(logcount::FactorParams{f.gamma, f.delta_log}, 2);
  pair.extend_to(logcount::fft::ceil_pow2(f.t_max));
  const logcount::CoeffSeries f1 = logcount::rsqrt_coeffs(f.t_max);
  std::ostringstream csv;
  csv << "m,coeff_L,coeff_R,coeff_f1\n";
  for (std::size_t m = 0; m < f.t_max; ++m) {
    csv << m << "," << fmt(pair.left()[m]) << "," << fmt(pair.right()[m]) << "," << fmt(f1[m])
        << "\n";
  }
  emit(f.output, csv.str());
  return 0;
}

int cmd_variance(const CommonFlags& f, const std::string& mech) {
  const auto grid = geometric_grid(f.t_max);
  const auto curve = variance_curve(mech, f, grid);
  std::ostringstream csv;
  csv << "t,variance\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    csv << grid[i] << "," << fmt(curve[i]) << "\n";
  }
  emit(f.output, csv.str());
  return 0;
}

int cmd_compare(const CommonFlags& f, std::vector<std::string> mechs) {
  if (mechs.empty()) mechs = kAllMechs;
  const auto grid = geometric_grid(f.t_max);
  std::map<std::string, std::vector<double>> curves;
  for (const auto& mech : mechs) curves[mech] = variance_curve(mech, f, grid);
  if (f.format == "svg") {
    emit(f.output, render_svg(grid, curves));
    return 0;
  }
  std::ostringstream csv;
  csv << "t,mechanism,variance\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (const auto& mech : mechs) {
      csv << grid[i] << "," << mech << "," << fmt(curves[mech][i]) << "\n";
    }
  }
  emit(f.output, csv.str());
  return 0;
}

int cmd_sensitivity(const CommonFlags& f, double tol) {
  const auto r = logcount::compute_sensitivity(logcount::FactorParams{f.gamma, f.delta_log}, tol);
  std::ostringstream csv;
  csv << "delta,delta_sq,quad_error_estimate\n";
  csv << fmt(r.delta) << "," << fmt(r.delta_sq) << "," << fmt(r.quad_error_estimate) << "\n";
  csv << metadata_line(f, /*with_seed=*/false);
  emit(f.output, csv.str());
  return 0;
}

int cmd_approx_error(const CommonFlags& f) {
  const logcount::FactorParams params{f.gamma, f.delta_log};
  logcount::FactorStream exact(params.gamma, params.delta_log, nullptr, 16);
  exact.extend_to(logcount::fft::ceil_pow2(f.t_max));
  const logcount::ExpansionContext ctx(f.order, params.gamma, params.delta_log, f.eta);
  std::ostringstream csv;
  csv << "t,exact,approx,rel_error\n";
  for (std::size_t t : geometric_grid(f.t_max)) {
    if (t < 32) continue;
    const double e = exact.coeffs()[t - 1];
    const double a = logcount::approx_coeff(t - 1, ctx);
    csv << t << "," << fmt(e) << "," << fmt(a) << "," << fmt(std::abs(a - e) / std::abs(e))
        << "\n";
  }
  csv << metadata_line(f, /*with_seed=*/false);
  emit(f.output, csv.str());
  return 0;
}

int cmd_simulate(const CommonFlags& f, const std::string& mech, const std::string& input_spec,
                 std::optional<std::size_t> n0, double c_factor) {
  const logcount::PrivacyParams privacy(f.eps, f.delta_priv);
  const logcount::FactorParams params{f.gamma, f.delta_log};

  std::function<double(std::size_t)> next_input;
  std::vector<double> file_values;
  if (input_spec == "zeros") {
    next_input = [](std::size_t) { return 0.0; };
  } else if (input_spec.rfind("bernoulli:", 0) == 0) {
    const double p = std::stod(input_spec.substr(10));
    if (!(p >= 0.0 && p <= 1.0)) {
      throw logcount::InvalidArgumentError("bernoulli probability outside [0,1]");
    }
    const logcount::CounterRng rng(f.seed ^ 0xB5297A4D3F2C1E07ULL, /*stream=*/7);
    next_input = [rng, p](std::size_t t) { return rng.uniform(t) < p ? 1.0 : 0.0; };
  } else if (input_spec.rfind("file:", 0) == 0) {
    std::ifstream in(input_spec.substr(5));
    if (!in) throw logcount::InvalidArgumentError("cannot open input file");
    double v;
    while (in >> v) {
      if (!(v >= 0.0 && v <= 1.0)) {
        throw logcount::InvalidArgumentError("input values must lie in [0,1]");
      }
      file_values.push_back(v);
    }
    next_input = [&file_values](std::size_t t) {
      return t - 1 < file_values.size() ? file_values[t - 1] : 0.0;
    };
  } else {
    throw logcount::InvalidArgumentError("unknown input spec: " + input_spec);
  }
  std::size_t steps = f.t_max;
  if (input_spec.rfind("file:", 0) == 0) steps = std::min(steps, file_values.size());

  std::function<double(double)> step;
  std::optional<logcount::Counter> counter;
  std::optional<logcount::ApproxCounter> approx;
  std::optional<logcount::HybridStream> hybrid;
  if (mech == "logmatrix") {
    std::optional<logcount::SideInfo> side;
    if (n0.has_value()) side = logcount::SideInfo{*n0, c_factor};
    counter.emplace(params, privacy, f.seed, side);
    step = [&](double x) { return counter->step(x); };
  } else if (mech == "approx") {
    approx.emplace(params, privacy, f.order, f.eta, f.seed);
    step = [&](double x) { return approx->step(x); };
  } else if (mech == "hybrid-indep" || mech == "hybrid-log") {
    logcount::HybridConfig config;
    config.unbounded_variant = mech == "hybrid-log"
                                   ? logcount::HybridConfig::Unbounded::kLogMatrix
                                   : logcount::HybridConfig::Unbounded::kIndependent;
    config.params = params;
    hybrid.emplace(config, privacy, f.seed);
    step = [&](double x) { return hybrid->step(x); };
  } else {
    throw logcount::InvalidArgumentError("unknown mechanism id: " + mech);
  }

  std::ostringstream csv;
  csv << "t,true_sum,output,noise\n";
  long double sum = 0.0L;
  for (std::size_t t = 1; t <= steps; ++t) {
    const double x = next_input(t);
    sum += x;
    const double out = step(x);
    csv << t << "," << fmt(static_cast<double>(sum)) << "," << fmt(out) << ","
        << fmt(out - static_cast<double>(sum)) << "\n";
  }
  csv << metadata_line(f, /*with_seed=*/true);
  emit(f.output, csv.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unbounded differentially private continual counting via logarithmically "
               "perturbed square-root factorizations"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string mech;
  std::vector<std::string> mechs;
  std::string input_spec = "zeros";
  double tol = 1e-12;
  std::optional<std::size_t> n0;
  double c_factor = 1.0;

  const auto add_common = [&](CLI::App* cmd, bool with_privacy) {
    cmd->add_option("--gamma", flags.gamma, "log-factor exponent (valid mechanisms need < -1/2)");
    cmd->add_option("--delta-log", flags.delta_log, "loglog-factor exponent");
    cmd->add_option("--t-max", flags.t_max, "number of steps / table horizon");
    cmd->add_option("--output", flags.output, "output path (default stdout)");
    if (with_privacy) {
      cmd->add_option("--eps", flags.eps, "privacy epsilon");
      cmd->add_option("--delta-priv", flags.delta_priv, "privacy delta");
    }
  };

  auto* coeffs = app.add_subcommand("coeffs", "dump left/right factor coefficients as CSV");
  add_common(coeffs, false);

  auto* variance = app.add_subcommand("variance", "exact variance table for one mechanism");
  add_common(variance, true);
  variance->add_option("--mech", mech, "mechanism id")->default_val("logmatrix-dg");
  variance->add_option("--eta", flags.eta, "approx switch tolerance");
  variance->add_option("--K", flags.order, "approx expansion order");

  auto* compare = app.add_subcommand("compare", "variance comparison across mechanisms");
  add_common(compare, true);
  compare->add_option("--mechs", mechs, "mechanism ids")->delimiter(',');
  compare->add_option("--format", flags.format, "csv or svg")
      ->check(CLI::IsMember({"csv", "svg"}));
  compare->add_option("--eta", flags.eta, "approx switch tolerance");
  compare->add_option("--K", flags.order, "approx expansion order");

  auto* sensitivity = app.add_subcommand("sensitivity", "limiting column norm of the right factor");
  add_common(sensitivity, false);
  sensitivity->add_option("--tol", tol, "relative quadrature tolerance");

  auto* approx_error =
      app.add_subcommand("approx-error", "coefficient expansion error against the exact pipeline");
  add_common(approx_error, false);
  approx_error->add_option("--K", flags.order, "expansion order");
  approx_error->add_option("--eta", flags.eta, "switch tolerance (metadata only)");

  auto* simulate = app.add_subcommand("simulate", "drive a streaming mechanism and dump outputs");
  add_common(simulate, true);
  simulate->add_option("--mech", mech, "logmatrix | approx | hybrid-indep | hybrid-log")
      ->default_val("logmatrix");
  simulate->add_option("--seed", flags.seed, "rng seed");
  simulate->add_option("--eta", flags.eta, "approx switch tolerance");
  simulate->add_option("--K", flags.order, "approx expansion order");
  simulate->add_option("--n0", n0, "side information: lower hint");
  simulate->add_option("--c-factor", c_factor, "side information: upper multiplier");
  simulate->add_option("--input", input_spec, "zeros | bernoulli:p | file:PATH");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    app.exit(e);
    return 2;
  }

  try {
    if (flags.t_max < 1) throw logcount::InvalidArgumentError("--t-max must be at least 1");
    if (coeffs->parsed()) return cmd_coeffs(flags);
    if (variance->parsed()) return cmd_variance(flags, mech);
    if (compare->parsed()) return cmd_compare(flags, mechs);
    if (sensitivity->parsed()) return cmd_sensitivity(flags, tol);
    if (approx_error->parsed()) return cmd_approx_error(flags);
    if (simulate->parsed()) return cmd_simulate(flags, mech, input_spec, n0, c_factor);
  } catch (const logcount::InvalidArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const logcount::DivergentSensitivityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const logcount::PrecisionError& e) {
    std::cerr << "error: " << e.what() << " (best estimate " << fmt(e.best_value)
              << ", error estimate " << fmt(e.error_estimate) << ")\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
