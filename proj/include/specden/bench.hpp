// Copyright 2026 the specden authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "specden/errors.hpp"
#include "specden/filters.hpp"
#include "specden/forward.hpp"
#include "specden/gp.hpp"
#include "specden/grid.hpp"
#include "specden/naive.hpp"
#include "specden/rng.hpp"
#include "specden/smc.hpp"
#include "specden/spectra.hpp"

namespace specden {

/// Which family the per-trial truth spectra are drawn from.
enum class Scenario {
  gp_truth,       // samples of the GP prior (clipped at zero)
  one_on_f_truth  // A/(w^alpha + c) with hyperparameters from the hyperprior
};

inline std::string scenario_name(Scenario scenario) {
  switch (scenario) {
    case Scenario::gp_truth:
      return "gp-truth";
    case Scenario::one_on_f_truth:
      return "one-on-f";
  }
  throw contract_error("scenario_name: unknown scenario");
}

inline Scenario parse_scenario(const std::string& name) {
  if (name == "gp-truth") {
    return Scenario::gp_truth;
  }
  if (name == "one-on-f") {
    return Scenario::one_on_f_truth;
  }
  throw contract_error("parse_scenario: unknown scenario '" + name +
                       "' (expected gp-truth or one-on-f)");
}

struct BenchConfig {
  Scenario scenario = Scenario::gp_truth;
  int n_trials = 100;
  long shots = 1000;

  // Experiment geometry.
  int p_max = 25;
  double total_time = 1.0;
  int n_points = 200;
  double omega_max = 0.0;  // <= 0 selects the default cutoff for p_max

  // GP prior: kernel plus a Gaussian-bump mean in the gp-truth scenario;
  // in the one-on-f scenario the mean is the hyperprior's mean spectrum.
  KernelParams kernel{};
  double bump_height = 1.0;
  double bump_center = 20.0;
  double bump_width = 15.0;

  HyperPrior hyper{};
  long prior_mean_samples = 200000;  // Monte Carlo size for the prior mean

  bool run_naive = true;
  bool run_gp = true;
  bool run_smc = true;  // effective only in the one-on-f scenario
  SmcOptions smc{};

  std::uint64_t master_seed = 1;
  int workers = 0;  // 0 picks the hardware concurrency
  int histogram_bins = 24;

  void validate() const {
    require(n_trials >= 1, "bench: n_trials must be positive");
    require(shots >= 0, "bench: shots must be nonnegative");
    require(p_max >= 1, "bench: p_max must be positive");
    require(total_time > 0.0, "bench: total_time must be positive");
    require(n_points >= 2, "bench: n_points must be at least 2");
    require(prior_mean_samples >= 1,
            "bench: prior_mean_samples must be positive");
    require(histogram_bins >= 1, "bench: histogram_bins must be positive");
    require(workers >= 0, "bench: workers must be nonnegative");
    hyper.validate();
  }
};

/// Read-only state shared by every trial: grid, filter bank, design matrix,
/// and the scenario's GP prior. Building it once keeps trials cheap and
/// keeps the prior's Monte Carlo mean identical across trials.
struct BenchContext {
  BenchConfig config;  // with omega_max resolved
  FrequencyGrid grid{Eigen::VectorXd::LinSpaced(2, 0.0, 1.0)};
  std::vector<FilterFunction> bank;
  Eigen::MatrixXd design;
  GaussianProcessState gp_prior;
  double prior_alpha_mean = 0.0;
};

namespace detail {

// Auxiliary seed streams live far above any realistic trial index so they
// can never collide with split_seed(master, trial).
inline constexpr std::uint64_t kPriorMeanStream =
    (1ULL << 63) | 0x9e3779b97f4a7c15ULL;

}  // namespace detail

inline BenchContext make_context(BenchConfig config) {
  config.validate();
  if (config.omega_max <= 0.0) {
    config.omega_max = default_omega_max(config.p_max, config.total_time);
  }
  BenchContext ctx;
  ctx.config = config;
  ctx.grid = FrequencyGrid::uniform(config.omega_max, config.n_points);
  ctx.bank = filter_bank(config.p_max, config.total_time, ctx.grid);
  ctx.design = build_design_matrix(ctx.bank, ctx.grid);
  SpectrumVector mean;
  if (config.scenario == Scenario::gp_truth) {
    mean = gaussian_bump_mean(config.bump_height, config.bump_center,
                              config.bump_width, ctx.grid);
  } else {
    Rng rng(split_seed(config.master_seed, detail::kPriorMeanStream));
    mean = prior_mean_spectrum(config.hyper, ctx.grid,
                               config.prior_mean_samples, rng);
  }
  ctx.gp_prior = GaussianProcessState{
      mean, build_kernel(config.kernel, ctx.grid)};
  ctx.prior_alpha_mean =
      0.5 * (config.hyper.exponent_low + config.hyper.exponent_high);
  return ctx;
}

/// Integrated squared error between two spectra on the shared grid.
inline double spectrum_loss(const SpectrumVector& truth,
                            const SpectrumVector& estimate,
                            const FrequencyGrid& grid) {
  require(truth.size() == grid.size() && estimate.size() == grid.size(),
          "spectrum_loss: size mismatch with the grid");
  const Eigen::ArrayXd diff = (truth - estimate).array();
  return trapezoid((diff * diff).matrix(), grid);
}

struct TrialResult {
  int index = 0;
  std::uint64_t seed = 0;

  bool ok_naive = false;
  bool ok_gp = false;
  bool ok_smc = false;
  std::string message;  // empty unless some estimator failed

  double loss_naive = std::numeric_limits<double>::quiet_NaN();
  double loss_gp = std::numeric_limits<double>::quiet_NaN();
  double loss_smc = std::numeric_limits<double>::quiet_NaN();  // mean report
  double loss_smc_at_mean = std::numeric_limits<double>::quiet_NaN();
  double loss_prior = std::numeric_limits<double>::quiet_NaN();

  double alpha_truth = std::numeric_limits<double>::quiet_NaN();
  double alpha_estimate = std::numeric_limits<double>::quiet_NaN();
  double alpha_loss = std::numeric_limits<double>::quiet_NaN();
  double alpha_prior_loss = std::numeric_limits<double>::quiet_NaN();

  long clamped_entries = 0;  // chi estimates pulled back from y <= 1/2
  long truth_clips = 0;      // negative GP-sample values clipped to zero

  Eigen::VectorXd bias_naive;  // estimate - truth; empty when not run
  Eigen::VectorXd bias_gp;
  Eigen::VectorXd bias_smc;
};

/// Variance floor for the GP's Gaussian noise model: the plug-in variance at
/// the smallest clamped estimate, so no observation claims zero uncertainty.
inline double sigma2_floor(long shots) {
  require(shots >= 1, "sigma2_floor: shots must be positive");
  const double n = static_cast<double>(shots);
  const double y = 1.0 - 1.0 / n;  // e^{2 chi} at the clamp boundary is y^-2
  return (1.0 / (y * y) - 1.0) / n;
}

inline TrialResult run_trial(const BenchContext& ctx, int index) {
  const BenchConfig& cfg = ctx.config;
  TrialResult out;
  out.index = index;
  out.seed = split_seed(cfg.master_seed, static_cast<std::uint64_t>(index));
  Rng rng(out.seed);

  // Draw the trial's truth.
  SpectrumVector truth;
  if (cfg.scenario == Scenario::gp_truth) {
    truth = sample_gp(ctx.gp_prior, rng);
    out.truth_clips = clip_nonnegative(truth);
  } else {
    const OneOnFParams params = sample_hyperprior(cfg.hyper, rng);
    out.alpha_truth = params.exponent;
    truth = evaluate_one_on_f(params, ctx.grid);
  }
  out.loss_prior = spectrum_loss(truth, ctx.gp_prior.mean, ctx.grid);

  // Simulate the experiment and reduce to chi estimates.
  MeasurementRecord record;
  ChiVector chis;
  if (cfg.shots > 0) {
    record = simulate_record(truth, ctx.bank, ctx.grid, cfg.shots, rng,
                             out.seed);
    chis = chi_hat(record);
    for (bool clamped : chis.clamped) {
      out.clamped_entries += clamped ? 1 : 0;
    }
  } else {
    record.seed = out.seed;
    record.shots = 0;
    for (const FilterFunction& filter : ctx.bank) {
      record.entries.push_back({filter.sequence_id, 0});
    }
  }

  auto note = [&out](const std::string& what) {
    if (!out.message.empty()) {
      out.message += "; ";
    }
    out.message += what;
  };

  if (cfg.run_naive) {
    if (cfg.shots > 0) {
      try {
        const NaiveEstimate naive = naive_estimate(chis, ctx.bank, ctx.grid);
        out.loss_naive = spectrum_loss(truth, naive.on_grid, ctx.grid);
        out.bias_naive = naive.on_grid - truth;
        out.ok_naive = true;
      } catch (const error& e) {
        note(std::string("naive: ") + e.what());
      }
    } else {
      note("naive: no data");
    }
  }

  if (cfg.run_gp) {
    try {
      GaussianProcessState posterior;
      if (cfg.shots > 0) {
        ChiVector floored = chis;
        const double floor = sigma2_floor(cfg.shots);
        for (Eigen::Index j = 0; j < floored.sigma2.size(); ++j) {
          floored.sigma2[j] = std::max(floored.sigma2[j], floor);
        }
        posterior = gp_posterior(ctx.gp_prior, ctx.design, floored);
      } else {
        posterior = ctx.gp_prior;  // no data: posterior equals the prior
      }
      out.loss_gp = spectrum_loss(truth, posterior.mean, ctx.grid);
      out.bias_gp = posterior.mean - truth;
      out.ok_gp = true;
    } catch (const error& e) {
      note(std::string("gp: ") + e.what());
    }
  }

  if (cfg.run_smc && cfg.scenario == Scenario::one_on_f_truth) {
    try {
      ParticleEnsemble ensemble =
          init_ensemble(cfg.hyper, cfg.smc.n_particles, rng);
      if (cfg.shots > 0) {
        bayes_update(ensemble, record, ctx.bank, ctx.grid, rng, cfg.smc);
      }
      const SpectrumVector mean_spectrum =
          report_mean_spectrum(ensemble, ctx.grid);
      const SpectrumVector at_mean =
          report_spectrum_at_mean(ensemble, ctx.grid);
      out.loss_smc = spectrum_loss(truth, mean_spectrum, ctx.grid);
      out.loss_smc_at_mean = spectrum_loss(truth, at_mean, ctx.grid);
      out.bias_smc = mean_spectrum - truth;
      out.alpha_estimate = posterior_summary(ensemble).first[1];
      out.alpha_loss = (out.alpha_truth - out.alpha_estimate) *
                       (out.alpha_truth - out.alpha_estimate);
      out.alpha_prior_loss = (out.alpha_truth - ctx.prior_alpha_mean) *
                             (out.alpha_truth - ctx.prior_alpha_mean);
      out.ok_smc = true;
    } catch (const error& e) {
      note(std::string("smc: ") + e.what());
    }
  }

  return out;
}

// ---------------------------------------------------------------------------
// Aggregation
// ---------------------------------------------------------------------------

namespace detail {

inline double median_of_sorted(const std::vector<double>& sorted) {
  const std::size_t n = sorted.size();
  if (n == 0) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  if (n % 2 == 1) {
    return sorted[n / 2];
  }
  return 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

}  // namespace detail

inline double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  return detail::median_of_sorted(values);
}

/// Linear-interpolation quantile (the "type 7" convention): index
/// h = (n - 1) q, value sorted[floor(h)] + frac(h) * (sorted[ceil(h)] - ...).
inline double quantile(std::vector<double> values, double q) {
  require(q >= 0.0 && q <= 1.0, "quantile: q must lie in [0, 1]");
  if (values.empty()) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * q;
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

struct LossStats {
  std::string name;
  int count = 0;
  double median_loss = std::numeric_limits<double>::quiet_NaN();
  double mean_loss = std::numeric_limits<double>::quiet_NaN();
  double median_ratio_to_prior = std::numeric_limits<double>::quiet_NaN();
  // Histogram of log10(loss) over [hist_low, hist_high].
  double hist_low = 0.0;
  double hist_high = 0.0;
  std::vector<long> histogram;
};

struct BiasCurve {
  std::string name;
  Eigen::VectorXd mean;
  Eigen::VectorXd q25;
  Eigen::VectorXd q75;
  double mean_abs = std::numeric_limits<double>::quiet_NaN();  // omega average
};

struct BenchReport {
  LossStats prior;
  LossStats naive;
  LossStats gp;
  LossStats smc;          // posterior-mean-spectrum report
  LossStats smc_at_mean;  // plug-in report
  double alpha_median_loss = std::numeric_limits<double>::quiet_NaN();
  double alpha_prior_median_loss = std::numeric_limits<double>::quiet_NaN();
  double alpha_ratio_median = std::numeric_limits<double>::quiet_NaN();
  double alpha_prior_variance = std::numeric_limits<double>::quiet_NaN();
  double alpha_ratio_variance = std::numeric_limits<double>::quiet_NaN();
  std::vector<BiasCurve> bias;
  long total_clamped = 0;
  long total_truth_clips = 0;
  int failed_trials = 0;
  double wall_seconds = 0.0;
};

namespace detail {

inline LossStats make_loss_stats(const std::string& name,
                                 const std::vector<double>& losses,
                                 const std::vector<double>& priors,
                                 int bins) {
  LossStats stats;
  stats.name = name;
  stats.count = static_cast<int>(losses.size());
  if (losses.empty()) {
    return stats;
  }
  stats.median_loss = median(losses);
  double total = 0.0;
  for (double v : losses) {
    total += v;
  }
  stats.mean_loss = total / static_cast<double>(losses.size());
  if (priors.size() == losses.size()) {
    std::vector<double> ratios(losses.size());
    for (std::size_t i = 0; i < losses.size(); ++i) {
      ratios[i] = losses[i] / priors[i];
    }
    stats.median_ratio_to_prior = median(std::move(ratios));
  }
  std::vector<double> logs(losses.size());
  for (std::size_t i = 0; i < losses.size(); ++i) {
    logs[i] = std::log10(std::max(losses[i], 1e-300));
  }
  const auto [lo_it, hi_it] = std::minmax_element(logs.begin(), logs.end());
  stats.hist_low = *lo_it;
  stats.hist_high = *hi_it;
  if (stats.hist_high <= stats.hist_low) {
    stats.histogram.assign(1, static_cast<long>(logs.size()));
    return stats;
  }
  stats.histogram.assign(bins, 0);
  const double width = (stats.hist_high - stats.hist_low) / bins;
  for (double v : logs) {
    auto bin = static_cast<std::size_t>((v - stats.hist_low) / width);
    bin = std::min(bin, static_cast<std::size_t>(bins - 1));
    ++stats.histogram[bin];
  }
  return stats;
}

inline BiasCurve make_bias_curve(const std::string& name,
                                 const std::vector<const Eigen::VectorXd*>&
                                     rows) {
  BiasCurve curve;
  curve.name = name;
  if (rows.empty()) {
    return curve;
  }
  const Eigen::Index m = rows.front()->size();
  curve.mean = Eigen::VectorXd::Zero(m);
  curve.q25 = Eigen::VectorXd::Zero(m);
  curve.q75 = Eigen::VectorXd::Zero(m);
  std::vector<double> column(rows.size());
  double abs_total = 0.0;
  for (Eigen::Index k = 0; k < m; ++k) {
    double total = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      column[i] = (*rows[i])[k];
      total += column[i];
    }
    curve.mean[k] = total / static_cast<double>(rows.size());
    abs_total += std::abs(curve.mean[k]);
    curve.q25[k] = quantile(column, 0.25);
    curve.q75[k] = quantile(column, 0.75);
  }
  curve.mean_abs = abs_total / static_cast<double>(m);
  return curve;
}

}  // namespace detail

inline BenchReport aggregate(const std::vector<TrialResult>& trials,
                             const BenchContext& ctx) {
  const int bins = ctx.config.histogram_bins;
  BenchReport report;

  std::vector<double> prior_all;
  std::vector<double> naive_loss, naive_prior;
  std::vector<double> gp_loss, gp_prior;
  std::vector<double> smc_loss, smc_prior, smc_at_mean_loss;
  std::vector<double> alpha_loss, alpha_prior_loss;
  std::vector<const Eigen::VectorXd*> naive_bias, gp_bias, smc_bias;

  for (const TrialResult& t : trials) {
    prior_all.push_back(t.loss_prior);
    if (!t.message.empty()) {
      ++report.failed_trials;
    }
    report.total_clamped += t.clamped_entries;
    report.total_truth_clips += t.truth_clips;
    if (t.ok_naive) {
      naive_loss.push_back(t.loss_naive);
      naive_prior.push_back(t.loss_prior);
      naive_bias.push_back(&t.bias_naive);
    }
    if (t.ok_gp) {
      gp_loss.push_back(t.loss_gp);
      gp_prior.push_back(t.loss_prior);
      gp_bias.push_back(&t.bias_gp);
    }
    if (t.ok_smc) {
      smc_loss.push_back(t.loss_smc);
      smc_prior.push_back(t.loss_prior);
      smc_at_mean_loss.push_back(t.loss_smc_at_mean);
      smc_bias.push_back(&t.bias_smc);
      alpha_loss.push_back(t.alpha_loss);
      alpha_prior_loss.push_back(t.alpha_prior_loss);
    }
  }

  report.prior =
      detail::make_loss_stats("prior", prior_all, prior_all, bins);
  report.naive =
      detail::make_loss_stats("naive", naive_loss, naive_prior, bins);
  report.gp = detail::make_loss_stats("gp", gp_loss, gp_prior, bins);
  report.smc = detail::make_loss_stats("smc", smc_loss, smc_prior, bins);
  report.smc_at_mean = detail::make_loss_stats(
      "smc-at-mean", smc_at_mean_loss, smc_prior, bins);

  if (!alpha_loss.empty()) {
    report.alpha_median_loss = median(alpha_loss);
    report.alpha_prior_median_loss = median(alpha_prior_loss);
    report.alpha_ratio_median =
        report.alpha_median_loss / report.alpha_prior_median_loss;
    const double span =
        ctx.config.hyper.exponent_high - ctx.config.hyper.exponent_low;
    report.alpha_prior_variance = span * span / 12.0;
    report.alpha_ratio_variance =
        report.alpha_prior_variance > 0.0
            ? report.alpha_median_loss / report.alpha_prior_variance
            : std::numeric_limits<double>::quiet_NaN();
  }

  if (!naive_bias.empty()) {
    report.bias.push_back(detail::make_bias_curve("naive", naive_bias));
  }
  if (!gp_bias.empty()) {
    report.bias.push_back(detail::make_bias_curve("gp", gp_bias));
  }
  if (!smc_bias.empty()) {
    report.bias.push_back(detail::make_bias_curve("smc", smc_bias));
  }
  return report;
}

struct BenchRun {
  BenchContext context;
  std::vector<TrialResult> trials;
  BenchReport report;
};

/// Runs every trial (striped across worker threads when asked), then
/// aggregates. Results depend only on the master seed, never on the worker
/// count, because each trial owns a generator seeded by split_seed.
inline BenchRun run_bench(const BenchConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  BenchRun run;
  run.context = make_context(config);
  const int n = run.context.config.n_trials;
  run.trials.resize(n);

  int workers = config.workers;
  if (workers == 0) {
    workers = static_cast<int>(std::thread::hardware_concurrency());
  }
  workers = std::max(1, std::min(workers, n));

  if (workers == 1) {
    for (int i = 0; i < n; ++i) {
      run.trials[i] = run_trial(run.context, i);
    }
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&run, n, workers, w]() {
        for (int i = w; i < n; i += workers) {
          run.trials[i] = run_trial(run.context, i);
        }
      });
    }
    for (std::thread& t : pool) {
      t.join();
    }
  }

  run.report = aggregate(run.trials, run.context);
  run.report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return run;
}

}  // namespace specden
