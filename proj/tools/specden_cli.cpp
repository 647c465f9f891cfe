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

// Command-line driver: filter tables, experiment simulation, spectrum
// estimation, and the estimator benchmark.

#include <cstdio>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "specden/specden.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

struct CommonArgs {
  std::string config_path;
  int p_max = 25;
  double total_time = 1.0;
  int n_points = 200;
  double omega_max = 0.0;
  std::string formats = "csv,json";
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path,
                  "JSON configuration supplying defaults for all settings");
  cmd->add_option("--p-max", args.p_max, "largest pulse number in the bank");
  cmd->add_option("--time", args.total_time, "total evolution time T");
  cmd->add_option("--points", args.n_points, "frequency grid size");
  cmd->add_option("--omega-max", args.omega_max,
                  "grid cutoff (0 selects 1.3*pi*p_max/T)");
  cmd->add_option("--format", args.formats,
                  "comma list of outputs: csv,json,svg");
}

/// Folds --config and the geometry flags into a BenchConfig; flags given on
/// the command line win over the file.
specden::BenchConfig resolve_config(const CLI::App* cmd,
                                    const CommonArgs& args) {
  specden::BenchConfig config;
  if (!args.config_path.empty()) {
    config = specden::read_config_json(args.config_path, config);
  }
  if (cmd->count("--p-max") || args.config_path.empty()) {
    config.p_max = args.p_max;
  }
  if (cmd->count("--time") || args.config_path.empty()) {
    config.total_time = args.total_time;
  }
  if (cmd->count("--points") || args.config_path.empty()) {
    config.n_points = args.n_points;
  }
  if (cmd->count("--omega-max") || args.config_path.empty()) {
    config.omega_max = args.omega_max;
  }
  return config;
}

std::set<std::string> parse_formats(const std::string& text) {
  std::set<std::string> formats;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (item != "csv" && item != "json" && item != "svg") {
      throw specden::contract_error("unknown format '" + item +
                                    "' (expected csv, json, or svg)");
    }
    formats.insert(item);
  }
  specden::require(!formats.empty(), "at least one output format is needed");
  return formats;
}

specden::FrequencyGrid make_grid(const specden::BenchConfig& config) {
  const double cutoff =
      config.omega_max > 0.0
          ? config.omega_max
          : specden::default_omega_max(config.p_max, config.total_time);
  return specden::FrequencyGrid::uniform(cutoff, config.n_points);
}

// --- filters -------------------------------------------------------------

int cmd_filters(const specden::BenchConfig& config,
                const std::set<std::string>& formats,
                const std::string& out_prefix) {
  const specden::FrequencyGrid grid = make_grid(config);
  const auto bank =
      specden::filter_bank(config.p_max, config.total_time, grid);
  if (formats.count("csv")) {
    specden::write_filters_csv(out_prefix + "_filters.csv", bank, grid);
  }
  if (formats.count("json")) {
    specden::write_text(out_prefix + "_filters.json",
                        specden::filter_summary_json(bank).dump(2) + "\n");
  }
  if (formats.count("svg")) {
    std::vector<specden::SvgSeries> series;
    for (const specden::FilterFunction& filter : bank) {
      if (filter.sequence_id == 1 || filter.sequence_id % 5 == 0) {
        series.push_back({"p=" + std::to_string(filter.sequence_id),
                          filter.values, ""});
      }
    }
    specden::svg_line_chart(out_prefix + "_filters.svg",
                            "CPMG filter functions", grid.omegas(), series,
                            "omega", "F(omega)");
  }
  std::cout << "wrote filter bank for p=1.." << config.p_max << " on "
            << grid.size() << " grid points\n";
  return 0;
}

// --- simulate ------------------------------------------------------------

int cmd_simulate(const specden::BenchConfig& config,
                 const std::string& truth_text, long shots,
                 std::uint64_t seed, const std::string& out_path,
                 const std::string& chi_out) {
  const specden::FrequencyGrid grid = make_grid(config);
  const auto bank =
      specden::filter_bank(config.p_max, config.total_time, grid);
  const specden::TruthSpec spec = specden::parse_truth_spec(truth_text);
  const specden::GaussianProcessState gp_prior{
      specden::gaussian_bump_mean(config.bump_height, config.bump_center,
                                  config.bump_width, grid),
      specden::build_kernel(config.kernel, grid)};
  const specden::SpectrumVector truth =
      specden::realize_truth(spec, grid, gp_prior);
  specden::Rng rng(seed);
  const specden::MeasurementRecord record =
      specden::simulate_record(truth, bank, grid, shots, rng, seed);
  specden::write_record_json(out_path, record);
  if (!chi_out.empty()) {
    specden::write_chi_csv(chi_out, record, specden::chi_hat(record));
  }
  std::cout << "wrote " << record.entries.size() << " sequences x " << shots
            << " shots to " << out_path << "\n";
  return 0;
}

// --- estimate --------------------------------------------------------------

int cmd_estimate(const specden::BenchConfig& config,
                 const std::set<std::string>& formats,
                 const std::string& record_path, const std::string& method,
                 const std::string& gp_mean_kind, std::uint64_t seed,
                 const std::string& out_prefix) {
  const specden::MeasurementRecord record =
      specden::read_record_json(record_path);
  specden::require(record.shots >= 1,
                   "estimate: the record holds no measurements");
  for (std::size_t j = 0; j < record.entries.size(); ++j) {
    specden::require(record.entries[j].sequence_id == static_cast<int>(j) + 1,
                     "estimate: record entries must cover p = 1..J in order");
  }
  specden::BenchConfig geometry = config;
  geometry.p_max = static_cast<int>(record.entries.size());
  const specden::FrequencyGrid grid = make_grid(geometry);
  const auto bank =
      specden::filter_bank(geometry.p_max, geometry.total_time, grid);
  const specden::ChiVector chis = specden::chi_hat(record);
  if (formats.count("csv")) {
    specden::write_chi_csv(out_prefix + "_chi.csv", record, chis);
  }

  const bool run_naive = method == "naive" || method == "all";
  const bool run_gp = method == "gp" || method == "all";
  const bool run_smc = method == "smc" || method == "all";
  specden::require(run_naive || run_gp || run_smc,
                   "estimate: method must be naive, gp, smc, or all");

  if (run_naive) {
    const specden::NaiveEstimate naive =
        specden::naive_estimate(chis, bank, grid);
    if (formats.count("csv")) {
      specden::write_spectrum_csv(out_prefix + "_naive.csv", grid,
                                  naive.on_grid, "naive");
    }
    std::cout << "naive: " << naive.points.size() << " peak estimates\n";
  }

  if (run_gp) {
    specden::SpectrumVector mean;
    if (gp_mean_kind == "bump") {
      mean = specden::gaussian_bump_mean(config.bump_height,
                                         config.bump_center,
                                         config.bump_width, grid);
    } else if (gp_mean_kind == "one-on-f") {
      specden::Rng rng(specden::split_seed(seed, 1));
      mean = specden::prior_mean_spectrum(config.hyper, grid,
                                          config.prior_mean_samples, rng);
    } else {
      throw specden::contract_error(
          "estimate: --gp-mean must be bump or one-on-f");
    }
    const specden::GaussianProcessState prior{
        mean, specden::build_kernel(config.kernel, grid)};
    specden::ChiVector floored = chis;
    const double floor = specden::sigma2_floor(record.shots);
    for (Eigen::Index j = 0; j < floored.sigma2.size(); ++j) {
      floored.sigma2[j] = std::max(floored.sigma2[j], floor);
    }
    const specden::GaussianProcessState posterior =
        specden::gp_posterior(prior, specden::build_design_matrix(bank, grid),
                              floored);
    const auto [low, high] = specden::credible_band(posterior, 0.95);
    if (formats.count("csv")) {
      specden::write_band_csv(out_prefix + "_gp.csv", grid, posterior.mean,
                              low, high);
    }
    if (formats.count("svg")) {
      specden::svg_line_chart(
          out_prefix + "_gp.svg", "GP posterior (95% band)", grid.omegas(),
          {{"mean", posterior.mean, ""}, {"low", low, ""}, {"high", high, ""}},
          "omega", "S(omega)");
    }
    std::cout << "gp: posterior mean in [" << posterior.mean.minCoeff()
              << ", " << posterior.mean.maxCoeff() << "]\n";
  }

  if (run_smc) {
    specden::Rng rng(seed);
    specden::ParticleEnsemble ensemble = specden::init_ensemble(
        config.hyper, config.smc.n_particles, rng);
    specden::bayes_update(ensemble, record, bank, grid, rng, config.smc);
    if (formats.count("json")) {
      specden::write_text(out_prefix + "_smc.json",
                          specden::smc_summary_json(ensemble).dump(2) + "\n");
    }
    if (formats.count("csv")) {
      specden::write_spectrum_csv(out_prefix + "_smc_mean.csv", grid,
                                  specden::report_mean_spectrum(ensemble, grid),
                                  "smc_mean");
      specden::write_spectrum_csv(
          out_prefix + "_smc_at_mean.csv", grid,
          specden::report_spectrum_at_mean(ensemble, grid), "smc_at_mean");
    }
    const auto [theta, covariance] = specden::posterior_summary(ensemble);
    (void)covariance;
    std::cout << "smc: theta_hat = (A=" << theta[0] << ", alpha=" << theta[1]
              << ", c=" << theta[2] << "), " << ensemble.resample_count
              << " resamples\n";
  }
  return 0;
}

// --- bench -----------------------------------------------------------------

int cmd_bench(specden::BenchConfig config,
              const std::set<std::string>& formats,
              const std::string& out_prefix) {
  const specden::BenchRun run = specden::run_bench(config);
  if (formats.count("json")) {
    specden::write_report_json(out_prefix + "_report.json", run);
  }
  if (formats.count("csv")) {
    specden::write_trials_csv(out_prefix + "_trials.csv", run);
    specden::write_bias_csv(out_prefix + "_bias.csv", run);
    specden::write_histogram_csv(out_prefix + "_hist.csv", run);
  }
  if (formats.count("svg")) {
    std::vector<specden::LossStats> stats = {run.report.prior};
    if (run.report.naive.count > 0) stats.push_back(run.report.naive);
    if (run.report.gp.count > 0) stats.push_back(run.report.gp);
    if (run.report.smc.count > 0) stats.push_back(run.report.smc);
    specden::svg_histogram_chart(out_prefix + "_hist.svg",
                                 "log10 loss by estimator", stats);
    if (!run.report.bias.empty()) {
      std::vector<specden::SvgSeries> series;
      for (const specden::BiasCurve& curve : run.report.bias) {
        series.push_back({curve.name + " mean", curve.mean, ""});
      }
      specden::svg_line_chart(out_prefix + "_bias.svg", "mean bias",
                              run.context.grid.omegas(), series, "omega",
                              "estimate - truth");
    }
  }

  auto print_stats = [](const specden::LossStats& stats) {
    if (stats.count == 0) {
      return;
    }
    std::printf("%-12s n=%-4d median=%-12.6g mean=%-12.6g ratio=%.4g\n",
                stats.name.c_str(), stats.count, stats.median_loss,
                stats.mean_loss, stats.median_ratio_to_prior);
  };
  std::printf("scenario=%s trials=%d shots=%ld seed=%llu (%.1fs)\n",
              specden::scenario_name(run.context.config.scenario).c_str(),
              run.context.config.n_trials, run.context.config.shots,
              static_cast<unsigned long long>(run.context.config.master_seed),
              run.report.wall_seconds);
  print_stats(run.report.prior);
  print_stats(run.report.naive);
  print_stats(run.report.gp);
  print_stats(run.report.smc);
  print_stats(run.report.smc_at_mean);
  if (run.report.smc.count > 0) {
    std::printf("alpha: median=%.6g prior=%.6g ratio=%.4g\n",
                run.report.alpha_median_loss,
                run.report.alpha_prior_median_loss,
                run.report.alpha_ratio_median);
  }
  if (run.report.failed_trials > 0) {
    std::printf("warning: %d trials reported estimator failures\n",
                run.report.failed_trials);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dephasing-noise spectroscopy: simulate and estimate"};
  app.require_subcommand(1);

  // filters
  CLI::App* filters = app.add_subcommand(
      "filters", "tabulate the CPMG filter-function bank");
  CommonArgs filters_args;
  std::string filters_out = "filters";
  add_common(filters, filters_args);
  filters->add_option("--out", filters_out, "output path prefix");

  // simulate
  CLI::App* simulate = app.add_subcommand(
      "simulate", "draw a single-shot measurement record from a truth");
  CommonArgs simulate_args;
  std::string truth_text = "one-on-f:A=10,alpha=0.75,c=3";
  long shots = 1000;
  std::uint64_t sim_seed = 1;
  std::string record_out = "record.json";
  std::string chi_out;
  add_common(simulate, simulate_args);
  simulate->add_option("--truth", truth_text,
                       "truth spec: one-on-f:A=..,alpha=..,c=.. | gp:seed=.. "
                       "| constant:value=..");
  simulate->add_option("--shots", shots, "shots N per sequence");
  simulate->add_option("--seed", sim_seed, "simulation seed");
  simulate->add_option("--out", record_out, "record JSON path");
  simulate->add_option("--chi-out", chi_out, "optional chi CSV path");

  // estimate
  CLI::App* estimate = app.add_subcommand(
      "estimate", "reconstruct a spectrum from a measurement record");
  CommonArgs estimate_args;
  std::string record_path;
  std::string method = "all";
  std::string gp_mean_kind = "one-on-f";
  std::uint64_t est_seed = 1;
  std::string estimate_out = "estimate";
  add_common(estimate, estimate_args);
  estimate->add_option("--record", record_path, "record JSON path")
      ->required();
  estimate->add_option("--method", method, "naive | gp | smc | all");
  estimate->add_option("--gp-mean", gp_mean_kind,
                       "GP prior mean: one-on-f | bump");
  estimate->add_option("--seed", est_seed, "estimator seed (SMC)");
  estimate->add_option("--out", estimate_out, "output path prefix");

  // bench
  CLI::App* bench = app.add_subcommand(
      "bench", "loss study across many simulated experiments");
  CommonArgs bench_args;
  std::string scenario_text;
  int trials = 0;
  long bench_shots = -1;
  std::uint64_t bench_seed = 0;
  int workers = -1;
  int particles = 0;
  std::string bench_out = "bench";
  add_common(bench, bench_args);
  bench->add_option("--scenario", scenario_text, "gp-truth | one-on-f");
  bench->add_option("--trials", trials, "number of trials");
  bench->add_option("--shots", bench_shots, "shots N per sequence");
  bench->add_option("--seed", bench_seed, "master seed");
  bench->add_option("--workers", workers, "worker threads (0 = auto)");
  bench->add_option("--particles", particles, "SMC particle count");
  bench->add_option("--out", bench_out, "output path prefix");

  try {
    app.parse(argc, argv);

    if (filters->parsed()) {
      return cmd_filters(resolve_config(filters, filters_args),
                         parse_formats(filters_args.formats), filters_out);
    }
    if (simulate->parsed()) {
      return cmd_simulate(resolve_config(simulate, simulate_args), truth_text,
                          shots, sim_seed, record_out, chi_out);
    }
    if (estimate->parsed()) {
      return cmd_estimate(resolve_config(estimate, estimate_args),
                          parse_formats(estimate_args.formats), record_path,
                          method, gp_mean_kind, est_seed, estimate_out);
    }
    if (bench->parsed()) {
      specden::BenchConfig config = resolve_config(bench, bench_args);
      if (!scenario_text.empty()) {
        config.scenario = specden::parse_scenario(scenario_text);
      }
      if (trials > 0) {
        config.n_trials = trials;
      }
      if (bench_shots >= 0) {
        config.shots = bench_shots;
      }
      if (bench->count("--seed")) {
        config.master_seed = bench_seed;
      }
      if (workers >= 0) {
        config.workers = workers;
      }
      if (particles > 0) {
        config.smc.n_particles = particles;
      }
      return cmd_bench(config, parse_formats(bench_args.formats), bench_out);
    }
    return 0;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const specden::numeric_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const specden::inference_error& e) {
    std::cerr << "inference failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const specden::io_error& e) {
    std::cerr << "i/o failure: " << e.what() << "\n";
    return kExitIo;
  } catch (const specden::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
