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

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "specden/bench.hpp"
#include "specden/errors.hpp"
#include "specden/filters.hpp"
#include "specden/forward.hpp"
#include "specden/gp.hpp"
#include "specden/grid.hpp"
#include "specden/smc.hpp"
#include "specden/spectra.hpp"

namespace specden {

using json = nlohmann::ordered_json;

/// Shortest exact decimal form that round-trips a double.
inline std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

namespace detail {

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw io_error("cannot open '" + path + "' for writing");
  }
  return out;
}

inline void finish_output(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) {
    throw io_error("failed while writing '" + path + "'");
  }
}

}  // namespace detail

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out = detail::open_output(path);
  out << text;
  detail::finish_output(out, path);
}

// ---------------------------------------------------------------------------
// Measurement records and chi estimates
// ---------------------------------------------------------------------------

inline json record_to_json(const MeasurementRecord& record) {
  json j;
  j["seed"] = record.seed;
  j["N"] = record.shots;
  j["entries"] = json::array();
  for (const MeasurementRecord::Entry& entry : record.entries) {
    j["entries"].push_back({{"p", entry.sequence_id},
                            {"k", entry.successes}});
  }
  return j;
}

inline MeasurementRecord record_from_json(const json& j) {
  MeasurementRecord record;
  try {
    record.seed = j.at("seed").get<std::uint64_t>();
    record.shots = j.at("N").get<long>();
    for (const json& entry : j.at("entries")) {
      record.entries.push_back(
          {entry.at("p").get<int>(), entry.at("k").get<long>()});
    }
  } catch (const json::exception& e) {
    throw io_error(std::string("malformed measurement record: ") + e.what());
  }
  record.validate();
  return record;
}

inline void write_record_json(const std::string& path,
                              const MeasurementRecord& record) {
  write_text(path, record_to_json(record).dump(2) + "\n");
}

inline MeasurementRecord read_record_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw io_error("cannot open '" + path + "' for reading");
  }
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw io_error("cannot parse '" + path + "': " + e.what());
  }
  return record_from_json(j);
}

inline void write_chi_csv(const std::string& path,
                          const MeasurementRecord& record,
                          const ChiVector& chis) {
  require(static_cast<std::size_t>(chis.size()) == record.entries.size(),
          "write_chi_csv: record and chi vector sizes differ");
  std::ofstream out = detail::open_output(path);
  out << "p,N,k,y_hat,chi_hat,sigma2,clamped\n";
  for (std::size_t j = 0; j < record.entries.size(); ++j) {
    const MeasurementRecord::Entry& entry = record.entries[j];
    const double y_hat = static_cast<double>(entry.successes) /
                         static_cast<double>(record.shots);
    out << entry.sequence_id << ',' << record.shots << ',' << entry.successes
        << ',' << format_double(y_hat) << ','
        << format_double(chis.chi[static_cast<Eigen::Index>(j)]) << ','
        << format_double(chis.sigma2[static_cast<Eigen::Index>(j)]) << ','
        << (chis.clamped[j] ? 1 : 0) << '\n';
  }
  detail::finish_output(out, path);
}

// ---------------------------------------------------------------------------
// Filters and spectra
// ---------------------------------------------------------------------------

inline void write_filters_csv(const std::string& path,
                              const std::vector<FilterFunction>& bank,
                              const FrequencyGrid& grid) {
  std::ofstream out = detail::open_output(path);
  out << "p,omega,filter\n";
  for (const FilterFunction& filter : bank) {
    for (Eigen::Index k = 0; k < grid.size(); ++k) {
      out << filter.sequence_id << ',' << format_double(grid[k]) << ','
          << format_double(filter.values[k]) << '\n';
    }
  }
  detail::finish_output(out, path);
}

inline json filter_summary_json(const std::vector<FilterFunction>& bank) {
  json j = json::array();
  for (const FilterFunction& filter : bank) {
    j.push_back({{"p", filter.sequence_id},
                 {"normalization", filter.normalization},
                 {"peak_omega", filter.peak_omega}});
  }
  return j;
}

inline void write_spectrum_csv(const std::string& path,
                               const FrequencyGrid& grid,
                               const SpectrumVector& spectrum,
                               const std::string& column = "spectrum") {
  require(spectrum.size() == grid.size(),
          "write_spectrum_csv: spectrum does not match the grid");
  std::ofstream out = detail::open_output(path);
  out << "omega," << column << '\n';
  for (Eigen::Index k = 0; k < grid.size(); ++k) {
    out << format_double(grid[k]) << ',' << format_double(spectrum[k])
        << '\n';
  }
  detail::finish_output(out, path);
}

inline void write_band_csv(const std::string& path, const FrequencyGrid& grid,
                           const SpectrumVector& mean,
                           const SpectrumVector& low,
                           const SpectrumVector& high) {
  require(mean.size() == grid.size() && low.size() == grid.size() &&
              high.size() == grid.size(),
          "write_band_csv: band does not match the grid");
  std::ofstream out = detail::open_output(path);
  out << "omega,mean,low,high\n";
  for (Eigen::Index k = 0; k < grid.size(); ++k) {
    out << format_double(grid[k]) << ',' << format_double(mean[k]) << ','
        << format_double(low[k]) << ',' << format_double(high[k]) << '\n';
  }
  detail::finish_output(out, path);
}

// ---------------------------------------------------------------------------
// SMC summaries
// ---------------------------------------------------------------------------

inline json smc_summary_json(const ParticleEnsemble& ensemble) {
  const auto [mean, covariance] = posterior_summary(ensemble);
  json j;
  j["theta_hat"] = {{"amplitude", mean[0]},
                    {"exponent", mean[1]},
                    {"cutoff", mean[2]}};
  json cov = json::array();
  for (int r = 0; r < 3; ++r) {
    cov.push_back({covariance(r, 0), covariance(r, 1), covariance(r, 2)});
  }
  j["covariance"] = cov;
  j["ess_history"] = ensemble.ess_history;
  j["resample_count"] = ensemble.resample_count;
  j["clamp_count"] = ensemble.clamp_count;
  return j;
}

// ---------------------------------------------------------------------------
// Bench configuration
// ---------------------------------------------------------------------------

inline json config_to_json(const BenchConfig& config) {
  json j;
  j["scenario"] = scenario_name(config.scenario);
  j["n_trials"] = config.n_trials;
  j["shots"] = config.shots;
  j["p_max"] = config.p_max;
  j["total_time"] = config.total_time;
  j["n_points"] = config.n_points;
  j["omega_max"] = config.omega_max;
  j["kernel"] = {{"kappa", config.kernel.kappa},
                 {"delta", config.kernel.delta}};
  j["bump"] = {{"height", config.bump_height},
               {"center", config.bump_center},
               {"width", config.bump_width}};
  j["hyper"] = {{"amplitude_mean", config.hyper.amplitude_mean},
                {"amplitude_variance", config.hyper.amplitude_variance},
                {"exponent_low", config.hyper.exponent_low},
                {"exponent_high", config.hyper.exponent_high},
                {"cutoff_shift", config.hyper.cutoff_shift},
                {"cutoff_rate", config.hyper.cutoff_rate}};
  j["prior_mean_samples"] = config.prior_mean_samples;
  j["run_naive"] = config.run_naive;
  j["run_gp"] = config.run_gp;
  j["run_smc"] = config.run_smc;
  j["smc"] = {{"n_particles", config.smc.n_particles},
              {"contraction", config.smc.contraction},
              {"resample_fraction", config.smc.resample_fraction},
              {"max_rejection_attempts", config.smc.max_rejection_attempts}};
  j["master_seed"] = config.master_seed;
  j["workers"] = config.workers;
  j["histogram_bins"] = config.histogram_bins;
  return j;
}

/// Overlays the fields present in `j` onto `base`; everything else keeps its
/// default, so configuration files only need to name what they change.
inline BenchConfig config_from_json(const json& j, BenchConfig base = {}) {
  try {
    if (j.contains("scenario")) {
      base.scenario = parse_scenario(j.at("scenario").get<std::string>());
    }
    base.n_trials = j.value("n_trials", base.n_trials);
    base.shots = j.value("shots", base.shots);
    base.p_max = j.value("p_max", base.p_max);
    base.total_time = j.value("total_time", base.total_time);
    base.n_points = j.value("n_points", base.n_points);
    base.omega_max = j.value("omega_max", base.omega_max);
    if (j.contains("kernel")) {
      const json& k = j.at("kernel");
      base.kernel.kappa = k.value("kappa", base.kernel.kappa);
      base.kernel.delta = k.value("delta", base.kernel.delta);
    }
    if (j.contains("bump")) {
      const json& b = j.at("bump");
      base.bump_height = b.value("height", base.bump_height);
      base.bump_center = b.value("center", base.bump_center);
      base.bump_width = b.value("width", base.bump_width);
    }
    if (j.contains("hyper")) {
      const json& h = j.at("hyper");
      base.hyper.amplitude_mean =
          h.value("amplitude_mean", base.hyper.amplitude_mean);
      base.hyper.amplitude_variance =
          h.value("amplitude_variance", base.hyper.amplitude_variance);
      base.hyper.exponent_low =
          h.value("exponent_low", base.hyper.exponent_low);
      base.hyper.exponent_high =
          h.value("exponent_high", base.hyper.exponent_high);
      base.hyper.cutoff_shift =
          h.value("cutoff_shift", base.hyper.cutoff_shift);
      base.hyper.cutoff_rate = h.value("cutoff_rate", base.hyper.cutoff_rate);
    }
    base.prior_mean_samples =
        j.value("prior_mean_samples", base.prior_mean_samples);
    base.run_naive = j.value("run_naive", base.run_naive);
    base.run_gp = j.value("run_gp", base.run_gp);
    base.run_smc = j.value("run_smc", base.run_smc);
    if (j.contains("smc")) {
      const json& s = j.at("smc");
      base.smc.n_particles = s.value("n_particles", base.smc.n_particles);
      base.smc.contraction = s.value("contraction", base.smc.contraction);
      base.smc.resample_fraction =
          s.value("resample_fraction", base.smc.resample_fraction);
      base.smc.max_rejection_attempts =
          s.value("max_rejection_attempts", base.smc.max_rejection_attempts);
    }
    base.master_seed = j.value("master_seed", base.master_seed);
    base.workers = j.value("workers", base.workers);
    base.histogram_bins = j.value("histogram_bins", base.histogram_bins);
  } catch (const json::exception& e) {
    throw io_error(std::string("malformed bench configuration: ") + e.what());
  }
  return base;
}

inline BenchConfig read_config_json(const std::string& path,
                                    BenchConfig base = {}) {
  std::ifstream in(path);
  if (!in) {
    throw io_error("cannot open '" + path + "' for reading");
  }
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw io_error("cannot parse '" + path + "': " + e.what());
  }
  return config_from_json(j, base);
}

// ---------------------------------------------------------------------------
// Bench results
// ---------------------------------------------------------------------------

namespace detail {

inline json loss_stats_json(const LossStats& stats) {
  json j;
  j["count"] = stats.count;
  j["median_loss"] = stats.median_loss;
  j["mean_loss"] = stats.mean_loss;
  j["median_ratio_to_prior"] = stats.median_ratio_to_prior;
  j["log10_hist_low"] = stats.hist_low;
  j["log10_hist_high"] = stats.hist_high;
  j["log10_histogram"] = stats.histogram;
  return j;
}

}  // namespace detail

inline json report_to_json(const BenchRun& run) {
  const BenchReport& report = run.report;
  json j;
  j["config"] = config_to_json(run.context.config);
  json spectrum;
  spectrum["prior"] = detail::loss_stats_json(report.prior);
  if (report.naive.count > 0) {
    spectrum["naive"] = detail::loss_stats_json(report.naive);
  }
  if (report.gp.count > 0) {
    spectrum["gp"] = detail::loss_stats_json(report.gp);
  }
  if (report.smc.count > 0) {
    spectrum["smc"] = detail::loss_stats_json(report.smc);
    spectrum["smc_at_mean"] = detail::loss_stats_json(report.smc_at_mean);
  }
  j["spectrum"] = spectrum;
  if (report.smc.count > 0) {
    j["alpha"] = {{"median_loss", report.alpha_median_loss},
                  {"prior_median_loss", report.alpha_prior_median_loss},
                  {"ratio_median", report.alpha_ratio_median},
                  {"prior_variance", report.alpha_prior_variance},
                  {"ratio_variance", report.alpha_ratio_variance}};
  }
  json bias;
  for (const BiasCurve& curve : report.bias) {
    bias[curve.name] = {{"mean_abs", curve.mean_abs}};
  }
  j["bias"] = bias;
  j["diagnostics"] = {{"clamped_entries", report.total_clamped},
                      {"truth_clips", report.total_truth_clips},
                      {"failed_trials", report.failed_trials}};
  return j;
}

inline void write_report_json(const std::string& path, const BenchRun& run) {
  json j = report_to_json(run);
  j["wall_seconds"] = run.report.wall_seconds;
  write_text(path, j.dump(2) + "\n");
}

inline void write_trials_csv(const std::string& path, const BenchRun& run) {
  std::ofstream out = detail::open_output(path);
  out << "trial,seed,loss_prior,loss_naive,loss_gp,loss_smc,loss_smc_at_mean,"
         "alpha_truth,alpha_estimate,alpha_loss,alpha_prior_loss,"
         "clamped,truth_clips,ok_naive,ok_gp,ok_smc,message\n";
  for (const TrialResult& t : run.trials) {
    out << t.index << ',' << t.seed << ',' << format_double(t.loss_prior)
        << ',' << format_double(t.loss_naive) << ','
        << format_double(t.loss_gp) << ',' << format_double(t.loss_smc) << ','
        << format_double(t.loss_smc_at_mean) << ','
        << format_double(t.alpha_truth) << ','
        << format_double(t.alpha_estimate) << ','
        << format_double(t.alpha_loss) << ','
        << format_double(t.alpha_prior_loss) << ',' << t.clamped_entries
        << ',' << t.truth_clips << ',' << (t.ok_naive ? 1 : 0) << ','
        << (t.ok_gp ? 1 : 0) << ',' << (t.ok_smc ? 1 : 0) << ',' << '"'
        << t.message << '"' << '\n';
  }
  detail::finish_output(out, path);
}

inline void write_bias_csv(const std::string& path, const BenchRun& run) {
  const FrequencyGrid& grid = run.context.grid;
  std::ofstream out = detail::open_output(path);
  out << "omega";
  for (const BiasCurve& curve : run.report.bias) {
    out << ',' << curve.name << "_mean," << curve.name << "_q25,"
        << curve.name << "_q75";
  }
  out << '\n';
  for (Eigen::Index k = 0; k < grid.size(); ++k) {
    out << format_double(grid[k]);
    for (const BiasCurve& curve : run.report.bias) {
      out << ',' << format_double(curve.mean[k]) << ','
          << format_double(curve.q25[k]) << ','
          << format_double(curve.q75[k]);
    }
    out << '\n';
  }
  detail::finish_output(out, path);
}

inline void write_histogram_csv(const std::string& path,
                                const BenchRun& run) {
  std::ofstream out = detail::open_output(path);
  out << "estimator,bin_low,bin_high,count\n";
  auto emit = [&out](const LossStats& stats) {
    if (stats.count == 0) {
      return;
    }
    const std::size_t bins = stats.histogram.size();
    const double width =
        bins > 0 ? (stats.hist_high - stats.hist_low) / bins : 0.0;
    for (std::size_t b = 0; b < bins; ++b) {
      out << stats.name << ','
          << format_double(stats.hist_low + width * b) << ','
          << format_double(b + 1 == bins ? stats.hist_high
                                         : stats.hist_low + width * (b + 1))
          << ',' << stats.histogram[b] << '\n';
    }
  };
  emit(run.report.prior);
  emit(run.report.naive);
  emit(run.report.gp);
  emit(run.report.smc);
  emit(run.report.smc_at_mean);
  detail::finish_output(out, path);
}

// ---------------------------------------------------------------------------
// Truth specifications ("one-on-f:A=10,alpha=0.75,c=3", "gp:seed=7", ...)
// ---------------------------------------------------------------------------

struct TruthSpec {
  enum class Kind { one_on_f, gp_sample, constant };
  Kind kind = Kind::one_on_f;
  OneOnFParams params{};
  std::uint64_t seed = 0;   // gp_sample
  double value = 1.0;       // constant
};

inline TruthSpec parse_truth_spec(const std::string& text) {
  const std::size_t colon = text.find(':');
  const std::string head = text.substr(0, colon);
  TruthSpec spec;
  if (head == "one-on-f") {
    spec.kind = TruthSpec::Kind::one_on_f;
  } else if (head == "gp") {
    spec.kind = TruthSpec::Kind::gp_sample;
  } else if (head == "constant") {
    spec.kind = TruthSpec::Kind::constant;
  } else {
    throw contract_error("truth spec: unknown family '" + head +
                         "' (expected one-on-f, gp, or constant)");
  }
  if (colon == std::string::npos) {
    return spec;
  }
  std::stringstream rest(text.substr(colon + 1));
  std::string item;
  while (std::getline(rest, item, ',')) {
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos) {
      throw contract_error("truth spec: expected key=value, got '" + item +
                           "'");
    }
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    try {
      if (key == "A") {
        spec.params.amplitude = std::stod(value);
      } else if (key == "alpha") {
        spec.params.exponent = std::stod(value);
      } else if (key == "c") {
        spec.params.cutoff = std::stod(value);
      } else if (key == "seed") {
        spec.seed = std::stoull(value);
      } else if (key == "value") {
        spec.value = std::stod(value);
      } else {
        throw contract_error("truth spec: unknown key '" + key + "'");
      }
    } catch (const std::invalid_argument&) {
      throw contract_error("truth spec: cannot parse value '" + value + "'");
    } catch (const std::out_of_range&) {
      throw contract_error("truth spec: value out of range '" + value + "'");
    }
  }
  return spec;
}

/// Materializes a truth spec on the grid; `prior` supplies the GP for
/// gp-sample truths (clipped at zero like the bench scenario).
inline SpectrumVector realize_truth(const TruthSpec& spec,
                                    const FrequencyGrid& grid,
                                    const GaussianProcessState& prior) {
  switch (spec.kind) {
    case TruthSpec::Kind::one_on_f:
      return evaluate_one_on_f(spec.params, grid);
    case TruthSpec::Kind::gp_sample: {
      Rng rng(spec.seed);
      SpectrumVector sample = sample_gp(prior, rng);
      clip_nonnegative(sample);
      return sample;
    }
    case TruthSpec::Kind::constant:
      require(spec.value >= 0.0, "truth spec: constant must be nonnegative");
      return SpectrumVector::Constant(grid.size(), spec.value);
  }
  throw contract_error("realize_truth: unknown truth kind");
}

}  // namespace specden
