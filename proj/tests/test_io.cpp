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

#include <catch2/catch_amalgamated.hpp>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "specden/io.hpp"
#include "specden/svg.hpp"

using namespace specden;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

struct TempFile {
  explicit TempFile(std::string name) : path(std::move(name)) {}
  ~TempFile() { std::remove(path.c_str()); }
  std::string path;
};

MeasurementRecord sample_record() {
  MeasurementRecord record;
  record.seed = 9;
  record.shots = 100;
  record.entries = {{1, 80}, {2, 70}};
  return record;
}

}  // namespace

TEST_CASE("doubles are printed with round-trip precision", "[io]") {
  const double third = 1.0 / 3.0;
  REQUIRE(std::stod(format_double(third)) == third);
  REQUIRE(std::stod(format_double(1e-300)) == 1e-300);
  REQUIRE(format_double(2.5) == "2.5");
}

TEST_CASE("records survive a json round trip", "[io]") {
  const MeasurementRecord record = sample_record();
  const json j = record_to_json(record);
  REQUIRE(j.at("seed") == 9);
  REQUIRE(j.at("N") == 100);
  REQUIRE(j.at("entries").size() == 2);
  REQUIRE(j.at("entries")[0].at("p") == 1);
  REQUIRE(j.at("entries")[0].at("k") == 80);

  const MeasurementRecord back = record_from_json(j);
  REQUIRE(back.seed == record.seed);
  REQUIRE(back.shots == record.shots);
  REQUIRE(back.entries.size() == record.entries.size());
  REQUIRE(back.entries[1].sequence_id == 2);
  REQUIRE(back.entries[1].successes == 70);
}

TEST_CASE("malformed records are rejected", "[io]") {
  json missing = record_to_json(sample_record());
  missing.erase("N");
  REQUIRE_THROWS_AS(record_from_json(missing), io_error);

  json wrong_type = record_to_json(sample_record());
  wrong_type["entries"] = "oops";
  REQUIRE_THROWS_AS(record_from_json(wrong_type), io_error);

  // Structurally valid but physically impossible: k > N trips the record's
  // own validation rather than the parser.
  json overcount = record_to_json(sample_record());
  overcount["entries"][0]["k"] = 101;
  REQUIRE_THROWS_AS(record_from_json(overcount), contract_error);
}

TEST_CASE("record files round trip on disk", "[io]") {
  TempFile file("io_test_record.json");
  write_record_json(file.path, sample_record());
  const MeasurementRecord back = read_record_json(file.path);
  REQUIRE(back.shots == 100);
  REQUIRE(back.entries.size() == 2);
  REQUIRE_THROWS_AS(read_record_json("io_test_missing.json"), io_error);

  TempFile garbage("io_test_garbage.json");
  write_text(garbage.path, "{not json");
  REQUIRE_THROWS_AS(read_record_json(garbage.path), io_error);
}

TEST_CASE("unwritable paths raise io errors", "[io]") {
  REQUIRE_THROWS_AS(write_text("/nonexistent_dir_specden/file.txt", "x"),
                    io_error);
}

TEST_CASE("chi estimates export as csv", "[io]") {
  const MeasurementRecord record = sample_record();
  const ChiVector chis = chi_hat(record);
  TempFile file("io_test_chi.csv");
  write_chi_csv(file.path, record, chis);
  const std::string text = slurp(file.path);
  REQUIRE(text.rfind("p,N,k,y_hat,chi_hat,sigma2,clamped\n", 0) == 0);
  REQUIRE(text.find("\n1,100,80,0.80000000000000004,") != std::string::npos);

  ChiVector wrong = chis;
  wrong.chi.conservativeResize(1);
  REQUIRE_THROWS_AS(write_chi_csv(file.path, record, wrong), contract_error);
}

TEST_CASE("configs round trip through json", "[io]") {
  BenchConfig cfg;
  cfg.scenario = Scenario::one_on_f_truth;
  cfg.shots = 250;
  cfg.kernel.kappa = 0.05;
  cfg.hyper.exponent_high = 0.9;
  cfg.smc.n_particles = 123;
  cfg.master_seed = 42;

  const BenchConfig back = config_from_json(config_to_json(cfg));
  REQUIRE(back.scenario == Scenario::one_on_f_truth);
  REQUIRE(back.shots == 250);
  REQUIRE(back.kernel.kappa == 0.05);
  REQUIRE(back.hyper.exponent_high == 0.9);
  REQUIRE(back.smc.n_particles == 123);
  REQUIRE(back.master_seed == 42);
  REQUIRE(back.n_trials == cfg.n_trials);
}

TEST_CASE("partial configs overlay onto a base", "[io]") {
  const json patch = {{"shots", 7}};
  const BenchConfig from_defaults = config_from_json(patch);
  REQUIRE(from_defaults.shots == 7);
  REQUIRE(from_defaults.n_trials == BenchConfig{}.n_trials);
  REQUIRE(from_defaults.p_max == BenchConfig{}.p_max);

  BenchConfig base;
  base.n_points = 77;
  const BenchConfig overlaid = config_from_json(patch, base);
  REQUIRE(overlaid.shots == 7);
  REQUIRE(overlaid.n_points == 77);

  const json nested = {{"kernel", {{"kappa", 0.5}}}};
  const BenchConfig k = config_from_json(nested, base);
  REQUIRE(k.kernel.kappa == 0.5);
  REQUIRE(k.kernel.delta == BenchConfig{}.kernel.delta);

  const json bad = {{"shots", "many"}};
  REQUIRE_THROWS_AS(config_from_json(bad), io_error);
  REQUIRE_THROWS_AS(read_config_json("io_test_missing_config.json"),
                    io_error);
}

TEST_CASE("truth specs parse their three families", "[io]") {
  const TruthSpec f = parse_truth_spec("one-on-f:A=10,alpha=0.75,c=3");
  REQUIRE(f.kind == TruthSpec::Kind::one_on_f);
  REQUIRE(f.params.amplitude == 10.0);
  REQUIRE(f.params.exponent == 0.75);
  REQUIRE(f.params.cutoff == 3.0);

  const TruthSpec g = parse_truth_spec("gp:seed=7");
  REQUIRE(g.kind == TruthSpec::Kind::gp_sample);
  REQUIRE(g.seed == 7);

  const TruthSpec c = parse_truth_spec("constant:value=2.5");
  REQUIRE(c.kind == TruthSpec::Kind::constant);
  REQUIRE(c.value == 2.5);

  // A bare family name keeps the defaults.
  REQUIRE(parse_truth_spec("gp").kind == TruthSpec::Kind::gp_sample);

  REQUIRE_THROWS_AS(parse_truth_spec("bogus:A=1"), contract_error);
  REQUIRE_THROWS_AS(parse_truth_spec("one-on-f:A"), contract_error);
  REQUIRE_THROWS_AS(parse_truth_spec("one-on-f:A=xyz"), contract_error);
  REQUIRE_THROWS_AS(parse_truth_spec("one-on-f:q=3"), contract_error);
}

TEST_CASE("truth specs realize onto a grid", "[io]") {
  const FrequencyGrid grid = FrequencyGrid::uniform(40.0, 50);
  GaussianProcessState prior;
  prior.mean = gaussian_bump_mean(1.0, 20.0, 15.0, grid);
  prior.covariance = build_kernel(KernelParams{}, grid);

  const TruthSpec constant = parse_truth_spec("constant:value=2.5");
  const SpectrumVector s_const = realize_truth(constant, grid, prior);
  REQUIRE(s_const.minCoeff() == 2.5);
  REQUIRE(s_const.maxCoeff() == 2.5);

  TruthSpec negative = constant;
  negative.value = -1.0;
  REQUIRE_THROWS_AS(realize_truth(negative, grid, prior), contract_error);

  const TruthSpec f = parse_truth_spec("one-on-f:A=10,alpha=0.75,c=3");
  REQUIRE(realize_truth(f, grid, prior) ==
          evaluate_one_on_f(f.params, grid));

  const TruthSpec g = parse_truth_spec("gp:seed=11");
  const SpectrumVector first = realize_truth(g, grid, prior);
  const SpectrumVector second = realize_truth(g, grid, prior);
  REQUIRE(first == second);
  REQUIRE(first.minCoeff() >= 0.0);
}

TEST_CASE("bench reports serialize with stable structure", "[io]") {
  BenchConfig cfg;
  cfg.scenario = Scenario::one_on_f_truth;
  cfg.n_trials = 2;
  cfg.shots = 30;
  cfg.p_max = 4;
  cfg.n_points = 40;
  cfg.prior_mean_samples = 500;
  cfg.smc.n_particles = 100;
  cfg.workers = 1;
  const BenchRun run = run_bench(cfg);

  const json j = report_to_json(run);
  REQUIRE(j.contains("config"));
  REQUIRE(j.contains("spectrum"));
  REQUIRE(j.contains("bias"));
  REQUIRE(j.contains("diagnostics"));
  REQUIRE(j.at("spectrum").at("prior").at("count") == 2);
  REQUIRE(j.at("spectrum").contains("naive"));
  REQUIRE(j.at("spectrum").contains("gp"));
  REQUIRE(j.at("spectrum").contains("smc"));
  REQUIRE(j.at("alpha").contains("ratio_median"));
  REQUIRE(j.at("diagnostics").at("failed_trials") == 0);
  // The config block reproduces the resolved grid cutoff.
  REQUIRE(j.at("config").at("omega_max").get<double>() > 0.0);

  TempFile report_file("io_test_report.json");
  write_report_json(report_file.path, run);
  REQUIRE(slurp(report_file.path).rfind("{\n  \"config\"", 0) == 0);

  TempFile trials_file("io_test_trials.csv");
  write_trials_csv(trials_file.path, run);
  REQUIRE(slurp(trials_file.path).rfind("trial,seed,loss_prior", 0) == 0);

  TempFile bias_file("io_test_bias.csv");
  write_bias_csv(bias_file.path, run);
  const std::string bias_text = slurp(bias_file.path);
  REQUIRE(bias_text.rfind("omega,naive_mean,naive_q25,naive_q75", 0) == 0);

  TempFile hist_file("io_test_hist.csv");
  write_histogram_csv(hist_file.path, run);
  REQUIRE(slurp(hist_file.path).rfind("estimator,bin_low,bin_high,count", 0) ==
          0);
}

TEST_CASE("spectrum and band writers emit labeled columns", "[io]") {
  const FrequencyGrid grid = FrequencyGrid::uniform(1.0, 3);
  SpectrumVector s(3);
  s << 1.0, 2.0, 3.0;
  TempFile spec_file("io_test_spectrum.csv");
  write_spectrum_csv(spec_file.path, grid, s, "naive");
  const std::string text = slurp(spec_file.path);
  REQUIRE(text.rfind("omega,naive\n0,1\n", 0) == 0);

  TempFile band_file("io_test_band.csv");
  write_band_csv(band_file.path, grid, s, s, s);
  REQUIRE(slurp(band_file.path).rfind("omega,mean,low,high\n", 0) == 0);

  SpectrumVector wrong(2);
  wrong << 1.0, 1.0;
  REQUIRE_THROWS_AS(write_spectrum_csv(spec_file.path, grid, wrong),
                    contract_error);
}

TEST_CASE("smc summaries expose the posterior and diagnostics", "[io]") {
  HyperPrior prior;
  Rng rng(5);
  const ParticleEnsemble ensemble = init_ensemble(prior, 50, rng);
  const json j = smc_summary_json(ensemble);
  REQUIRE(j.at("theta_hat").contains("amplitude"));
  REQUIRE(j.at("theta_hat").contains("exponent"));
  REQUIRE(j.at("theta_hat").contains("cutoff"));
  REQUIRE(j.at("covariance").size() == 3);
  REQUIRE(j.at("covariance")[0].size() == 3);
  REQUIRE(j.at("resample_count") == 0);
  REQUIRE(j.at("clamp_count") == 0);
  REQUIRE(j.at("ess_history").is_array());
}

TEST_CASE("non-finite values serialize as json null", "[io]") {
  // nlohmann/json prints NaN and infinities as null; downstream consumers
  // rely on that instead of encountering bare `nan` tokens.
  json j;
  j["x"] = std::numeric_limits<double>::quiet_NaN();
  REQUIRE(j.dump() == "{\"x\":null}");
}

TEST_CASE("filter summaries list one row per sequence", "[io]") {
  const FrequencyGrid grid = FrequencyGrid::uniform(30.0, 60);
  const auto bank = filter_bank(3, 1.0, grid);
  const json j = filter_summary_json(bank);
  REQUIRE(j.size() == 3);
  REQUIRE(j[0].at("p") == 1);
  REQUIRE(j[2].at("p") == 3);
  REQUIRE(j[0].at("normalization").get<double>() > 0.0);
  REQUIRE(j[0].at("peak_omega").get<double>() > 0.0);

  TempFile filters_file("io_test_filters.csv");
  write_filters_csv(filters_file.path, bank, grid);
  REQUIRE(slurp(filters_file.path).rfind("p,omega,filter\n", 0) == 0);
}

TEST_CASE("svg charts are self-contained documents", "[io]") {
  const FrequencyGrid grid = FrequencyGrid::uniform(10.0, 20);
  SvgSeries series;
  series.label = "demo";
  series.y = grid.omegas().array().sin().matrix();

  TempFile chart("io_test_chart.svg");
  svg_line_chart(chart.path, "demo chart", grid.omegas(), {series});
  const std::string text = slurp(chart.path);
  REQUIRE(text.rfind("<svg", 0) == 0);
  REQUIRE(text.find("</svg>") != std::string::npos);
  REQUIRE(text.find("demo chart") != std::string::npos);

  LossStats stats;
  stats.name = "naive";
  stats.count = 3;
  stats.hist_low = 0.0;
  stats.hist_high = 2.0;
  stats.histogram = {1, 2};
  TempFile hist_chart("io_test_hist.svg");
  svg_histogram_chart(hist_chart.path, "losses", {stats});
  const std::string hist_text = slurp(hist_chart.path);
  REQUIRE(hist_text.rfind("<svg", 0) == 0);
  REQUIRE(hist_text.find("naive") != std::string::npos);
}
