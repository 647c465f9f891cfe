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
#include <cmath>

#include "specden/filters.hpp"
#include "specden/forward.hpp"
#include "specden/rng.hpp"
#include "specden/spectra.hpp"

using namespace specden;

namespace {

const double kPi = Rng::pi();

FrequencyGrid default_grid() {
  return FrequencyGrid::uniform(default_omega_max(25, 1.0), 200);
}

}  // namespace

TEST_CASE("chi is linear in the spectrum", "[forward]") {
  const FrequencyGrid grid = default_grid();
  const auto bank = filter_bank(5, 1.0, grid);
  Rng rng(11);
  SpectrumVector s1(grid.size()), s2(grid.size());
  for (Eigen::Index k = 0; k < grid.size(); ++k) {
    s1[k] = rng.uniform(0.0, 4.0);
    s2[k] = rng.uniform(0.0, 4.0);
  }
  const double a = 0.7, b = 2.3;
  for (const FilterFunction& filter : bank) {
    const double combined = chi(a * s1 + b * s2, filter, grid);
    const double separate =
        a * chi(s1, filter, grid) + b * chi(s2, filter, grid);
    REQUIRE(combined == Catch::Approx(separate).margin(1e-12));
  }
}

TEST_CASE("chi of a constant spectrum is s f_j / (2 pi)", "[forward]") {
  const FrequencyGrid grid = default_grid();
  const auto bank = filter_bank(3, 1.0, grid);
  const SpectrumVector s = SpectrumVector::Constant(grid.size(), 2.5);
  REQUIRE(chi(s, bank[0], grid) ==
          Catch::Approx(1.2262811738005763).epsilon(1e-13));
  for (const FilterFunction& filter : bank) {
    REQUIRE(chi(s, filter, grid) ==
            Catch::Approx(2.5 * filter.normalization / (2.0 * kPi))
                .epsilon(1e-14));
  }
}

TEST_CASE("chi quadrature is converged at the default resolution",
          "[forward]") {
  // Quadrupling the grid moves chi by ~1.5e-5 relative at worst across the
  // bank for a smooth one-on-f truth; anything above 1e-3 would mean the
  // shared-grid convention is distorting the forward model.
  const FrequencyGrid coarse = default_grid();
  const FrequencyGrid fine =
      FrequencyGrid::uniform(default_omega_max(25, 1.0), 800);
  const SpectrumVector s_coarse =
      evaluate_one_on_f({10.0, 0.75, 3.0}, coarse);
  const SpectrumVector s_fine = evaluate_one_on_f({10.0, 0.75, 3.0}, fine);
  for (int p : {1, 13, 25}) {
    const FilterFunction f_coarse =
        filter_function(cpmg_sequence(p, 1.0), coarse);
    const FilterFunction f_fine = filter_function(cpmg_sequence(p, 1.0), fine);
    const double chi_coarse = chi(s_coarse, f_coarse, coarse);
    const double chi_fine = chi(s_fine, f_fine, fine);
    REQUIRE(std::abs(chi_coarse - chi_fine) / chi_fine < 1e-3);
  }
}

TEST_CASE("outcome probability maps chi into (1/2, 1]", "[forward]") {
  REQUIRE(outcome_probability(0.0) == 1.0);
  REQUIRE(outcome_probability(0.5) ==
          Catch::Approx(0.80326532985631671).epsilon(1e-15));
  // Strictly above 1/2 while e^{-chi} is representable next to 0.5...
  REQUIRE(outcome_probability(30.0) > 0.5);
  REQUIRE(outcome_probability(30.0) < 0.5 + 1e-13);
  // ...but e^{-50} is far below 0.5's ulp, so the double saturates exactly.
  // Downstream, chi_hat's clamping handles y_hat <= 1/2 estimates anyway.
  REQUIRE(outcome_probability(50.0) == 0.5);
  REQUIRE_THROWS_AS(outcome_probability(-1e-12), domain_error);
}

TEST_CASE("chi_hat inverts exact relative frequencies", "[forward]") {
  MeasurementRecord record;
  record.shots = 1000;
  record.entries = {{1, 900}, {2, 1000}, {3, 800}};
  const ChiVector chis = chi_hat(record);
  // y = 0.9: chi = -log(0.8), sigma2 = (0.8^-2 - 1)/N.
  REQUIRE(chis.chi[0] ==
          Catch::Approx(0.22314355131420971).epsilon(1e-14));
  REQUIRE(chis.sigma2[0] ==
          Catch::Approx(0.00056249999999999974).epsilon(1e-12));
  REQUIRE_FALSE(chis.clamped[0]);
  // k = N: chi_hat = 0 with zero variance (the no-noise corner).
  REQUIRE(chis.chi[1] == 0.0);
  REQUIRE(chis.sigma2[1] == 0.0);
  REQUIRE_FALSE(chis.clamped[1]);
  REQUIRE(chis.chi[2] == Catch::Approx(-std::log(0.6)).epsilon(1e-14));
}

TEST_CASE("chi_hat clamps y <= 1/2 to one effective excess success",
          "[forward]") {
  MeasurementRecord record;
  record.shots = 100;
  record.entries = {{1, 30}, {2, 50}, {3, 51}};
  const ChiVector chis = chi_hat(record);
  // Clamped entries report chi = log N.
  REQUIRE(chis.clamped[0]);
  REQUIRE(chis.chi[0] == Catch::Approx(4.6051701859880918).epsilon(1e-14));
  REQUIRE(chis.clamped[1]);
  REQUIRE(chis.chi[1] == Catch::Approx(std::log(100.0)).epsilon(1e-14));
  // y = 0.51 > 1/2 + 1/(2N) = 0.505: untouched.
  REQUIRE_FALSE(chis.clamped[2]);
  REQUIRE(chis.chi[2] == Catch::Approx(-std::log(0.02)).epsilon(1e-13));
}

TEST_CASE("measurement records validate their counts", "[forward]") {
  MeasurementRecord record;
  record.shots = 10;
  record.entries = {{1, 11}};
  REQUIRE_THROWS_AS(record.validate(), contract_error);
  record.entries = {{1, -1}};
  REQUIRE_THROWS_AS(record.validate(), contract_error);
  record.shots = -1;
  record.entries.clear();
  REQUIRE_THROWS_AS(record.validate(), contract_error);
  MeasurementRecord empty;  // zero shots is a valid (uninformative) record
  REQUIRE_NOTHROW(empty.validate());
  REQUIRE_THROWS_AS(chi_hat(empty), contract_error);
}

TEST_CASE("simulate_record is deterministic and statistically calibrated",
          "[forward]") {
  const FrequencyGrid grid = default_grid();
  const auto bank = filter_bank(4, 1.0, grid);
  const SpectrumVector truth = evaluate_one_on_f({10.0, 0.75, 3.0}, grid);

  Rng a(321), b(321);
  const MeasurementRecord first =
      simulate_record(truth, bank, grid, 500, a, 321);
  const MeasurementRecord second =
      simulate_record(truth, bank, grid, 500, b, 321);
  REQUIRE(first.seed == 321);
  REQUIRE(first.shots == 500);
  REQUIRE(first.entries.size() == bank.size());
  for (std::size_t j = 0; j < bank.size(); ++j) {
    REQUIRE(first.entries[j].sequence_id == bank[j].sequence_id);
    REQUIRE(first.entries[j].successes == second.entries[j].successes);
  }

  // Sample mean of k/N over many records concentrates on Pr(r = 1).
  const double expected =
      outcome_probability(chi(truth, bank[0], grid));
  Rng rng(777);
  const int reps = 200;
  const long shots = 2000;
  double sum = 0.0;
  for (int i = 0; i < reps; ++i) {
    const MeasurementRecord record =
        simulate_record(truth, bank, grid, shots, rng, i);
    sum += static_cast<double>(record.entries[0].successes) /
           static_cast<double>(shots);
  }
  const double se = std::sqrt(expected * (1.0 - expected) /
                              static_cast<double>(shots * reps));
  REQUIRE(sum / reps == Catch::Approx(expected).margin(4.0 * se));
}

TEST_CASE("simulate_record refuses zero shots", "[forward]") {
  const FrequencyGrid grid = FrequencyGrid::uniform(10.0, 16);
  const auto bank = filter_bank(2, 1.0, grid);
  const SpectrumVector truth = SpectrumVector::Constant(grid.size(), 1.0);
  Rng rng(1);
  REQUIRE_THROWS_AS(simulate_record(truth, bank, grid, 0, rng, 0),
                    contract_error);
}
