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
#include <complex>

#include "oracles.hpp"
#include "specden/filters.hpp"
#include "specden/rng.hpp"

using namespace specden;

namespace {
const double kPi = Rng::pi();
}

TEST_CASE("CPMG switch times follow (2i+1) T / (2p)", "[filters]") {
  const PulseSequence seq = cpmg_sequence(4, 2.0);
  REQUIRE(seq.switch_times.size() == 4);
  REQUIRE(seq.switch_times[0] == Catch::Approx(0.25).epsilon(1e-15));
  REQUIRE(seq.switch_times[1] == Catch::Approx(0.75).epsilon(1e-15));
  REQUIRE(seq.switch_times[3] == Catch::Approx(1.75).epsilon(1e-15));
  REQUIRE_THROWS_AS(cpmg_sequence(0, 1.0), contract_error);
  REQUIRE_THROWS_AS(cpmg_sequence(3, 0.0), contract_error);
}

TEST_CASE("one-pulse fundamental filter at omega = 2 pi is 2i/pi",
          "[filters]") {
  const PulseSequence seq = cpmg_sequence(1, 1.0);
  const std::complex<double> value = fundamental_filter(seq, 2.0 * kPi);
  REQUIRE(std::abs(value.real()) < 1e-12);
  REQUIRE(value.imag() ==
          Catch::Approx(0.63661977236758138).epsilon(1e-12));
}

TEST_CASE("one-pulse filter matches 16 sin^4(wT/4) / w^2", "[filters]") {
  const PulseSequence seq = cpmg_sequence(1, 1.0);
  for (double omega : {0.3, 1.0, 2.0, 3.7, 2.0 * kPi, 11.0, 40.0}) {
    const double expected =
        16.0 * std::pow(std::sin(omega / 4.0), 4) / (omega * omega);
    REQUIRE(std::norm(fundamental_filter(seq, omega)) ==
            Catch::Approx(expected).epsilon(1e-11));
  }
  REQUIRE(std::norm(fundamental_filter(seq, 2.0 * kPi)) ==
          Catch::Approx(0.4052847345693511).epsilon(1e-12));
}

TEST_CASE("fundamental filter vanishes at omega = 0 (echo condition)",
          "[filters]") {
  for (int p = 1; p <= 25; ++p) {
    const PulseSequence seq = cpmg_sequence(p, 1.0);
    REQUIRE(std::abs(fundamental_filter(seq, 0.0)) < 1e-12);
  }
}

TEST_CASE("closed form agrees with brute-force quadrature", "[filters]") {
  Rng rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const int p = 1 + static_cast<int>(rng.below(25));
    const double omega = rng.uniform(0.0, default_omega_max(25, 1.0));
    const PulseSequence seq = cpmg_sequence(p, 1.0);
    const std::complex<double> fast = fundamental_filter(seq, omega);
    const std::complex<double> slow =
        oracles::brute_force_fundamental(seq, omega, 40000);
    REQUIRE(std::abs(fast - slow) <=
            1e-6 * std::max(std::abs(slow), 1e-3));
  }
}

TEST_CASE("Taylor branch is consistent across the switch-over", "[filters]") {
  // Check both sides of the omega * T < 1e-4 branch point against the slow
  // quadrature oracle; the filter magnitude there is ~1e-6, so 1e-14 is a
  // stringent bound on either branch's absolute error.
  const PulseSequence seq = cpmg_sequence(3, 1.0);
  // Taylor side: truncation is O((wT)^4), far below 1e-14.
  for (double omega : {5e-5, 0.99e-4}) {
    const std::complex<double> fast = fundamental_filter(seq, omega);
    const std::complex<double> slow =
        oracles::brute_force_fundamental(seq, omega, 20000);
    REQUIRE(std::abs(fast - slow) < 1e-14);
  }
  // Closed-form side: subtracting nearly equal exponentials leaves ~eps/omega
  // of cancellation noise, about 1e-11 here; 1e-10 still pins the value to
  // five significant digits of its ~3e-6 magnitude.
  for (double omega : {1.01e-4, 2e-4}) {
    const std::complex<double> fast = fundamental_filter(seq, omega);
    const std::complex<double> slow =
        oracles::brute_force_fundamental(seq, omega, 20000);
    REQUIRE(std::abs(fast - slow) < 1e-10);
  }
}

TEST_CASE("filter bank normalizations match an independent oracle",
          "[filters]") {
  const FrequencyGrid grid =
      FrequencyGrid::uniform(default_omega_max(25, 1.0), 200);
  const auto bank = filter_bank(25, 1.0, grid);
  REQUIRE(bank.size() == 25);
  REQUIRE(bank[0].normalization ==
          Catch::Approx(3.0819807414778873).epsilon(1e-12));
  REQUIRE(bank[4].normalization ==
          Catch::Approx(2.9165889524421873).epsilon(1e-12));
  REQUIRE(bank[24].normalization ==
          Catch::Approx(2.4896326726295572).epsilon(1e-12));
  for (const FilterFunction& filter : bank) {
    REQUIRE(filter.normalization > 0.0);
    REQUIRE(filter.values.minCoeff() >= 0.0);
  }
}

TEST_CASE("filter peaks sit near pi p / T and increase with p", "[filters]") {
  const FrequencyGrid grid =
      FrequencyGrid::uniform(default_omega_max(25, 1.0), 200);
  const auto bank = filter_bank(25, 1.0, grid);
  const double spacing = grid[1] - grid[0];
  // The p = 10 main peak lies within one grid spacing of pi * 10.
  REQUIRE(std::abs(bank[9].peak_omega - 10.0 * kPi) <= spacing);
  REQUIRE(bank[9].peak_omega ==
          Catch::Approx(31.810598979816245).epsilon(1e-12));
  for (std::size_t j = 1; j < bank.size(); ++j) {
    REQUIRE(bank[j].peak_omega > bank[j - 1].peak_omega);
  }
}

TEST_CASE("default cutoff clears the largest filter's main peak",
          "[filters]") {
  REQUIRE(default_omega_max(25, 1.0) ==
          Catch::Approx(102.10176124166827).epsilon(1e-14));
  REQUIRE(default_omega_max(25, 1.0) > 25.0 * kPi);
  REQUIRE(default_omega_max(10, 2.0) ==
          Catch::Approx(1.3 * kPi * 10.0 / 2.0).epsilon(1e-14));
}

TEST_CASE("fundamental filter rejects negative frequencies", "[filters]") {
  const PulseSequence seq = cpmg_sequence(2, 1.0);
  REQUIRE_THROWS_AS(fundamental_filter(seq, -1.0), contract_error);
}
