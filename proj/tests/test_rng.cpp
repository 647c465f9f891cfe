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
#include <limits>

#include "specden/rng.hpp"

using namespace specden;

TEST_CASE("identical seeds replay identical streams", "[rng]") {
  Rng a(12345), b(12345), c(54321);
  bool all_equal = true;
  bool any_differs = false;
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t va = a.next_u64();
    all_equal = all_equal && (va == b.next_u64());
    any_differs = any_differs || (va != c.next_u64());
  }
  REQUIRE(all_equal);
  REQUIRE(any_differs);
}

TEST_CASE("split_seed derives distinct reproducible child seeds", "[rng]") {
  REQUIRE(split_seed(7, 0) == split_seed(7, 0));
  REQUIRE(split_seed(7, 0) != split_seed(7, 1));
  REQUIRE(split_seed(7, 0) != split_seed(8, 0));
  // Children seed independent-looking streams.
  Rng a(split_seed(7, 0)), b(split_seed(7, 1));
  REQUIRE(a.next_u64() != b.next_u64());
}

TEST_CASE("uniform01 lives in [0, 1) with the right moments", "[rng]") {
  Rng rng(2024);
  const int n = 1000000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform01();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
    sum_sq += u * u;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  REQUIRE(mean == Catch::Approx(0.5).margin(2e-3));
  REQUIRE(var == Catch::Approx(1.0 / 12.0).margin(1e-3));
}

TEST_CASE("uniform(lo, hi) respects its bounds", "[rng]") {
  Rng rng(9);
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform(-2.0, 5.0);
    REQUIRE(u >= -2.0);
    REQUIRE(u < 5.0);
  }
}

TEST_CASE("normal deviates have unit variance", "[rng]") {
  Rng rng(77);
  const int n = 1000000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sum += z;
    sum_sq += z * z;
  }
  const double mean = sum / n;
  REQUIRE(mean == Catch::Approx(0.0).margin(5e-3));
  REQUIRE(sum_sq / n - mean * mean == Catch::Approx(1.0).margin(7e-3));
  REQUIRE(rng.normal(10.0, 0.0) == 10.0);
}

TEST_CASE("exponential deviates have mean 1/rate", "[rng]") {
  Rng rng(31);
  const int n = 400000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.exponential(3.0);
    REQUIRE(x >= 0.0);
    sum += x;
  }
  REQUIRE(sum / n == Catch::Approx(1.0 / 3.0).margin(3e-3));
  // An infinite rate collapses the distribution onto zero.
  REQUIRE(rng.exponential(std::numeric_limits<double>::infinity()) == 0.0);
}

TEST_CASE("binomial matches its analytic moments", "[rng]") {
  Rng rng(5150);
  REQUIRE(rng.binomial(1000, 0.0) == 0);
  REQUIRE(rng.binomial(1000, 1.0) == 1000);
  const int reps = 20000;
  const long n = 400;
  const double p = 0.3;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < reps; ++i) {
    const double k = static_cast<double>(rng.binomial(n, p));
    REQUIRE(k >= 0.0);
    REQUIRE(k <= static_cast<double>(n));
    sum += k;
    sum_sq += k * k;
  }
  const double mean = sum / reps;
  const double var = sum_sq / reps - mean * mean;
  REQUIRE(mean == Catch::Approx(n * p).margin(0.4));          // sd of mean ~ 0.065
  REQUIRE(var == Catch::Approx(n * p * (1.0 - p)).margin(4.0));
}

TEST_CASE("below(n) is bounded and deterministic", "[rng]") {
  Rng a(1), b(1);
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t v = a.below(10);
    REQUIRE(v < 10);
    REQUIRE(v == b.below(10));
  }
}

TEST_CASE("inverse normal CDF inverts the normal CDF", "[rng]") {
  REQUIRE(inverse_normal_cdf(0.5) == Catch::Approx(0.0).margin(1e-15));
  REQUIRE(inverse_normal_cdf(0.975) ==
          Catch::Approx(1.959963984540054).epsilon(1e-12));
  for (double p : {1e-6, 0.02425, 0.2, 0.5, 0.8, 0.99, 1.0 - 1e-9}) {
    const double x = inverse_normal_cdf(p);
    const double cdf = 0.5 * std::erfc(-x / std::sqrt(2.0));
    REQUIRE(cdf == Catch::Approx(p).margin(1e-12));
  }
  REQUIRE_THROWS_AS(inverse_normal_cdf(0.0), contract_error);
  REQUIRE_THROWS_AS(inverse_normal_cdf(1.0), contract_error);
}
