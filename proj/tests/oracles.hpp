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

// Slow, independent reference implementations used only by tests. These
// deliberately avoid the library's closed forms: the fundamental filter is
// integrated numerically segment by segment, so agreement is evidence, not
// tautology.

#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "specden/filters.hpp"

namespace specden::oracles {

/// integral_0^T y(t) e^{i omega t} dt by composite Simpson quadrature on
/// each constant-sign segment, about `total_steps` steps across [0, T].
inline std::complex<double> brute_force_fundamental(const PulseSequence& seq,
                                                    double omega,
                                                    long total_steps) {
  const double T = seq.total_time;
  const int p = seq.n_pulses;
  auto boundary = [&](int m) -> double {
    if (m == 0) return 0.0;
    if (m == p + 1) return T;
    return seq.switch_times[static_cast<std::size_t>(m - 1)];
  };
  std::complex<double> total(0.0, 0.0);
  double sign = 1.0;
  for (int m = 0; m <= p; ++m, sign = -sign) {
    const double a = boundary(m);
    const double b = boundary(m + 1);
    long steps = static_cast<long>(
        std::ceil(static_cast<double>(total_steps) * (b - a) / T));
    steps += steps % 2;              // Simpson needs an even count
    steps = std::max<long>(steps, 2);
    const double h = (b - a) / static_cast<double>(steps);
    std::complex<double> segment =
        std::exp(std::complex<double>(0.0, omega * a)) +
        std::exp(std::complex<double>(0.0, omega * b));
    for (long i = 1; i < steps; ++i) {
      const double t = a + h * static_cast<double>(i);
      segment += (i % 2 == 1 ? 4.0 : 2.0) *
                 std::exp(std::complex<double>(0.0, omega * t));
    }
    total += sign * segment * (h / 3.0);
  }
  return total;
}

}  // namespace specden::oracles
