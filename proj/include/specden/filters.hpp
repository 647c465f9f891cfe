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
#include <cmath>
#include <complex>
#include <vector>

#include "specden/errors.hpp"
#include "specden/grid.hpp"
#include "specden/rng.hpp"

namespace specden {

/// A CPMG echo train: p pi-pulses over total time T. The control switching
/// function y(t) starts at +1 and flips sign at each switch time
/// t_i = (2i+1) T / (2p), i = 0..p-1.
struct PulseSequence {
  int n_pulses = 0;
  double total_time = 0.0;
  std::vector<double> switch_times;
};

inline PulseSequence cpmg_sequence(int p, double total_time) {
  require(p >= 1, "cpmg_sequence: need at least one pulse");
  require(total_time > 0.0, "cpmg_sequence: total time must be positive");
  PulseSequence seq;
  seq.n_pulses = p;
  seq.total_time = total_time;
  seq.switch_times.reserve(static_cast<std::size_t>(p));
  for (int i = 0; i < p; ++i) {
    seq.switch_times.push_back((2.0 * i + 1.0) * total_time / (2.0 * p));
  }
  return seq;
}

/// Order-one fundamental filter F1(omega, T) = integral_0^T y(t) e^{i omega t} dt,
/// evaluated in closed form segment by segment. Near omega = 0 the closed form
/// divides two vanishing quantities, so a Taylor branch takes over; at
/// omega = 0 exactly it reduces to the (telescoping) signed segment lengths.
inline std::complex<double> fundamental_filter(const PulseSequence& seq,
                                               double omega) {
  require(omega >= 0.0, "fundamental_filter: omega must be >= 0");
  const double T = seq.total_time;
  const int p = seq.n_pulses;
  // Segment boundaries 0 = s_0 < s_1 < ... < s_p < s_{p+1} = T with signs (-1)^m.
  auto boundary = [&](int m) -> double {
    if (m == 0) return 0.0;
    if (m == p + 1) return T;
    return seq.switch_times[static_cast<std::size_t>(m - 1)];
  };
  if (omega * T < 1e-4) {
    // integral y(t) e^{iwt} ~ sum_m (-1)^m [ds + iw ds2/2 - w^2 ds3/6 - iw^3 ds4/24]
    double c0 = 0.0, c1 = 0.0, c2 = 0.0, c3 = 0.0;
    double sign = 1.0;
    for (int m = 0; m <= p; ++m, sign = -sign) {
      const double a = boundary(m);
      const double b = boundary(m + 1);
      c0 += sign * (b - a);
      c1 += sign * (b * b - a * a) / 2.0;
      c2 += sign * (b * b * b - a * a * a) / 6.0;
      c3 += sign * (b * b * b * b - a * a * a * a) / 24.0;
    }
    const double w = omega;
    return {c0 - w * w * c2, w * c1 - w * w * w * c3};
  }
  std::complex<double> sum(0.0, 0.0);
  const std::complex<double> iw(0.0, omega);
  double sign = 1.0;
  std::complex<double> e_prev = std::exp(iw * boundary(0));
  for (int m = 0; m <= p; ++m, sign = -sign) {
    const std::complex<double> e_next = std::exp(iw * boundary(m + 1));
    sum += sign * (e_next - e_prev);
    e_prev = e_next;
  }
  return sum / iw;
}

/// A control sequence's filter function F_j = |F1|^2 sampled on the grid,
/// with its normalization f_j = integral F_j and peak frequency (grid argmax,
/// lowest index on ties so output is deterministic).
struct FilterFunction {
  int sequence_id = 0;       // the p of the generating CPMG sequence
  Eigen::VectorXd values;    // F_j(omega_k), all >= 0
  double normalization = 0;  // f_j > 0
  double peak_omega = 0;     // grid point maximizing F_j
};

inline FilterFunction filter_function(const PulseSequence& seq,
                                      const FrequencyGrid& grid) {
  FilterFunction filter;
  filter.sequence_id = seq.n_pulses;
  filter.values.resize(grid.size());
  for (Eigen::Index k = 0; k < grid.size(); ++k) {
    filter.values[k] = std::norm(fundamental_filter(seq, grid[k]));
  }
  filter.normalization = trapezoid(filter.values, grid);
  require(filter.normalization > 0.0,
          "filter_function: degenerate filter (zero normalization)");
  Eigen::Index argmax = 0;
  for (Eigen::Index k = 1; k < grid.size(); ++k) {
    if (filter.values[k] > filter.values[argmax]) {
      argmax = k;
    }
  }
  filter.peak_omega = grid[argmax];
  return filter;
}

/// Filters for p = 1..p_max on the shared grid.
inline std::vector<FilterFunction> filter_bank(int p_max, double total_time,
                                               const FrequencyGrid& grid) {
  require(p_max >= 1, "filter_bank: p_max must be >= 1");
  std::vector<FilterFunction> bank;
  bank.reserve(static_cast<std::size_t>(p_max));
  for (int p = 1; p <= p_max; ++p) {
    bank.push_back(filter_function(cpmg_sequence(p, total_time), grid));
  }
  return bank;
}

/// Default grid cutoff: 1.3 * pi * p_max / T keeps the largest filter's main
/// peak (near pi * p_max / T) comfortably inside the grid.
inline double default_omega_max(int p_max, double total_time) {
  require(p_max >= 1 && total_time > 0.0, "default_omega_max: bad arguments");
  return 1.3 * Rng::pi() * p_max / total_time;
}

}  // namespace specden
