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
#include <cstdint>
#include <vector>

#include "specden/errors.hpp"
#include "specden/filters.hpp"
#include "specden/grid.hpp"
#include "specden/rng.hpp"
#include "specden/spectra.hpp"

namespace specden {

/// Decoherence exponents chi_j, one per filter, with (optionally) the
/// linearized big-data variances sigma_j^2 and per-entry clamp flags from the
/// chi_hat transform.
struct ChiVector {
  Eigen::VectorXd chi;
  Eigen::VectorXd sigma2;       // empty when not applicable
  std::vector<bool> clamped;    // empty when not applicable

  Eigen::Index size() const { return chi.size(); }
};

/// Counted single-shot outcomes: for each sequence j, the number of r = 1
/// outcomes k_j out of `shots` repetitions. `shots` = 0 encodes an
/// uninformative record (allowed as estimator input, not simulator output).
struct MeasurementRecord {
  struct Entry {
    int sequence_id = 0;  // the p of the CPMG sequence
    long successes = 0;   // k_j, 0 <= k_j <= shots
  };
  std::uint64_t seed = 0;  // stream that generated the record (provenance)
  long shots = 0;          // N, shared across sequences
  std::vector<Entry> entries;

  void validate() const {
    require(shots >= 0, "MeasurementRecord: negative shot count");
    for (const Entry& entry : entries) {
      require(entry.successes >= 0 && entry.successes <= shots,
              "MeasurementRecord: successes outside [0, shots]");
    }
  }
};

/// chi(S; F_j) = (1/2pi) * trapezoid(S .* F_j). This one routine defines the
/// overlap for the simulator and every estimator alike.
inline double chi(const SpectrumVector& spectrum, const FilterFunction& filter,
                  const FrequencyGrid& grid) {
  require(spectrum.size() == grid.size() && filter.values.size() == grid.size(),
          "chi: spectrum/filter not sampled on the given grid");
  return trapezoid(spectrum.cwiseProduct(filter.values), grid) /
         (2.0 * Rng::pi());
}

/// Pr(r = 1) = (1 + e^{-chi}) / 2, in (1/2, 1] for chi >= 0. A negative chi
/// means a negative spectrum reached the forward model.
inline double outcome_probability(double chi_value) {
  if (chi_value < 0.0) {
    throw domain_error("outcome_probability: negative chi (invalid spectrum)");
  }
  return 0.5 * (1.0 + std::exp(-chi_value));
}

/// Draws k_j ~ Binomial(shots, outcome_probability(chi_j)) for each filter.
inline MeasurementRecord simulate_record(const SpectrumVector& truth,
                                         const std::vector<FilterFunction>& bank,
                                         const FrequencyGrid& grid, long shots,
                                         Rng& rng,
                                         std::uint64_t seed_label = 0) {
  require(shots >= 1, "simulate_record: need at least one shot");
  MeasurementRecord record;
  record.seed = seed_label;
  record.shots = shots;
  record.entries.reserve(bank.size());
  for (const FilterFunction& filter : bank) {
    const double p = outcome_probability(chi(truth, filter, grid));
    MeasurementRecord::Entry entry;
    entry.sequence_id = filter.sequence_id;
    entry.successes = rng.binomial(shots, p);
    record.entries.push_back(entry);
  }
  return record;
}

/// Big-data linearization: y_j = k_j / N, chi_j = -log(2 y_j - 1), and the
/// plug-in variance sigma_j^2 = (e^{2 chi_j} - 1)/N. The log is undefined at
/// y <= 1/2, so y is clamped to 1/2 + 1/(2N) ("one effective excess success")
/// and the entry flagged.
inline ChiVector chi_hat(const MeasurementRecord& record) {
  record.validate();
  require(record.shots >= 1, "chi_hat: record has no shots");
  const double n = static_cast<double>(record.shots);
  const Eigen::Index count = static_cast<Eigen::Index>(record.entries.size());
  ChiVector result;
  result.chi.resize(count);
  result.sigma2.resize(count);
  result.clamped.assign(static_cast<std::size_t>(count), false);
  const double y_floor = 0.5 + 0.5 / n;
  for (Eigen::Index j = 0; j < count; ++j) {
    double y = static_cast<double>(record.entries[static_cast<std::size_t>(j)]
                                       .successes) / n;
    if (y <= y_floor) {
      y = y_floor;
      result.clamped[static_cast<std::size_t>(j)] = true;
    }
    const double chi_j = -std::log(2.0 * y - 1.0);
    result.chi[j] = chi_j;
    result.sigma2[j] = (std::exp(2.0 * chi_j) - 1.0) / n;
  }
  return result;
}

}  // namespace specden
