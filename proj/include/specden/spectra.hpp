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
#include <limits>

#include "specden/errors.hpp"
#include "specden/grid.hpp"
#include "specden/rng.hpp"

namespace specden {

/// A power spectrum sampled on the shared frequency grid.
using SpectrumVector = Eigen::VectorXd;

/// Hyperparameters of the 1/f^alpha family S(omega) = A / (omega^alpha + c).
struct OneOnFParams {
  double amplitude = 10.0;  // A > 0
  double exponent = 0.75;   // alpha
  double cutoff = 3.0;      // c > 0, the effective low-frequency cutoff
};

/// Hierarchical prior over OneOnFParams:
///   A ~ Normal(amplitude_mean, amplitude_variance)
///   alpha ~ Uniform[exponent_low, exponent_high]
///   c ~ cutoff_shift + Exponential(cutoff_rate)
/// Zero-width degenerate forms (variance 0, equal bounds, rate = +inf) are
/// allowed and concentrate the corresponding coordinate at a point.
struct HyperPrior {
  double amplitude_mean = 10.0;
  double amplitude_variance = 0.025;
  double exponent_low = 0.5;
  double exponent_high = 1.0;
  double cutoff_shift = 0.1;   // x_l >= 0
  double cutoff_rate = 3.0;    // lambda > 0 (+inf pins c at cutoff_shift)

  void validate() const {
    require(amplitude_variance >= 0.0, "HyperPrior: negative amplitude variance");
    require(exponent_low <= exponent_high, "HyperPrior: exponent bounds reversed");
    require(cutoff_shift >= 0.0, "HyperPrior: negative cutoff shift");
    require(cutoff_rate > 0.0, "HyperPrior: cutoff rate must be positive");
    require(amplitude_mean > 0.0, "HyperPrior: amplitude mean must be positive");
  }
};

/// S(omega_k) = A / (omega_k^alpha + c), with the convention 0^alpha = 0 so
/// that S(0) = A/c for every alpha.
inline SpectrumVector evaluate_one_on_f(const OneOnFParams& params,
                                        const FrequencyGrid& grid) {
  require(params.amplitude > 0.0, "evaluate_one_on_f: amplitude must be > 0");
  require(params.cutoff > 0.0, "evaluate_one_on_f: cutoff must be > 0");
  SpectrumVector values(grid.size());
  for (Eigen::Index k = 0; k < grid.size(); ++k) {
    const double w = grid[k];
    const double w_pow = w > 0.0 ? std::pow(w, params.exponent) : 0.0;
    values[k] = params.amplitude / (w_pow + params.cutoff);
  }
  return values;
}

inline OneOnFParams sample_hyperprior(const HyperPrior& prior, Rng& rng) {
  prior.validate();
  OneOnFParams params;
  params.amplitude =
      rng.normal(prior.amplitude_mean, std::sqrt(prior.amplitude_variance));
  params.exponent = prior.exponent_low == prior.exponent_high
                        ? prior.exponent_low
                        : rng.uniform(prior.exponent_low, prior.exponent_high);
  params.cutoff = prior.cutoff_shift + rng.exponential(prior.cutoff_rate);
  return params;
}

/// Monte Carlo estimate of the prior mean function
/// mu(omega) = E_{A, alpha, c}[A / (omega^alpha + c)].
inline SpectrumVector prior_mean_spectrum(const HyperPrior& prior,
                                          const FrequencyGrid& grid,
                                          long n_samples, Rng& rng) {
  require(n_samples >= 1, "prior_mean_spectrum: need at least one sample");
  SpectrumVector mean = SpectrumVector::Zero(grid.size());
  for (long i = 0; i < n_samples; ++i) {
    mean += evaluate_one_on_f(sample_hyperprior(prior, rng), grid);
  }
  return mean / static_cast<double>(n_samples);
}

/// Clips a spectrum at zero from below (a negative spectrum would imply an
/// outcome probability above one downstream). Returns the number of clipped
/// entries so callers can report clip events.
inline long clip_nonnegative(SpectrumVector& spectrum) {
  long clipped = 0;
  for (Eigen::Index k = 0; k < spectrum.size(); ++k) {
    if (spectrum[k] < 0.0) {
      spectrum[k] = 0.0;
      ++clipped;
    }
  }
  return clipped;
}

}  // namespace specden
