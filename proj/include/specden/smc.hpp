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
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>
#include <vector>

#include "specden/errors.hpp"
#include "specden/filters.hpp"
#include "specden/forward.hpp"
#include "specden/gp.hpp"
#include "specden/grid.hpp"
#include "specden/rng.hpp"
#include "specden/spectra.hpp"

namespace specden {

/// Tuning knobs for sequential Monte Carlo. The defaults are standard
/// particle-filtering practice: 5000 particles, Liu-West contraction 0.98,
/// kernel resampling once the effective sample size drops below n/2.
struct SmcOptions {
  int n_particles = 5000;
  double contraction = 0.98;          // Liu-West "a"
  double resample_fraction = 0.5;     // resample when ESS < fraction * n
  int max_rejection_attempts = 100;   // then clamp to the support boundary
};

/// Weighted hyperparameter hypotheses theta_i = (A, alpha, c). The support
/// box is the prior's support (amplitude > 0, exponent within its interval,
/// cutoff >= its shift); resampling never moves a particle outside it.
struct ParticleEnsemble {
  Eigen::Matrix<double, Eigen::Dynamic, 3> particles;  // n x (A, alpha, c)
  Eigen::VectorXd weights;                             // nonnegative, sum 1
  Eigen::Vector3d support_low;
  Eigen::Vector3d support_high;
  std::vector<double> ess_history;  // ESS after each Bayes update
  long resample_count = 0;
  long clamp_count = 0;  // terminal clamp fallbacks during resampling

  Eigen::Index size() const { return particles.rows(); }

  OneOnFParams particle(Eigen::Index i) const {
    return {particles(i, 0), particles(i, 1), particles(i, 2)};
  }
};

inline ParticleEnsemble init_ensemble(const HyperPrior& prior, int n_particles,
                                      Rng& rng) {
  require(n_particles >= 2, "init_ensemble: need at least two particles");
  prior.validate();
  ParticleEnsemble ensemble;
  ensemble.particles.resize(n_particles, 3);
  for (int i = 0; i < n_particles; ++i) {
    const OneOnFParams draw = sample_hyperprior(prior, rng);
    ensemble.particles(i, 0) = draw.amplitude;
    ensemble.particles(i, 1) = draw.exponent;
    ensemble.particles(i, 2) = draw.cutoff;
  }
  ensemble.weights =
      Eigen::VectorXd::Constant(n_particles, 1.0 / n_particles);
  ensemble.support_low = {std::numeric_limits<double>::min(),
                          prior.exponent_low, prior.cutoff_shift};
  ensemble.support_high = {std::numeric_limits<double>::infinity(),
                           prior.exponent_high,
                           std::numeric_limits<double>::infinity()};
  return ensemble;
}

/// chi for one hyperparameter hypothesis, through the shared quadrature.
inline double particle_chi(const OneOnFParams& params,
                           const FilterFunction& filter,
                           const FrequencyGrid& grid) {
  return chi(evaluate_one_on_f(params, grid), filter, grid);
}

inline double effective_sample_size(const ParticleEnsemble& ensemble) {
  const double sum_sq = ensemble.weights.squaredNorm();
  require(sum_sq > 0.0, "effective_sample_size: all weights are zero");
  return 1.0 / sum_sq;
}

/// Liu-West kernel resampler: draws parents proportionally to weight, then
/// shrinks toward the ensemble mean and re-inflates with Gaussian noise so
/// the first two weighted moments are preserved:
///   theta' = a * parent + (1 - a) * mean + Normal(0, (1 - a^2) * cov).
/// Out-of-support draws are rejected and re-drawn up to the attempt limit,
/// then clamped to the boundary (counted). Weights reset to uniform.
inline void resample(ParticleEnsemble& ensemble, double contraction, Rng& rng,
                     int max_rejection_attempts = 100) {
  require(contraction > 0.0 && contraction < 1.0,
          "resample: contraction must lie in (0, 1)");
  const Eigen::Index n = ensemble.size();
  const Eigen::Vector3d mean =
      ensemble.particles.transpose() * ensemble.weights;
  Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Vector3d d = ensemble.particles.row(i).transpose() - mean;
    covariance += ensemble.weights[i] * d * d.transpose();
  }
  // Noise factor for (1 - a^2) * cov; eigenvalue clipping tolerates the
  // rank-deficient covariances of partially fixed ensembles.
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eigen(
      (1.0 - contraction * contraction) * covariance);
  if (eigen.info() != Eigen::Success) {
    throw numeric_error("resample: covariance factorization failed");
  }
  Eigen::Vector3d scale = eigen.eigenvalues();
  for (int k = 0; k < 3; ++k) {
    scale[k] = scale[k] > 0.0 ? std::sqrt(scale[k]) : 0.0;
  }
  const Eigen::Matrix3d noise_factor =
      eigen.eigenvectors() * scale.asDiagonal();

  // Multinomial parent selection by inverse-CDF lookup.
  Eigen::VectorXd cumulative(n);
  double running = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    running += ensemble.weights[i];
    cumulative[i] = running;
  }
  cumulative[n - 1] = 1.0;  // guard against round-off at the top

  Eigen::Matrix<double, Eigen::Dynamic, 3> next(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double u = rng.uniform01();
    const Eigen::Index parent = static_cast<Eigen::Index>(
        std::lower_bound(cumulative.data(), cumulative.data() + n, u) -
        cumulative.data());
    const Eigen::Vector3d base =
        contraction * ensemble.particles.row(parent).transpose() +
        (1.0 - contraction) * mean;
    Eigen::Vector3d proposal;
    bool in_support = false;
    for (int attempt = 0; attempt < max_rejection_attempts; ++attempt) {
      const Eigen::Vector3d z(rng.normal(), rng.normal(), rng.normal());
      proposal = base + noise_factor * z;
      in_support = (proposal.array() >= ensemble.support_low.array()).all() &&
                   (proposal.array() <= ensemble.support_high.array()).all();
      if (in_support) {
        break;
      }
    }
    if (!in_support) {
      proposal = proposal.cwiseMax(ensemble.support_low)
                     .cwiseMin(ensemble.support_high);
      ++ensemble.clamp_count;
    }
    next.row(i) = proposal.transpose();
  }
  ensemble.particles = std::move(next);
  ensemble.weights = Eigen::VectorXd::Constant(n, 1.0 / n);
  ++ensemble.resample_count;
}

namespace detail {

/// n x J matrix of chi values for every (particle, filter) pair; the cache
/// that makes a Bayes sweep one matrix product instead of n*J quadratures.
inline Eigen::MatrixXd ensemble_chi_matrix(const ParticleEnsemble& ensemble,
                                           const Eigen::MatrixXd& design,
                                           const FrequencyGrid& grid) {
  const Eigen::Index n = ensemble.size();
  Eigen::MatrixXd spectra(n, grid.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    spectra.row(i) =
        evaluate_one_on_f(ensemble.particle(i), grid).transpose();
  }
  return spectra * design.transpose();
}

}  // namespace detail

/// One Bayes sweep over a measurement record: the record's sequences are
/// absorbed one at a time (the product over j factorizes), each update
/// multiplying weights by the binomial likelihood in log space, renormalizing,
/// recording the ESS, and kernel-resampling whenever ESS < fraction * n.
inline void bayes_update(ParticleEnsemble& ensemble,
                         const MeasurementRecord& record,
                         const std::vector<FilterFunction>& bank,
                         const FrequencyGrid& grid, Rng& rng,
                         const SmcOptions& options = {}) {
  record.validate();
  require(record.entries.size() == bank.size(),
          "bayes_update: record entries do not match the filter bank");
  const Eigen::Index n = ensemble.size();
  const double shots = static_cast<double>(record.shots);
  const Eigen::MatrixXd design = build_design_matrix(bank, grid);
  Eigen::MatrixXd chi_cache = detail::ensemble_chi_matrix(ensemble, design, grid);

  for (std::size_t j = 0; j < record.entries.size(); ++j) {
    const double k = static_cast<double>(record.entries[j].successes);
    Eigen::VectorXd log_weight(n);
    double max_log = -std::numeric_limits<double>::infinity();
    double min_ll = std::numeric_limits<double>::infinity();
    double max_ll = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
      const double p = outcome_probability(
          chi_cache(i, static_cast<Eigen::Index>(j)));
      double ll = 0.0;
      if (k > 0.0) {
        ll += k * std::log(p);
      }
      if (shots - k > 0.0) {
        ll += (shots - k) * std::log1p(-std::min(p, 1.0 - 1e-16));
      }
      min_ll = std::min(min_ll, ll);
      max_ll = std::max(max_ll, ll);
      const double w = ensemble.weights[i];
      log_weight[i] =
          (w > 0.0 ? std::log(w) : -std::numeric_limits<double>::infinity()) +
          ll;
      max_log = std::max(max_log, log_weight[i]);
    }
    if (!std::isfinite(max_log)) {
      std::ostringstream what;
      what << "bayes_update: all particle weights underflowed at sequence p="
           << record.entries[j].sequence_id << " (log-likelihood range ["
           << min_ll << ", " << max_ll << "])";
      throw inference_error(what.str());
    }
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      ensemble.weights[i] = std::exp(log_weight[i] - max_log);
      total += ensemble.weights[i];
    }
    ensemble.weights /= total;
    const double ess = effective_sample_size(ensemble);
    ensemble.ess_history.push_back(ess);
    if (ess < options.resample_fraction * static_cast<double>(n)) {
      resample(ensemble, options.contraction, rng,
               options.max_rejection_attempts);
      chi_cache = detail::ensemble_chi_matrix(ensemble, design, grid);
    }
  }
}

/// Weighted ensemble mean and covariance of the hyperparameters.
inline std::pair<Eigen::Vector3d, Eigen::Matrix3d> posterior_summary(
    const ParticleEnsemble& ensemble) {
  const Eigen::Vector3d mean =
      ensemble.particles.transpose() * ensemble.weights;
  Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();
  for (Eigen::Index i = 0; i < ensemble.size(); ++i) {
    const Eigen::Vector3d d = ensemble.particles.row(i).transpose() - mean;
    covariance += ensemble.weights[i] * d * d.transpose();
  }
  return {mean, covariance};
}

/// Spectrum model plugged into the generic reports: maps a hyperparameter
/// triple to a spectrum on the grid.
template <typename Model>
SpectrumVector report_spectrum_at_mean(const ParticleEnsemble& ensemble,
                                       const FrequencyGrid& grid,
                                       Model&& model) {
  const Eigen::Vector3d mean = posterior_summary(ensemble).first;
  return model(mean, grid);
}

template <typename Model>
SpectrumVector report_mean_spectrum(const ParticleEnsemble& ensemble,
                                    const FrequencyGrid& grid, Model&& model) {
  SpectrumVector mean = SpectrumVector::Zero(grid.size());
  for (Eigen::Index i = 0; i < ensemble.size(); ++i) {
    if (ensemble.weights[i] > 0.0) {
      mean += ensemble.weights[i] *
              model(Eigen::Vector3d(ensemble.particles.row(i)), grid);
    }
  }
  return mean;
}

/// The production spectrum model: theta = (A, alpha, c) -> A/(w^alpha + c).
inline SpectrumVector one_on_f_model(const Eigen::Vector3d& theta,
                                     const FrequencyGrid& grid) {
  return evaluate_one_on_f({theta[0], theta[1], theta[2]}, grid);
}

/// "Plug-in" report: the spectrum evaluated at the posterior-mean
/// hyperparameters.
inline SpectrumVector report_spectrum_at_mean(const ParticleEnsemble& ensemble,
                                              const FrequencyGrid& grid) {
  return report_spectrum_at_mean(ensemble, grid, one_on_f_model);
}

/// Bayes report: the posterior-mean spectrum E[S(w; theta) | data]. Differs
/// from the plug-in report by a Jensen gap except for models linear in theta.
inline SpectrumVector report_mean_spectrum(const ParticleEnsemble& ensemble,
                                           const FrequencyGrid& grid) {
  return report_mean_spectrum(ensemble, grid, one_on_f_model);
}

}  // namespace specden
