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
#include <sstream>
#include <utility>
#include <vector>

#include "specden/errors.hpp"
#include "specden/filters.hpp"
#include "specden/forward.hpp"
#include "specden/grid.hpp"
#include "specden/rng.hpp"
#include "specden/spectra.hpp"

namespace specden {

/// Squared-exponential kernel parameters: k(w, w') = kappa e^{-(w-w')^2/delta}.
/// delta carries units of omega^2 (it is a squared correlation length).
struct KernelParams {
  double kappa = 0.02;
  double delta = 100.0;
};

/// A Gaussian process over the grid: mean vector and covariance matrix.
/// Priors and posteriors share this representation.
struct GaussianProcessState {
  SpectrumVector mean;
  Eigen::MatrixXd covariance;
};

inline Eigen::MatrixXd build_kernel(const KernelParams& params,
                                    const FrequencyGrid& grid) {
  require(params.kappa > 0.0 && params.delta > 0.0,
          "build_kernel: kappa and delta must be positive");
  const Eigen::Index m = grid.size();
  Eigen::MatrixXd kernel(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double d = grid[i] - grid[j];
      const double value = params.kappa * std::exp(-d * d / params.delta);
      kernel(i, j) = value;
      kernel(j, i) = value;
    }
  }
  return kernel;
}

/// Gaussian-bump mean function h e^{-(w - w0)^2 / (2 s^2)} on the grid.
inline SpectrumVector gaussian_bump_mean(double height, double center,
                                         double width,
                                         const FrequencyGrid& grid) {
  require(width > 0.0, "gaussian_bump_mean: width must be positive");
  SpectrumVector mean(grid.size());
  for (Eigen::Index k = 0; k < grid.size(); ++k) {
    const double d = grid[k] - center;
    mean[k] = height * std::exp(-d * d / (2.0 * width * width));
  }
  return mean;
}

/// J x M design matrix G with rows trapezoid-weights .* F_j / (2 pi), so that
/// (G S)_j equals chi(S, F_j) bit-for-bit (same quadrature, same constant).
inline Eigen::MatrixXd build_design_matrix(
    const std::vector<FilterFunction>& bank, const FrequencyGrid& grid) {
  const Eigen::VectorXd weights = trapezoid_weights(grid);
  Eigen::MatrixXd design(static_cast<Eigen::Index>(bank.size()), grid.size());
  for (std::size_t j = 0; j < bank.size(); ++j) {
    require(bank[j].values.size() == grid.size(),
            "build_design_matrix: filter not sampled on the given grid");
    design.row(static_cast<Eigen::Index>(j)) =
        (bank[j].values.cwiseProduct(weights) / (2.0 * Rng::pi())).transpose();
  }
  return design;
}

namespace detail {

/// Jitter ladder for rank-deficient kernels: first attempt exact (epsilon=0),
/// then 1e-10 * trace/M escalating tenfold up to 1e-6 * trace/M.
inline std::vector<double> jitter_ladder(const Eigen::MatrixXd& kernel) {
  const double scale = kernel.trace() / static_cast<double>(kernel.rows());
  std::vector<double> ladder = {0.0};
  for (double factor = 1e-10; factor <= 1.0000001e-6; factor *= 10.0) {
    ladder.push_back(factor * scale);
  }
  return ladder;
}

}  // namespace detail

/// Conjugate Gaussian update. The posterior is
///   K' = (G^T Sigma^-1 G + K^-1)^-1,  mu' = K' (G^T Sigma^-1 chi + K^-1 mu),
/// computed in the equivalent innovation form
///   mu' = mu + K G^T (G K G^T + Sigma)^-1 (chi - G mu),
///   K'  = K - K G^T (G K G^T + Sigma)^-1 G K,
/// which only factorizes the J x J SPD innovation matrix. Squared-exponential
/// kernels on fine grids are numerically rank-deficient, so K is never
/// inverted; if the innovation factorization itself fails, additive jitter on
/// K escalates through the ladder before giving up.
inline GaussianProcessState gp_posterior(const GaussianProcessState& prior,
                                         const Eigen::MatrixXd& design,
                                         const ChiVector& chis) {
  const Eigen::Index m = prior.mean.size();
  const Eigen::Index j_count = design.rows();
  require(prior.covariance.rows() == m && prior.covariance.cols() == m,
          "gp_posterior: covariance/mean size mismatch");
  require(design.cols() == m, "gp_posterior: design matrix column mismatch");
  require(chis.chi.size() == j_count && chis.sigma2.size() == j_count,
          "gp_posterior: need one (chi, sigma2) pair per design row");
  for (Eigen::Index j = 0; j < j_count; ++j) {
    require(chis.sigma2[j] > 0.0, "gp_posterior: sigma2 must be positive");
  }
  if (j_count == 0) {
    return prior;
  }

  for (const double epsilon : detail::jitter_ladder(prior.covariance)) {
    Eigen::MatrixXd kernel = prior.covariance;
    if (epsilon > 0.0) {
      kernel.diagonal().array() += epsilon;
    }
    const Eigen::MatrixXd cross = design * kernel;  // J x M
    Eigen::MatrixXd innovation = cross * design.transpose();
    innovation.diagonal() += chis.sigma2;
    const Eigen::LLT<Eigen::MatrixXd> llt(innovation);
    if (llt.info() != Eigen::Success) {
      continue;
    }
    GaussianProcessState posterior;
    const Eigen::VectorXd residual = chis.chi - design * prior.mean;
    posterior.mean = prior.mean + cross.transpose() * llt.solve(residual);
    posterior.covariance = kernel - cross.transpose() * llt.solve(cross);
    // Symmetrize away factorization round-off.
    posterior.covariance =
        0.5 * (posterior.covariance + posterior.covariance.transpose()).eval();
    return posterior;
  }
  std::ostringstream what;
  what << "gp_posterior: innovation factorization failed after jitter "
          "escalation (trace/M = "
       << prior.covariance.trace() / static_cast<double>(m)
       << ", J = " << j_count << ")";
  throw numeric_error(what.str());
}

/// Draws one spectrum from the state's multivariate normal via eigenvalue
/// factorization (negative round-off eigenvalues are clipped at zero). The
/// caller decides whether to clip the sample at zero for use as a truth.
inline SpectrumVector sample_gp(const GaussianProcessState& state, Rng& rng) {
  const Eigen::Index m = state.mean.size();
  require(state.covariance.rows() == m && state.covariance.cols() == m,
          "sample_gp: covariance/mean size mismatch");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigen(state.covariance);
  if (eigen.info() != Eigen::Success) {
    throw numeric_error("sample_gp: eigenvalue factorization failed");
  }
  Eigen::VectorXd scale = eigen.eigenvalues();
  for (Eigen::Index k = 0; k < m; ++k) {
    scale[k] = scale[k] > 0.0 ? std::sqrt(scale[k]) : 0.0;
  }
  Eigen::VectorXd z(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    z[k] = rng.normal();
  }
  return state.mean + eigen.eigenvectors() * scale.cwiseProduct(z);
}

/// Pointwise credible band mu +- z(level) sqrt(diag K); z(0.95) ~ 1.96.
inline std::pair<SpectrumVector, SpectrumVector> credible_band(
    const GaussianProcessState& state, double level) {
  require(level > 0.0 && level < 1.0, "credible_band: level outside (0, 1)");
  const double z = inverse_normal_cdf(0.5 + 0.5 * level);
  const Eigen::VectorXd half_width =
      z * state.covariance.diagonal().cwiseMax(0.0).cwiseSqrt();
  return {state.mean - half_width, state.mean + half_width};
}

}  // namespace specden
