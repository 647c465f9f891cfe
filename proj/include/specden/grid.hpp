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
#include <cstddef>

#include "specden/errors.hpp"

namespace specden {

/// Discretized frequency support W = {omega_1, ..., omega_M} with cutoff
/// Omega = omega_M. Every integral in the library is a trapezoid sum over one
/// shared grid so the simulator and all estimators are mutually consistent.
class FrequencyGrid {
 public:
  explicit FrequencyGrid(Eigen::VectorXd omegas) : omegas_(std::move(omegas)) {
    require(omegas_.size() >= 2, "FrequencyGrid: need at least 2 points");
    require(omegas_[0] >= 0.0, "FrequencyGrid: frequencies must be >= 0");
    for (Eigen::Index k = 1; k < omegas_.size(); ++k) {
      require(omegas_[k] > omegas_[k - 1],
              "FrequencyGrid: frequencies must be strictly increasing");
      require(std::isfinite(omegas_[k]), "FrequencyGrid: non-finite frequency");
    }
  }

  /// Uniform grid of n_points on [0, omega_max].
  static FrequencyGrid uniform(double omega_max, Eigen::Index n_points) {
    require(omega_max > 0.0, "FrequencyGrid: omega_max must be positive");
    require(n_points >= 2, "FrequencyGrid: need at least 2 points");
    return FrequencyGrid(Eigen::VectorXd::LinSpaced(n_points, 0.0, omega_max));
  }

  const Eigen::VectorXd& omegas() const { return omegas_; }
  Eigen::Index size() const { return omegas_.size(); }
  double cutoff() const { return omegas_[omegas_.size() - 1]; }
  double operator[](Eigen::Index k) const { return omegas_[k]; }

  bool same_as(const FrequencyGrid& other) const {
    return omegas_.size() == other.omegas_.size() && omegas_ == other.omegas_;
  }

 private:
  Eigen::VectorXd omegas_;
};

/// Trapezoid quadrature weights: integral(v) = weights.dot(v).
inline Eigen::VectorXd trapezoid_weights(const FrequencyGrid& grid) {
  const Eigen::VectorXd& w = grid.omegas();
  const Eigen::Index m = w.size();
  Eigen::VectorXd weights = Eigen::VectorXd::Zero(m);
  for (Eigen::Index k = 1; k < m; ++k) {
    const double half = 0.5 * (w[k] - w[k - 1]);
    weights[k - 1] += half;
    weights[k] += half;
  }
  return weights;
}

/// Composite trapezoid rule of `values` sampled on `grid`.
inline double trapezoid(const Eigen::Ref<const Eigen::VectorXd>& values,
                        const FrequencyGrid& grid) {
  require(values.size() == grid.size(),
          "trapezoid: values length does not match grid");
  double sum = 0.0;
  for (Eigen::Index k = 1; k < grid.size(); ++k) {
    sum += 0.5 * (values[k] + values[k - 1]) * (grid[k] - grid[k - 1]);
  }
  return sum;
}

/// Piecewise-linear interpolation with constant extrapolation outside the
/// hull (nearest endpoint). `xs` must be strictly increasing.
inline double linear_interpolate(const Eigen::Ref<const Eigen::VectorXd>& xs,
                                 const Eigen::Ref<const Eigen::VectorXd>& ys,
                                 double query) {
  require(xs.size() > 0 && xs.size() == ys.size(),
          "linear_interpolate: empty input or size mismatch");
  if (query <= xs[0]) {
    return ys[0];
  }
  const Eigen::Index n = xs.size();
  if (query >= xs[n - 1]) {
    return ys[n - 1];
  }
  // Binary search for the bracketing segment.
  Eigen::Index lo = 0;
  Eigen::Index hi = n - 1;
  while (hi - lo > 1) {
    const Eigen::Index mid = lo + (hi - lo) / 2;
    (xs[mid] <= query ? lo : hi) = mid;
  }
  const double t = (query - xs[lo]) / (xs[hi] - xs[lo]);
  return ys[lo] + t * (ys[hi] - ys[lo]);
}

}  // namespace specden
