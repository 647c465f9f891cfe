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
#include <utility>
#include <vector>

#include "specden/errors.hpp"
#include "specden/filters.hpp"
#include "specden/forward.hpp"
#include "specden/grid.hpp"
#include "specden/rng.hpp"

namespace specden {

/// Delta-function inversion: each filter is treated as a delta at its peak,
/// giving the point estimates S(peak_j) = 2 pi chi_j / f_j, plus a grid
/// spectrum built by linear interpolation between the peaks (constant
/// extrapolation outside) so integral losses are computable.
struct NaiveEstimate {
  std::vector<std::pair<double, double>> points;  // (peak omega, S hat), sorted
  SpectrumVector on_grid;
};

inline NaiveEstimate naive_estimate(const ChiVector& chis,
                                    const std::vector<FilterFunction>& bank,
                                    const FrequencyGrid& grid) {
  require(static_cast<std::size_t>(chis.size()) == bank.size(),
          "naive_estimate: one chi per filter required");
  NaiveEstimate estimate;
  estimate.points.reserve(bank.size());
  for (std::size_t j = 0; j < bank.size(); ++j) {
    require(bank[j].normalization > 0.0, "naive_estimate: f_j must be > 0");
    estimate.points.emplace_back(
        bank[j].peak_omega,
        2.0 * Rng::pi() * chis.chi[static_cast<Eigen::Index>(j)] /
            bank[j].normalization);
  }
  std::sort(estimate.points.begin(), estimate.points.end());
  // Coincident peaks (possible on very coarse grids) are merged by averaging
  // so the interpolation abscissae stay strictly increasing.
  std::vector<std::pair<double, double>> merged;
  merged.reserve(estimate.points.size());
  for (const auto& point : estimate.points) {
    if (!merged.empty() && merged.back().first == point.first) {
      merged.back().second = 0.5 * (merged.back().second + point.second);
    } else {
      merged.push_back(point);
    }
  }
  estimate.points = std::move(merged);

  Eigen::VectorXd xs(static_cast<Eigen::Index>(estimate.points.size()));
  Eigen::VectorXd ys(static_cast<Eigen::Index>(estimate.points.size()));
  for (std::size_t j = 0; j < estimate.points.size(); ++j) {
    xs[static_cast<Eigen::Index>(j)] = estimate.points[j].first;
    ys[static_cast<Eigen::Index>(j)] = estimate.points[j].second;
  }
  estimate.on_grid.resize(grid.size());
  for (Eigen::Index k = 0; k < grid.size(); ++k) {
    estimate.on_grid[k] = linear_interpolate(xs, ys, grid[k]);
  }
  return estimate;
}

}  // namespace specden
