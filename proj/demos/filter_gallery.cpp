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

// Renders a small gallery of CPMG filter functions and prints where each
// one concentrates its pass band.

#include <cstdio>

#include "specden/specden.hpp"

int main() {
  using namespace specden;

  const int p_max = 10;
  const double total_time = 1.0;
  const FrequencyGrid grid =
      FrequencyGrid::uniform(default_omega_max(p_max, total_time), 400);
  const auto bank = filter_bank(p_max, total_time, grid);

  std::printf("%4s %14s %14s\n", "p", "peak omega", "norm f");
  for (const FilterFunction& filter : bank) {
    std::printf("%4d %14.6f %14.6f\n", filter.sequence_id, filter.peak_omega,
                filter.normalization);
  }

  std::vector<SvgSeries> series;
  for (const FilterFunction& filter : bank) {
    if (filter.sequence_id % 2 == 1) {
      series.push_back(
          {"p=" + std::to_string(filter.sequence_id), filter.values, ""});
    }
  }
  svg_line_chart("filter_gallery.svg", "CPMG filter functions",
                 grid.omegas(), series, "omega", "F(omega)");
  write_filters_csv("filter_gallery.csv", bank, grid);
  std::printf("wrote filter_gallery.svg and filter_gallery.csv\n");
  return 0;
}
