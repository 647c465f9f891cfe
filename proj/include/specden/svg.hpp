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
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "specden/bench.hpp"
#include "specden/errors.hpp"
#include "specden/io.hpp"

namespace specden {

/// One labeled curve for svg_line_chart.
struct SvgSeries {
  std::string label;
  Eigen::VectorXd y;
  std::string color;
};

namespace detail {

inline const char* svg_palette(std::size_t i) {
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c",
                                 "#9467bd", "#ff7f0e", "#8c564b"};
  return colors[i % 6];
}

inline std::string svg_num(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.2f", v);
  return buffer;
}

struct SvgFrame {
  double width = 860.0;
  double height = 480.0;
  double left = 64.0, right = 24.0, top = 40.0, bottom = 48.0;
  double x_lo = 0.0, x_hi = 1.0, y_lo = 0.0, y_hi = 1.0;

  double px(double x) const {
    return left + (x - x_lo) / (x_hi - x_lo) * (width - left - right);
  }
  double py(double y) const {
    return height - bottom -
           (y - y_lo) / (y_hi - y_lo) * (height - top - bottom);
  }
};

inline void svg_open(std::string& out, const SvgFrame& f,
                     const std::string& title) {
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         svg_num(f.width) + "\" height=\"" + svg_num(f.height) +
         "\" viewBox=\"0 0 " + svg_num(f.width) + " " + svg_num(f.height) +
         "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + svg_num(f.width / 2) +
         "\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\" "
         "text-anchor=\"middle\">" +
         title + "</text>\n";
}

inline void svg_axes(std::string& out, const SvgFrame& f,
                     const std::string& x_label,
                     const std::string& y_label) {
  const double x0 = f.left, x1 = f.width - f.right;
  const double y0 = f.height - f.bottom, y1 = f.top;
  out += "<line x1=\"" + svg_num(x0) + "\" y1=\"" + svg_num(y0) +
         "\" x2=\"" + svg_num(x1) + "\" y2=\"" + svg_num(y0) +
         "\" stroke=\"#333\"/>\n";
  out += "<line x1=\"" + svg_num(x0) + "\" y1=\"" + svg_num(y0) +
         "\" x2=\"" + svg_num(x0) + "\" y2=\"" + svg_num(y1) +
         "\" stroke=\"#333\"/>\n";
  for (int t = 0; t <= 5; ++t) {
    const double fx = f.x_lo + (f.x_hi - f.x_lo) * t / 5.0;
    const double fy = f.y_lo + (f.y_hi - f.y_lo) * t / 5.0;
    char label[40];
    out += "<line x1=\"" + svg_num(f.px(fx)) + "\" y1=\"" + svg_num(y0) +
           "\" x2=\"" + svg_num(f.px(fx)) + "\" y2=\"" + svg_num(y0 + 5) +
           "\" stroke=\"#333\"/>\n";
    std::snprintf(label, sizeof(label), "%.3g", fx);
    out += "<text x=\"" + svg_num(f.px(fx)) + "\" y=\"" + svg_num(y0 + 20) +
           "\" font-family=\"sans-serif\" font-size=\"11\" "
           "text-anchor=\"middle\">" +
           label + "</text>\n";
    out += "<line x1=\"" + svg_num(x0 - 5) + "\" y1=\"" + svg_num(f.py(fy)) +
           "\" x2=\"" + svg_num(x0) + "\" y2=\"" + svg_num(f.py(fy)) +
           "\" stroke=\"#333\"/>\n";
    std::snprintf(label, sizeof(label), "%.3g", fy);
    out += "<text x=\"" + svg_num(x0 - 8) + "\" y=\"" +
           svg_num(f.py(fy) + 4) +
           "\" font-family=\"sans-serif\" font-size=\"11\" "
           "text-anchor=\"end\">" +
           label + "</text>\n";
  }
  out += "<text x=\"" + svg_num((x0 + x1) / 2) + "\" y=\"" +
         svg_num(f.height - 10) +
         "\" font-family=\"sans-serif\" font-size=\"12\" "
         "text-anchor=\"middle\">" +
         x_label + "</text>\n";
  out += "<text x=\"16\" y=\"" + svg_num((y0 + y1) / 2) +
         "\" font-family=\"sans-serif\" font-size=\"12\" "
         "text-anchor=\"middle\" transform=\"rotate(-90 16 " +
         svg_num((y0 + y1) / 2) + ")\">" + y_label + "</text>\n";
}

}  // namespace detail

/// Writes a multi-series line chart. Axis ranges are padded data ranges.
inline void svg_line_chart(const std::string& path, const std::string& title,
                           const Eigen::VectorXd& x,
                           std::vector<SvgSeries> series,
                           const std::string& x_label = "omega",
                           const std::string& y_label = "value") {
  require(x.size() >= 2, "svg_line_chart: need at least two x values");
  require(!series.empty(), "svg_line_chart: need at least one series");
  detail::SvgFrame f;
  f.x_lo = x.minCoeff();
  f.x_hi = x.maxCoeff();
  double y_lo = std::numeric_limits<double>::infinity();
  double y_hi = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < series.size(); ++i) {
    require(series[i].y.size() == x.size(),
            "svg_line_chart: series '" + series[i].label +
                "' does not match x");
    if (series[i].color.empty()) {
      series[i].color = detail::svg_palette(i);
    }
    y_lo = std::min(y_lo, series[i].y.minCoeff());
    y_hi = std::max(y_hi, series[i].y.maxCoeff());
  }
  if (y_hi <= y_lo) {
    y_hi = y_lo + 1.0;
  }
  const double pad = 0.05 * (y_hi - y_lo);
  f.y_lo = y_lo - pad;
  f.y_hi = y_hi + pad;

  std::string out;
  detail::svg_open(out, f, title);
  detail::svg_axes(out, f, x_label, y_label);
  for (std::size_t i = 0; i < series.size(); ++i) {
    out += "<polyline fill=\"none\" stroke=\"" + series[i].color +
           "\" stroke-width=\"1.5\" points=\"";
    for (Eigen::Index k = 0; k < x.size(); ++k) {
      out += detail::svg_num(f.px(x[k])) + "," +
             detail::svg_num(f.py(series[i].y[k])) + " ";
    }
    out += "\"/>\n";
    const double ly = f.top + 16.0 * static_cast<double>(i);
    out += "<rect x=\"" + detail::svg_num(f.width - f.right - 130) +
           "\" y=\"" + detail::svg_num(ly) +
           "\" width=\"12\" height=\"4\" fill=\"" + series[i].color +
           "\"/>\n";
    out += "<text x=\"" + detail::svg_num(f.width - f.right - 112) +
           "\" y=\"" + detail::svg_num(ly + 6) +
           "\" font-family=\"sans-serif\" font-size=\"11\">" +
           series[i].label + "</text>\n";
  }
  out += "</svg>\n";
  write_text(path, out);
}

/// Writes overlaid translucent log10-loss histograms, one per estimator.
inline void svg_histogram_chart(const std::string& path,
                                const std::string& title,
                                const std::vector<LossStats>& stats) {
  std::vector<const LossStats*> active;
  for (const LossStats& s : stats) {
    if (s.count > 0 && !s.histogram.empty()) {
      active.push_back(&s);
    }
  }
  require(!active.empty(), "svg_histogram_chart: nothing to plot");
  detail::SvgFrame f;
  f.x_lo = std::numeric_limits<double>::infinity();
  f.x_hi = -std::numeric_limits<double>::infinity();
  long tallest = 1;
  for (const LossStats* s : active) {
    f.x_lo = std::min(f.x_lo, s->hist_low);
    f.x_hi = std::max(f.x_hi, s->hist_high);
    tallest = std::max(tallest,
                       *std::max_element(s->histogram.begin(),
                                         s->histogram.end()));
  }
  if (f.x_hi <= f.x_lo) {
    f.x_hi = f.x_lo + 1.0;
  }
  f.y_lo = 0.0;
  f.y_hi = static_cast<double>(tallest) * 1.05;

  std::string out;
  detail::svg_open(out, f, title);
  detail::svg_axes(out, f, "log10 loss", "trials");
  for (std::size_t i = 0; i < active.size(); ++i) {
    const LossStats& s = *active[i];
    const std::size_t bins = s.histogram.size();
    const double width =
        bins > 0 && s.hist_high > s.hist_low
            ? (s.hist_high - s.hist_low) / static_cast<double>(bins)
            : 0.2;
    const std::string color = detail::svg_palette(i);
    for (std::size_t b = 0; b < bins; ++b) {
      if (s.histogram[b] == 0) {
        continue;
      }
      const double x0 = f.px(s.hist_low + width * static_cast<double>(b));
      const double x1 =
          f.px(s.hist_low + width * static_cast<double>(b + 1));
      const double y1 = f.py(static_cast<double>(s.histogram[b]));
      const double y0 = f.py(0.0);
      out += "<rect x=\"" + detail::svg_num(x0) + "\" y=\"" +
             detail::svg_num(y1) + "\" width=\"" +
             detail::svg_num(std::max(x1 - x0, 0.5)) + "\" height=\"" +
             detail::svg_num(y0 - y1) + "\" fill=\"" + color +
             "\" fill-opacity=\"0.45\"/>\n";
    }
    const double ly = f.top + 16.0 * static_cast<double>(i);
    out += "<rect x=\"" + detail::svg_num(f.width - f.right - 130) +
           "\" y=\"" + detail::svg_num(ly) +
           "\" width=\"12\" height=\"8\" fill=\"" + color +
           "\" fill-opacity=\"0.45\"/>\n";
    out += "<text x=\"" + detail::svg_num(f.width - f.right - 112) +
           "\" y=\"" + detail::svg_num(ly + 8) +
           "\" font-family=\"sans-serif\" font-size=\"11\">" + s.name +
           "</text>\n";
  }
  out += "</svg>\n";
  write_text(path, out);
}

}  // namespace specden
