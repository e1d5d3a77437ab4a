// Copyright 2026 The Gridshift Authors
// Licensed under the Apache License, Version 2.0.
// See the LICENSE file in the project root for terms.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace gridshift {

// Small self-contained SVG renderers for the report stage. Not a plotting
// library; just enough to eyeball results.

struct SvgSeries {
  std::string label;
  std::vector<double> ys;
};

struct SvgBar {
  double left = 0.0;
  double right = 0.0;
  double value = 0.0;
  std::string group;
};

namespace svg_detail {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

inline const char* palette(std::size_t i) {
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                 "#9467bd", "#8c564b"};
  return colors[i % 6];
}

struct Frame {
  double width = 860, height = 420;
  double left = 70, right = 20, top = 40, bottom = 45;
  double x_min = 0, x_max = 1, y_min = 0, y_max = 1;

  double px(double x) const {
    return left + (x - x_min) / (x_max - x_min) * (width - left - right);
  }
  double py(double y) const {
    return height - bottom -
           (y - y_min) / (y_max - y_min) * (height - top - bottom);
  }
};

inline std::string open_chart(const Frame& f, const std::string& title,
                              const std::string& x_label,
                              const std::string& y_label) {
  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(f.width) +
       "\" height=\"" + num(f.height) + "\" font-family=\"sans-serif\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + num(f.width / 2) +
       "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" + title +
       "</text>\n";
  // axes
  s += "<line x1=\"" + num(f.left) + "\" y1=\"" + num(f.py(f.y_min)) +
       "\" x2=\"" + num(f.px(f.x_max)) + "\" y2=\"" + num(f.py(f.y_min)) +
       "\" stroke=\"black\"/>\n";
  s += "<line x1=\"" + num(f.left) + "\" y1=\"" + num(f.py(f.y_min)) +
       "\" x2=\"" + num(f.left) + "\" y2=\"" + num(f.py(f.y_max)) +
       "\" stroke=\"black\"/>\n";
  s += "<text x=\"" + num(f.width / 2) + "\" y=\"" + num(f.height - 8) +
       "\" text-anchor=\"middle\" font-size=\"12\">" + x_label + "</text>\n";
  s += "<text x=\"16\" y=\"" + num(f.height / 2) +
       "\" font-size=\"12\" transform=\"rotate(-90 16 " + num(f.height / 2) +
       ")\" text-anchor=\"middle\">" + y_label + "</text>\n";
  // min/max ticks
  s += "<text x=\"" + num(f.left - 6) + "\" y=\"" + num(f.py(f.y_min) + 4) +
       "\" text-anchor=\"end\" font-size=\"11\">" + num(f.y_min) + "</text>\n";
  s += "<text x=\"" + num(f.left - 6) + "\" y=\"" + num(f.py(f.y_max) + 4) +
       "\" text-anchor=\"end\" font-size=\"11\">" + num(f.y_max) + "</text>\n";
  s += "<text x=\"" + num(f.px(f.x_min)) + "\" y=\"" + num(f.py(f.y_min) + 16) +
       "\" text-anchor=\"middle\" font-size=\"11\">" + num(f.x_min) +
       "</text>\n";
  s += "<text x=\"" + num(f.px(f.x_max)) + "\" y=\"" + num(f.py(f.y_min) + 16) +
       "\" text-anchor=\"middle\" font-size=\"11\">" + num(f.x_max) +
       "</text>\n";
  return s;
}

}  // namespace svg_detail

/// Line chart over the sample index (hour, day number, ...).
inline std::string render_line_chart(const std::string& title,
                                     const std::string& x_label,
                                     const std::string& y_label,
                                     const std::vector<SvgSeries>& series) {
  using namespace svg_detail;
  Frame f;
  std::size_t n = 0;
  double y_min = 0.0, y_max = 1e-9;
  for (const auto& s : series) {
    n = std::max(n, s.ys.size());
    for (double v : s.ys) {
      y_min = std::min(y_min, v);
      y_max = std::max(y_max, v);
    }
  }
  if (n < 2) n = 2;
  f.x_max = static_cast<double>(n - 1);
  f.y_min = y_min;
  f.y_max = y_max * 1.05;
  std::string out = open_chart(f, title, x_label, y_label);
  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    if (s.ys.empty()) continue;
    std::string pts;
    for (std::size_t i = 0; i < s.ys.size(); ++i) {
      pts += num(f.px(static_cast<double>(i))) + "," + num(f.py(s.ys[i])) + " ";
    }
    out += "<polyline fill=\"none\" stroke=\"" + std::string(palette(si)) +
           "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
    out += "<text x=\"" + num(f.width - 160) + "\" y=\"" +
           num(40.0 + 16.0 * static_cast<double>(si)) + "\" fill=\"" +
           palette(si) + "\" font-size=\"12\">" + s.label + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

/// Grouped histogram bars; bars of different groups at the same bin overlap
/// with transparency.
inline std::string render_bar_chart(const std::string& title,
                                    const std::string& x_label,
                                    const std::string& y_label,
                                    const std::vector<SvgBar>& bars) {
  using namespace svg_detail;
  Frame f;
  if (bars.empty()) {
    f.x_min = 0;
    f.x_max = 1;
    f.y_max = 1;
  } else {
    f.x_min = bars[0].left;
    f.x_max = bars[0].right;
    f.y_max = 1e-9;
    for (const auto& b : bars) {
      f.x_min = std::min(f.x_min, b.left);
      f.x_max = std::max(f.x_max, b.right);
      f.y_max = std::max(f.y_max, b.value);
    }
    f.y_max *= 1.05;
  }
  std::string out = open_chart(f, title, x_label, y_label);
  std::vector<std::string> groups;
  for (const auto& b : bars) {
    if (std::find(groups.begin(), groups.end(), b.group) == groups.end()) {
      groups.push_back(b.group);
    }
  }
  for (const auto& b : bars) {
    const std::size_t gi = static_cast<std::size_t>(
        std::find(groups.begin(), groups.end(), b.group) - groups.begin());
    const double x0 = f.px(b.left), x1 = f.px(b.right);
    const double y0 = f.py(b.value), y1 = f.py(0.0);
    out += "<rect x=\"" + num(x0) + "\" y=\"" + num(y0) + "\" width=\"" +
           num(std::max(1.0, x1 - x0 - 1.0)) + "\" height=\"" +
           num(std::max(0.0, y1 - y0)) + "\" fill=\"" + palette(gi) +
           "\" fill-opacity=\"0.55\"/>\n";
  }
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    out += "<text x=\"" + num(f.width - 160) + "\" y=\"" +
           num(40.0 + 16.0 * static_cast<double>(gi)) + "\" fill=\"" +
           palette(gi) + "\" font-size=\"12\">" + groups[gi] + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace gridshift
