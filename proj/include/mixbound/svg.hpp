#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "mixbound/io.hpp"

namespace mixbound {

struct SvgSeries {
  std::string label;
  std::string color;
  std::vector<double> x;
  std::vector<double> y;
};

// Minimal log-log line chart, enough for gap/bound-vs-m pictures.
inline std::string svg_loglog_plot(const std::vector<SvgSeries>& series,
                                   const std::string& title, const std::string& x_label,
                                   const std::string& y_label) {
  const double width = 640, height = 480, margin = 60;
  double min_x = 0, max_x = 0, min_y = 0, max_y = 0;
  bool first = true;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!(s.x[i] > 0.0) || !(s.y[i] > 0.0) || !std::isfinite(s.y[i])) continue;
      const double lx = std::log10(s.x[i]), ly = std::log10(s.y[i]);
      if (first) {
        min_x = max_x = lx;
        min_y = max_y = ly;
        first = false;
      } else {
        min_x = std::min(min_x, lx);
        max_x = std::max(max_x, lx);
        min_y = std::min(min_y, ly);
        max_y = std::max(max_y, ly);
      }
    }
  }
  if (first) {
    min_x = min_y = 0;
    max_x = max_y = 1;
  }
  if (max_x - min_x < 1e-9) max_x = min_x + 1;
  if (max_y - min_y < 1e-9) max_y = min_y + 1;

  auto px = [&](double lx) { return margin + (lx - min_x) / (max_x - min_x) * (width - 2 * margin); };
  auto py = [&](double ly) { return height - margin - (ly - min_y) / (max_y - min_y) * (height - 2 * margin); };

  std::string svg =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width) + "\" height=\"" +
      fmt(height) + "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + fmt(width / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" +
         title + "</text>\n";
  // axes
  svg += "<line x1=\"" + fmt(margin) + "\" y1=\"" + fmt(height - margin) + "\" x2=\"" +
         fmt(width - margin) + "\" y2=\"" + fmt(height - margin) +
         "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + fmt(margin) + "\" y1=\"" + fmt(margin) + "\" x2=\"" + fmt(margin) +
         "\" y2=\"" + fmt(height - margin) + "\" stroke=\"black\"/>\n";
  svg += "<text x=\"" + fmt(width / 2) + "\" y=\"" + fmt(height - 16) +
         "\" text-anchor=\"middle\" font-size=\"12\">" + x_label + " (log10)</text>\n";
  svg += "<text x=\"16\" y=\"" + fmt(height / 2) +
         "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 " +
         fmt(height / 2) + ")\">" + y_label + " (log10)</text>\n";

  double legend_y = margin;
  for (const auto& s : series) {
    std::string path;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!(s.x[i] > 0.0) || !(s.y[i] > 0.0) || !std::isfinite(s.y[i])) continue;
      path += (path.empty() ? "M" : " L") + std::string(" ") + fmt(px(std::log10(s.x[i]))) +
              " " + fmt(py(std::log10(s.y[i])));
    }
    if (!path.empty())
      svg += "<path d=\"" + path + "\" fill=\"none\" stroke=\"" + s.color +
             "\" stroke-width=\"2\"/>\n";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!(s.x[i] > 0.0) || !(s.y[i] > 0.0) || !std::isfinite(s.y[i])) continue;
      svg += "<circle cx=\"" + fmt(px(std::log10(s.x[i]))) + "\" cy=\"" +
             fmt(py(std::log10(s.y[i]))) + "\" r=\"3\" fill=\"" + s.color + "\"/>\n";
    }
    svg += "<text x=\"" + fmt(width - margin - 150) + "\" y=\"" + fmt(legend_y) +
           "\" font-size=\"12\" fill=\"" + s.color + "\">" + s.label + "</text>\n";
    legend_y += 16;
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace mixbound
