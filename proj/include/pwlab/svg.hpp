#pragma once

#include <string>
#include <vector>

#include "pwlab/fields.hpp"

namespace pwlab::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  int width = 640;
  int height = 420;
  /// Optional comment embedded in the document (e.g. a timestamp).
  std::string stamp;
};

/// Static SVG line chart.
std::string line_plot(const std::vector<Series>& series, const PlotOptions& opts);

/// Static SVG heatmap of a row-major rows x cols table.
std::string heatmap(const std::vector<double>& values, int rows, int cols,
                    double x_lo, double x_hi, double y_lo, double y_hi,
                    const PlotOptions& opts);

void write(const std::string& path, const std::string& document);

}  // namespace pwlab::svg
