#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sr_analytic.hpp"

namespace tsrlab {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> mean;
  std::vector<double> stderr_;  // band half-width; may be empty for no band
};

struct LinePlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;        // legend follows this order
  std::optional<double> marker_x;        // dashed vertical line (phase switch)
};

// Deterministic fixed-size (960x540) line chart: one colored mean line per
// series with a translucent stderr band. Same input, same bytes.
std::string line_plot_svg(const LinePlotSpec& spec);

// Deterministic heatmap of a spatial field: walls dark, values on a
// perceptually ordered ramp, the target cell outlined.
std::string heatmap_svg(const FieldGrid& field, const std::string& title);

}  // namespace tsrlab
