#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace magnoblock {

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<std::optional<double>> y; // gaps where empty
};

struct PlotLabels {
    std::string title;
    std::string x_label;
    std::string y_label;
};

/// Static line plot; a view of CSV data, never the source of truth.
void write_line_plot_svg(std::ostream& os, const PlotLabels& labels,
                         const std::vector<PlotSeries>& series);

/// Heatmap of values[row][col] with rows along y and columns along x.
void write_heatmap_svg(std::ostream& os, const PlotLabels& labels, const std::vector<double>& x,
                       const std::vector<double>& y,
                       const std::vector<std::vector<std::optional<double>>>& values);

} // namespace magnoblock
