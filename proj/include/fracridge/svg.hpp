#pragma once

#include <string>
#include <vector>

namespace fracridge {

struct ChartSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

/// Static line chart. Each series becomes exactly one <polyline>; non-finite
/// points are skipped.
struct LineChart {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    std::vector<ChartSeries> series;
};

std::string render_svg(const LineChart& chart);

}  // namespace fracridge
