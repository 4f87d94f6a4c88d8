#pragma once

#include <string>
#include <vector>

namespace mpi1d::svg {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

// Renders a standalone SVG 1.1 line plot.  Hand-rolled on purpose: axes, a
// 1-2-5 tick ladder (decade ticks in log mode), polylines, and a legend —
// no plotting dependency.  Data fidelity lives in the CSVs; the SVG is a view.
std::string render_plot(const std::vector<Series>& series, bool logy, const std::string& title,
                        const std::string& xlabel, const std::string& ylabel);

} // namespace mpi1d::svg
