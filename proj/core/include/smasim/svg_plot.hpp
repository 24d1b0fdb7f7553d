#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace smasim {

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> yerr;  // optional symmetric error bars
    std::string color = "#1f77b4";
    bool markers = false;
};

struct PlotSpec {
    std::string title;
    std::string xlabel;
    std::string ylabel;
    std::string comment;  // provenance, embedded as an XML comment
    bool log_y = false;
    int width = 640;
    int height = 420;
};

/// Dependency-free static SVG line plot with ticks, legend and error bars.
void write_svg_plot(const std::filesystem::path& path, const PlotSpec& spec,
                    const std::vector<PlotSeries>& series);

}
