#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace nh::svg {

struct Series {
    std::string label;
    std::vector<double> xs;
    std::vector<double> ys;
};

/// Self-contained SVG line chart (inline styling, no external assets).
/// Non-finite samples break the polyline. Throws InvalidInputError if no
/// series has any finite point.
std::string line_chart(const std::string& title, const std::string& x_label,
                       const std::string& y_label, const std::vector<Series>& series,
                       int width = 860, int height = 480);

void write_file(const std::filesystem::path& path, const std::string& content);

} // namespace nh::svg
