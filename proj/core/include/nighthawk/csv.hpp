#pragma once

#include <string>
#include <vector>

namespace nh::csv {

/// Shortest round-trippable decimal form of a double ("%.17g" trimmed via
/// precision search). Stable for byte-identical output requirements.
std::string number(double v);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of a named column; throws InvalidInputError if absent.
    std::size_t column(const std::string& name) const;
    /// Column parsed as doubles; non-numeric cells throw.
    std::vector<double> numeric_column(const std::string& name) const;
};

/// Parses simple comma-separated text (no quoting; none of this project's
/// emitters quote). First line is the header.
Table parse(const std::string& text);
Table read_file(const std::string& path);

} // namespace nh::csv
