#include "nighthawk/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "nighthawk/errors.hpp"

namespace nh::csv {

std::string number(double v) {
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        double parsed = 0.0;
        std::sscanf(buf, "%lf", &parsed);
        if (parsed == v) break;
    }
    return buf;
}

std::size_t Table::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    throw InvalidInputError("CSV has no column named '" + name + "'");
}

std::vector<double> Table::numeric_column(const std::string& name) const {
    const std::size_t idx = column(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& row : rows) {
        if (idx >= row.size()) throw InvalidInputError("CSV row shorter than header");
        try {
            out.push_back(std::stod(row[idx]));
        } catch (const std::exception&) {
            throw InvalidInputError("non-numeric cell '" + row[idx] + "' in column " + name);
        }
    }
    return out;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cell);
            cell.clear();
        } else if (c != '\r') {
            cell.push_back(c);
        }
    }
    cells.push_back(cell);
    return cells;
}

} // namespace

Table parse(const std::string& text) {
    Table table;
    std::istringstream is(text);
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (first) {
            table.header = split_line(line);
            first = false;
        } else {
            table.rows.push_back(split_line(line));
        }
    }
    if (first) throw InvalidInputError("empty CSV");
    return table;
}

Table read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error("cannot open CSV: " + path);
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse(buf.str());
}

} // namespace nh::csv
