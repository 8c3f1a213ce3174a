#include "nighthawk/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "nighthawk/errors.hpp"

namespace nh::svg {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

} // namespace

std::string line_chart(const std::string& title, const std::string& x_label,
                       const std::string& y_label, const std::vector<Series>& series,
                       int width, int height) {
    double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
    double y_min = x_min, y_max = -x_min;
    for (const Series& s : series) {
        for (std::size_t i = 0; i < std::min(s.xs.size(), s.ys.size()); ++i) {
            if (!std::isfinite(s.xs[i]) || !std::isfinite(s.ys[i])) continue;
            x_min = std::min(x_min, s.xs[i]);
            x_max = std::max(x_max, s.xs[i]);
            y_min = std::min(y_min, s.ys[i]);
            y_max = std::max(y_max, s.ys[i]);
        }
    }
    if (!(x_min <= x_max)) throw InvalidInputError("line_chart: no finite points");
    if (x_min == x_max) { x_min -= 0.5; x_max += 0.5; }
    if (y_min == y_max) { y_min -= 0.5; y_max += 0.5; }

    const double ml = 70, mr = 20, mt = 40, mb = 50;
    const double pw = width - ml - mr, ph = height - mt - mb;
    auto sx = [&](double x) { return ml + (x - x_min) / (x_max - x_min) * pw; };
    auto sy = [&](double y) { return mt + ph - (y - y_min) / (y_max - y_min) * ph; };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
       << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" "
          "font-family=\"sans-serif\" font-size=\"15\">" << escape(title) << "</text>\n";

    // Axes and ticks.
    os << "<g stroke=\"#444\" stroke-width=\"1\" fill=\"none\">"
       << "<path d=\"M" << fmt(ml) << " " << fmt(mt) << " V" << fmt(mt + ph) << " H"
       << fmt(ml + pw) << "\"/></g>\n";
    os << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
    for (int i = 0; i <= 5; ++i) {
        const double fx = x_min + (x_max - x_min) * i / 5.0;
        const double fy = y_min + (y_max - y_min) * i / 5.0;
        os << "<line x1=\"" << fmt(sx(fx)) << "\" y1=\"" << fmt(mt + ph) << "\" x2=\""
           << fmt(sx(fx)) << "\" y2=\"" << fmt(mt + ph + 4) << "\" stroke=\"#444\"/>"
           << "<text x=\"" << fmt(sx(fx)) << "\" y=\"" << fmt(mt + ph + 16)
           << "\" text-anchor=\"middle\">" << fmt(fx) << "</text>\n";
        os << "<line x1=\"" << fmt(ml - 4) << "\" y1=\"" << fmt(sy(fy)) << "\" x2=\"" << fmt(ml)
           << "\" y2=\"" << fmt(sy(fy)) << "\" stroke=\"#444\"/>"
           << "<text x=\"" << fmt(ml - 7) << "\" y=\"" << fmt(sy(fy) + 4)
           << "\" text-anchor=\"end\">" << fmt(fy) << "</text>\n";
    }
    os << "<text x=\"" << fmt(ml + pw / 2) << "\" y=\"" << fmt(mt + ph + 34)
       << "\" text-anchor=\"middle\">" << escape(x_label) << "</text>\n";
    os << "<text x=\"14\" y=\"" << fmt(mt + ph / 2)
       << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 " << fmt(mt + ph / 2) << ")\">"
       << escape(y_label) << "</text>\n</g>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const Series& s = series[si];
        const char* color = kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        bool open = false;
        for (std::size_t i = 0; i < std::min(s.xs.size(), s.ys.size()); ++i) {
            if (!std::isfinite(s.xs[i]) || !std::isfinite(s.ys[i])) {
                if (open) {
                    os << "\"/>\n<polyline fill=\"none\" stroke=\"" << color
                       << "\" stroke-width=\"1.5\" points=\"";
                    open = false;
                }
                continue;
            }
            os << fmt(sx(s.xs[i])) << "," << fmt(sy(s.ys[i])) << " ";
            open = true;
        }
        os << "\"/>\n";
        // Legend swatch.
        const double ly = mt + 14 + 16 * static_cast<double>(si);
        os << "<rect x=\"" << fmt(ml + pw - 150) << "\" y=\"" << fmt(ly - 9)
           << "\" width=\"12\" height=\"4\" fill=\"" << color << "\"/>"
           << "<text x=\"" << fmt(ml + pw - 132) << "\" y=\"" << fmt(ly)
           << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape(s.label)
           << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot open for writing: " + path.string());
    os << content;
    if (!os) throw Error("SVG write failed: " + path.string());
}

} // namespace nh::svg
