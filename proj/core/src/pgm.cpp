#include "nighthawk/pgm.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "nighthawk/errors.hpp"

namespace nh::pgm {

namespace {

// Skips whitespace and '#'-to-end-of-line comments, then reads one
// unsigned decimal token.
long read_header_int(std::istream& is, const char* what) {
    int c = is.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = is.get();
        } else if (std::isspace(c)) {
            c = is.get();
        } else {
            break;
        }
    }
    if (c == EOF || !std::isdigit(c)) {
        throw InvalidInputError(std::string("PGM header: expected ") + what);
    }
    long value = 0;
    while (c != EOF && std::isdigit(c)) {
        value = value * 10 + (c - '0');
        if (value > 1'000'000'000L) throw InvalidInputError("PGM header: value out of range");
        c = is.get();
    }
    if (c != EOF) is.unget();
    return value;
}

} // namespace

std::uint8_t quantize(double v) {
    if (v <= 0.0) return 0;
    if (v >= 1.0) return 255;
    return static_cast<std::uint8_t>(std::lround(v * 255.0));
}

double dequantize(std::uint8_t v) {
    return static_cast<double>(v) / 255.0;
}

void write(std::ostream& os, const Image& img) {
    detail::validate_dims(img.width, img.height, img.data.size());
    os << "P5\n" << img.width << " " << img.height << "\n255\n";
    std::string row(static_cast<std::size_t>(img.width), '\0');
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            row[static_cast<std::size_t>(x)] = static_cast<char>(quantize(img.at(x, y)));
        }
        os.write(row.data(), static_cast<std::streamsize>(row.size()));
    }
    if (!os) throw Error("PGM write failed");
}

void write_file(const std::filesystem::path& path, const Image& img) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot open for writing: " + path.string());
    write(os, img);
}

Image read(std::istream& is) {
    char m0 = 0, m1 = 0;
    is.get(m0);
    is.get(m1);
    if (!is || m0 != 'P' || m1 != '5') {
        throw InvalidInputError("not a binary PGM (P5) stream");
    }
    const long w = read_header_int(is, "width");
    const long h = read_header_int(is, "height");
    const long maxval = read_header_int(is, "maxval");
    if (maxval != 255) {
        throw InvalidInputError("unsupported PGM maxval " + std::to_string(maxval) +
                                " (this pipeline quantizes to maxval 255)");
    }
    // Exactly one whitespace byte separates the header from the raster.
    const int sep = is.get();
    if (sep == EOF || !std::isspace(sep)) {
        throw InvalidInputError("PGM header: missing raster separator");
    }
    if (w < 3 || h < 3) {
        throw InvalidInputError("PGM raster smaller than 3x3");
    }
    std::vector<double> samples(static_cast<std::size_t>(w) * static_cast<std::size_t>(h));
    std::string row(static_cast<std::size_t>(w), '\0');
    for (long y = 0; y < h; ++y) {
        is.read(row.data(), static_cast<std::streamsize>(row.size()));
        if (is.gcount() != static_cast<std::streamsize>(row.size())) {
            throw InvalidInputError("PGM raster truncated");
        }
        for (long x = 0; x < w; ++x) {
            samples[static_cast<std::size_t>(y) * w + x] =
                dequantize(static_cast<std::uint8_t>(row[static_cast<std::size_t>(x)]));
        }
    }
    return Image::from_samples(static_cast<int>(w), static_cast<int>(h), std::move(samples));
}

Image read_file(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error("cannot open for reading: " + path.string());
    return read(is);
}

} // namespace nh::pgm
