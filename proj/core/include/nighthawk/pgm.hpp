#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "nighthawk/image.hpp"

namespace nh::pgm {

/// round(v*255) with v clamped to [0,1].
std::uint8_t quantize(double v);

/// v/255.
double dequantize(std::uint8_t v);

/// Writes binary PGM (P5, maxval 255): "P5\n<w> <h>\n255\n" + raw bytes.
void write(std::ostream& os, const Image& img);
void write_file(const std::filesystem::path& path, const Image& img);

/// Reads binary PGM. Accepts arbitrary header whitespace and '#' comments
/// per the format; requires maxval 255 (the pipeline's quantization step).
Image read(std::istream& is);
Image read_file(const std::filesystem::path& path);

} // namespace nh::pgm
