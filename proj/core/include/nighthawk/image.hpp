#pragma once

#include <vector>

namespace nh {

/// Grayscale raster. Luminance samples are doubles in [0,1], row-major;
/// 8-bit quantization happens only at file I/O boundaries.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<double> data;

    /// Builds a constant image. Throws InvalidInputError if either
    /// dimension is < 3.
    static Image filled(int width, int height, double value);

    /// Adopts row-major samples; validates dimensions, length and range.
    static Image from_samples(int width, int height, std::vector<double> samples);

    double at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
    double& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    std::size_t pixel_count() const { return data.size(); }
};

/// Per-pixel gradient magnitude, normalized to [0,1]. The 1-pixel border
/// ring is exactly 0 (no padding).
struct GradField {
    int width = 0;
    int height = 0;
    std::vector<double> mag;

    double at(int x, int y) const { return mag[static_cast<std::size_t>(y) * width + x]; }
};

/// 3x3 Sobel magnitude, min(1, sqrt(gx^2+gy^2)/4). The divisor 4 is the
/// maximum Sobel response on unit-range input, so an ideal step maps to 1.
GradField gradient_magnitude(const Image& img);

/// Arithmetic mean of all samples.
double mean_intensity(const Image& img);

/// Rec. 601 luma from linear RGB in [0,1]; the ingestion rule for any
/// color source feeding this pipeline.
double luma601(double r, double g, double b);

/// Sliding-window sums of a row-major field: out[x,y] holds the sum of the
/// win x win window centered at (x,y) where the window fits entirely inside
/// the field, and 0 elsewhere. win must be odd.
std::vector<double> box_sum(const std::vector<double>& field, int width, int height, int win);

/// Allocation-free variant for hot paths; rowsum is scratch space.
void box_sum_into(const std::vector<double>& field, int width, int height, int win,
                  std::vector<double>& out, std::vector<double>& rowsum);

namespace detail {
/// Throws InvalidInputError unless both dimensions are >= 3 and the sample
/// vector matches width*height.
void validate_dims(int width, int height, std::size_t samples);
} // namespace detail

} // namespace nh
