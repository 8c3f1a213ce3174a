#include "nighthawk/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nighthawk/errors.hpp"

namespace nh {

namespace detail {

void validate_dims(int width, int height, std::size_t samples) {
    if (width < 3 || height < 3) {
        throw InvalidInputError("image dimensions must be at least 3x3, got " +
                                std::to_string(width) + "x" + std::to_string(height));
    }
    if (samples != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
        throw InvalidInputError("sample count does not match width*height");
    }
}

} // namespace detail

Image Image::filled(int width, int height, double value) {
    detail::validate_dims(width, height, static_cast<std::size_t>(width) * height);
    if (value < 0.0 || value > 1.0) {
        throw InvalidInputError("luminance outside [0,1]");
    }
    Image img;
    img.width = width;
    img.height = height;
    img.data.assign(static_cast<std::size_t>(width) * height, value);
    return img;
}

Image Image::from_samples(int width, int height, std::vector<double> samples) {
    detail::validate_dims(width, height, samples.size());
    for (double v : samples) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw InvalidInputError("luminance sample outside [0,1]");
        }
    }
    Image img;
    img.width = width;
    img.height = height;
    img.data = std::move(samples);
    return img;
}

GradField gradient_magnitude(const Image& img) {
    detail::validate_dims(img.width, img.height, img.data.size());
    GradField field;
    field.width = img.width;
    field.height = img.height;
    field.mag.assign(img.data.size(), 0.0);

    const int w = img.width;
    const int h = img.height;
    for (int y = 1; y < h - 1; ++y) {
        for (int x = 1; x < w - 1; ++x) {
            const double a = img.at(x - 1, y - 1), b = img.at(x, y - 1), c = img.at(x + 1, y - 1);
            const double d = img.at(x - 1, y), f = img.at(x + 1, y);
            const double g = img.at(x - 1, y + 1), hh = img.at(x, y + 1), i = img.at(x + 1, y + 1);
            const double gx = (c + 2.0 * f + i) - (a + 2.0 * d + g);
            const double gy = (g + 2.0 * hh + i) - (a + 2.0 * b + c);
            field.mag[static_cast<std::size_t>(y) * w + x] =
                std::min(1.0, std::sqrt(gx * gx + gy * gy) / 4.0);
        }
    }
    return field;
}

double mean_intensity(const Image& img) {
    detail::validate_dims(img.width, img.height, img.data.size());
    double sum = 0.0;
    for (double v : img.data) sum += v;
    return sum / static_cast<double>(img.data.size());
}

double luma601(double r, double g, double b) {
    return 0.299 * r + 0.587 * g + 0.114 * b;
}

void box_sum_into(const std::vector<double>& field, int width, int height, int win,
                  std::vector<double>& out, std::vector<double>& rowsum) {
    if (win < 1 || win % 2 == 0) {
        throw InvalidInputError("box_sum window must be odd and positive");
    }
    out.assign(field.size(), 0.0);
    if (width < win || height < win) return;
    const int r = win / 2;

    // Horizontal pass: row sums over the window where it fits.
    rowsum.assign(field.size(), 0.0);
    for (int y = 0; y < height; ++y) {
        const double* src = field.data() + static_cast<std::size_t>(y) * width;
        double* dst = rowsum.data() + static_cast<std::size_t>(y) * width;
        double acc = 0.0;
        for (int x = 0; x < win; ++x) acc += src[x];
        dst[r] = acc;
        for (int x = r + 1; x < width - r; ++x) {
            acc += src[x + r] - src[x - r - 1];
            dst[x] = acc;
        }
    }
    // Vertical pass over the row sums.
    for (int x = r; x < width - r; ++x) {
        double acc = 0.0;
        for (int y = 0; y < win; ++y) acc += rowsum[static_cast<std::size_t>(y) * width + x];
        out[static_cast<std::size_t>(r) * width + x] = acc;
        for (int y = r + 1; y < height - r; ++y) {
            acc += rowsum[static_cast<std::size_t>(y + r) * width + x] -
                   rowsum[static_cast<std::size_t>(y - r - 1) * width + x];
            out[static_cast<std::size_t>(y) * width + x] = acc;
        }
    }
}

std::vector<double> box_sum(const std::vector<double>& field, int width, int height, int win) {
    std::vector<double> out, rowsum;
    box_sum_into(field, width, height, win, out, rowsum);
    return out;
}

} // namespace nh
