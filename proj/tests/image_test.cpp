#include <doctest.h>

#include <algorithm>
#include <random>

#include "nighthawk/errors.hpp"
#include "nighthawk/image.hpp"
#include "support/test_images.hpp"

using nh::GradField;
using nh::Image;

TEST_CASE("gradient of a constant image is zero everywhere") {
    const Image img = Image::filled(7, 5, 0.5);
    const GradField field = nh::gradient_magnitude(img);
    for (double m : field.mag) CHECK(m == 0.0);
}

TEST_CASE("3x3 vertical step has unit center magnitude") {
    // Columns 0, 0, 1: hand-applied Sobel gives gx = 4, gy = 0 at the center.
    const Image img = Image::from_samples(3, 3, {0, 0, 1, 0, 0, 1, 0, 0, 1});
    const GradField field = nh::gradient_magnitude(img);
    CHECK(field.at(1, 1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("5x5 column ramp has interior magnitude 0.2") {
    // Per-column increment 0.1: gx = 0.8 everywhere interior, gy = 0.
    const Image img = testimg::column_ramp(5, 5, 0.0, 0.1);
    const GradField field = nh::gradient_magnitude(img);
    for (int y = 1; y < 4; ++y) {
        for (int x = 1; x < 4; ++x) {
            CHECK(field.at(x, y) == doctest::Approx(0.2).epsilon(1e-12));
        }
    }
}

TEST_CASE("gradient border ring is exactly zero") {
    const Image img = testimg::uniform_random(9, 7, 7);
    const GradField field = nh::gradient_magnitude(img);
    for (int x = 0; x < img.width; ++x) {
        CHECK(field.at(x, 0) == 0.0);
        CHECK(field.at(x, img.height - 1) == 0.0);
    }
    for (int y = 0; y < img.height; ++y) {
        CHECK(field.at(0, y) == 0.0);
        CHECK(field.at(img.width - 1, y) == 0.0);
    }
}

TEST_CASE("gradient magnitude is clamped to 1") {
    const Image img = testimg::stripe_bars(10, 8);
    const GradField field = nh::gradient_magnitude(img);
    for (double m : field.mag) {
        CHECK(m >= 0.0);
        CHECK(m <= 1.0);
    }
}

TEST_CASE("image construction rejects sub-3x3 dimensions and out-of-range samples") {
    CHECK_THROWS_AS(Image::filled(2, 5, 0.5), nh::InvalidInputError);
    CHECK_THROWS_AS(Image::filled(5, 2, 0.5), nh::InvalidInputError);
    CHECK_THROWS_AS(Image::from_samples(3, 3, std::vector<double>(8, 0.0)),
                    nh::InvalidInputError);
    CHECK_THROWS_AS(Image::from_samples(3, 3, std::vector<double>(9, 1.5)),
                    nh::InvalidInputError);
    Image raw;
    raw.width = 2;
    raw.height = 2;
    raw.data = {0, 0, 0, 0};
    CHECK_THROWS_AS(nh::gradient_magnitude(raw), nh::InvalidInputError);
    CHECK_THROWS_AS(nh::mean_intensity(raw), nh::InvalidInputError);
}

TEST_CASE("interior gradients are translation-equivariant") {
    const Image img = testimg::uniform_random(12, 10, 21);
    // Content shifted right by one pixel; column 0 is arbitrary filler.
    Image shifted = Image::filled(12, 10, 0.0);
    for (int y = 0; y < 10; ++y) {
        for (int x = 1; x < 12; ++x) shifted.at(x, y) = img.at(x - 1, y);
    }
    const GradField a = nh::gradient_magnitude(img);
    const GradField b = nh::gradient_magnitude(shifted);
    for (int y = 1; y < 9; ++y) {
        for (int x = 1; x < 10; ++x) {
            CHECK(b.at(x + 1, y) == a.at(x, y));
        }
    }
}

TEST_CASE("interior gradients scale linearly below the clamp") {
    const Image img = testimg::uniform_random(10, 9, 33);
    Image quarter = img;
    for (double& v : quarter.data) v *= 0.25;
    const GradField a = nh::gradient_magnitude(img);
    const GradField b = nh::gradient_magnitude(quarter);
    for (int y = 1; y < 8; ++y) {
        for (int x = 1; x < 9; ++x) {
            if (a.at(x, y) < 1.0) {
                CHECK(b.at(x, y) == doctest::Approx(0.25 * a.at(x, y)).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("mean intensity basics") {
    CHECK(nh::mean_intensity(Image::filled(4, 4, 0.0)) == 0.0);
    CHECK(nh::mean_intensity(Image::filled(4, 4, 1.0)) == 1.0);
    std::vector<double> half(16, 0.0);
    std::fill(half.begin() + 8, half.end(), 1.0);
    CHECK(nh::mean_intensity(Image::from_samples(4, 4, half)) == 0.5);
}

TEST_CASE("mean intensity is permutation invariant") {
    Image img = testimg::uniform_random(8, 6, 99);
    const double before = nh::mean_intensity(img);
    std::mt19937_64 gen(5);
    std::shuffle(img.data.begin(), img.data.end(), gen);
    CHECK(nh::mean_intensity(img) == doctest::Approx(before).epsilon(1e-12));
}

TEST_CASE("Rec. 601 luma weights") {
    CHECK(nh::luma601(1, 0, 0) == doctest::Approx(0.299).epsilon(1e-15));
    CHECK(nh::luma601(0, 1, 0) == doctest::Approx(0.587).epsilon(1e-15));
    CHECK(nh::luma601(0, 0, 1) == doctest::Approx(0.114).epsilon(1e-15));
    CHECK(nh::luma601(1, 1, 1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("box_sum matches a naive window sum") {
    const Image img = testimg::uniform_random(11, 9, 123);
    for (int win : {3, 5}) {
        const auto fast = nh::box_sum(img.data, img.width, img.height, win);
        const int r = win / 2;
        for (int y = 0; y < img.height; ++y) {
            for (int x = 0; x < img.width; ++x) {
                double expect = 0.0;
                if (x >= r && x < img.width - r && y >= r && y < img.height - r) {
                    for (int dy = -r; dy <= r; ++dy) {
                        for (int dx = -r; dx <= r; ++dx) expect += img.at(x + dx, y + dy);
                    }
                }
                CHECK(fast[static_cast<std::size_t>(y) * img.width + x] ==
                      doctest::Approx(expect).epsilon(1e-12));
            }
        }
    }
    CHECK_THROWS_AS(nh::box_sum(img.data, img.width, img.height, 4), nh::InvalidInputError);
}
