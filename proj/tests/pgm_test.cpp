#include <doctest.h>

#include <sstream>

#include "nighthawk/errors.hpp"
#include "nighthawk/pgm.hpp"
#include "support/test_images.hpp"

using nh::Image;

TEST_CASE("quantization endpoints and rounding") {
    CHECK(nh::pgm::quantize(0.0) == 0);
    CHECK(nh::pgm::quantize(1.0) == 255);
    CHECK(nh::pgm::quantize(0.5) == 128); // round(127.5)
    CHECK(nh::pgm::quantize(-0.2) == 0);
    CHECK(nh::pgm::quantize(1.7) == 255);
    CHECK(nh::pgm::dequantize(255) == 1.0);
    CHECK(nh::pgm::dequantize(0) == 0.0);
}

TEST_CASE("writer emits exact P5 bytes") {
    const Image img = Image::from_samples(3, 3, {0, 0.5, 1, 0, 0, 0, 1, 1, 1});
    std::ostringstream os;
    nh::pgm::write(os, img);
    const std::string bytes = os.str();
    const std::string header = "P5\n3 3\n255\n";
    REQUIRE(bytes.size() == header.size() + 9);
    CHECK(bytes.substr(0, header.size()) == header);
    const unsigned char expect[9] = {0, 128, 255, 0, 0, 0, 255, 255, 255};
    for (int i = 0; i < 9; ++i) {
        CHECK(static_cast<unsigned char>(bytes[header.size() + i]) == expect[i]);
    }
}

TEST_CASE("write/read round-trips through quantization") {
    const Image img = testimg::uniform_random(9, 7, 404);
    std::ostringstream os;
    nh::pgm::write(os, img);
    std::istringstream is(os.str());
    const Image back = nh::pgm::read(is);
    REQUIRE(back.width == img.width);
    REQUIRE(back.height == img.height);
    for (std::size_t i = 0; i < img.data.size(); ++i) {
        CHECK(back.data[i] == nh::pgm::dequantize(nh::pgm::quantize(img.data[i])));
    }
}

TEST_CASE("reader accepts header comments and odd whitespace") {
    std::string text = "P5 # magic\n# a comment line\n  3\t3 # dims\n 255\n";
    text.append(9, '\x40');
    std::istringstream is(text);
    const Image img = nh::pgm::read(is);
    CHECK(img.width == 3);
    CHECK(img.height == 3);
    CHECK(img.at(0, 0) == doctest::Approx(64.0 / 255.0));
}

TEST_CASE("reader rejects malformed input") {
    auto read_str = [](std::string s) {
        std::istringstream is(s);
        return nh::pgm::read(is);
    };
    CHECK_THROWS_AS(read_str("P6\n3 3\n255\n123456789"), nh::InvalidInputError);
    CHECK_THROWS_AS(read_str("P5\n3 3\n128\n123456789"), nh::InvalidInputError);
    CHECK_THROWS_AS(read_str("P5\n3 3\n255\n1234"), nh::InvalidInputError); // truncated
    CHECK_THROWS_AS(read_str("P5\n2 3\n255\n123456"), nh::InvalidInputError);
    CHECK_THROWS_AS(read_str("P5\n3 x\n255\n123456789"), nh::InvalidInputError);
}
