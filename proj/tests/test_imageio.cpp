#include <doctest.h>

#include <array>
#include <cmath>

#include "pterrace/error.hpp"
#include "pterrace/imageio.hpp"

using namespace pterrace;

namespace {

GrayImage uniform_image(std::size_t w, std::size_t h, unsigned value, unsigned maxval = 255) {
    return GrayImage{w, h, maxval, std::vector<unsigned>(w * h, value)};
}

std::string error_text(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("P2: 2x2 with one bright pixel") {
    const auto img = parse_pgm("P2\n# tiny\n2 2\n255\n0 0\n0 255\n");
    CHECK(img.width == 2);
    CHECK(img.height == 2);
    CHECK(img.maxval == 255);
    CHECK(img.pixels == std::vector<unsigned>{0, 0, 0, 255});
    CHECK(img.at(1, 1) == 255);
}

TEST_CASE("P5 and P2 encode the same image") {
    const auto img = synthetic_honeycomb(3);
    CHECK(parse_pgm(to_pgm(img, true)) == img);
    CHECK(parse_pgm(to_pgm(img, false)) == img);
    const GrayImage wide{3, 2, 1000, {0, 999, 1000, 256, 1, 512}};
    CHECK(parse_pgm(to_pgm(wide, true)) == wide);
    CHECK(parse_pgm(to_pgm(wide, false)) == wide);
}

TEST_CASE("truncated and malformed PGM") {
    const auto msg = error_text([] { parse_pgm(std::string("P5\n4 4\n255\n") + std::string(10, 'x')); });
    CHECK(msg.find("truncated") != std::string::npos);
    CHECK(msg.find("offset") != std::string::npos);
    CHECK(error_text([] { parse_pgm("P2\n2 2\n255\n0 0 0\n"); }).find("truncated") != std::string::npos);
    CHECK(error_text([] { parse_pgm("P6\n2 2\n255\n"); }).find("malformed") != std::string::npos);
    CHECK(error_text([] { parse_pgm("P2\n0 2\n255\n"); }).find("malformed") != std::string::npos);
    CHECK_THROWS_AS(load_pgm("/nonexistent/image.pgm"), Error);
}

TEST_CASE("single dark pixel receives every sample") {
    auto img = uniform_image(5, 4, 255);
    img.pixels[1 * 5 + 3] = 0;  // col 3, row 1
    const auto c = sample_intensity(img, 100, true, 9);
    REQUIRE(c.size() == 100);
    for (std::size_t i = 0; i < c.size(); ++i) {
        const auto p = c.point(i);
        CHECK(p[0] >= 3.0);
        CHECK(p[0] <= 4.0);
        CHECK(p[1] >= 2.0);  // height - 1 - row
        CHECK(p[1] <= 3.0);
    }
}

TEST_CASE("darkness=false favours the one white pixel") {
    auto img = uniform_image(4, 4, 0);
    img.pixels[0] = 255;  // col 0, row 0: point square [0,1] x [3,4]
    const auto c = sample_intensity(img, 50, false, 2);
    for (std::size_t i = 0; i < c.size(); ++i) {
        CHECK(c.point(i)[0] <= 1.0);
        CHECK(c.point(i)[1] >= 3.0);
    }
}

TEST_CASE("uniform gray: quadrant counts pass chi-square") {
    const auto img = uniform_image(40, 40, 128);
    const auto c = sample_intensity(img, 10000, true, 5);
    std::array<double, 4> counts{};
    for (std::size_t i = 0; i < c.size(); ++i) {
        const auto p = c.point(i);
        CHECK(p[0] >= 0.0);
        CHECK(p[0] <= 40.0);
        CHECK(p[1] >= 0.0);
        CHECK(p[1] <= 40.0);
        counts[(p[0] >= 20.0) + 2 * (p[1] >= 20.0)] += 1.0;
    }
    double chi2 = 0.0;
    for (double o : counts) chi2 += (o - 2500.0) * (o - 2500.0) / 2500.0;
    CHECK(chi2 < 16.266);  // 0.999 quantile, 3 degrees of freedom
}

TEST_CASE("pixel selection frequencies converge to the weights") {
    const GrayImage img{2, 2, 10, {0, 5, 8, 10}};  // weights 10, 5, 2, 0
    const std::size_t n = 1000000;
    const auto c = sample_intensity(img, n, true, 77);
    std::array<double, 4> freq{};
    for (std::size_t i = 0; i < n; ++i) {
        const auto p = c.point(i);
        const std::size_t col = static_cast<std::size_t>(p[0]);
        const std::size_t row = 1 - static_cast<std::size_t>(p[1]);
        freq[row * 2 + col] += 1.0 / static_cast<double>(n);
    }
    const std::array<double, 4> want = {10.0 / 17, 5.0 / 17, 2.0 / 17, 0.0};
    double tv = 0.0;
    for (std::size_t k = 0; k < 4; ++k) tv += 0.5 * std::abs(freq[k] - want[k]);
    CHECK(tv < 0.02);
    CHECK(freq[3] == 0.0);
}

TEST_CASE("all-zero weights are a data error") {
    CHECK_THROWS_AS(sample_intensity(uniform_image(3, 3, 255), 10, true, 1), Error);
    CHECK_THROWS_AS(sample_intensity(uniform_image(3, 3, 0), 10, false, 1), Error);
}

TEST_CASE("boundary samples lie on the perimeter") {
    const auto img = uniform_image(30, 10, 0);
    const auto four = sample_boundary(img, 4, 123);
    CHECK(four.size() == 4);
    const auto c = sample_boundary(img, 4000, 6);
    std::array<double, 4> side{};  // bottom, top, left, right
    for (std::size_t i = 0; i < c.size(); ++i) {
        const auto p = c.point(i);
        const double dx = std::min(std::abs(p[0]), std::abs(p[0] - 30.0));
        const double dy = std::min(std::abs(p[1]), std::abs(p[1] - 10.0));
        CHECK(std::min(dx, dy) <= 1e-12);
        CHECK(p[0] >= 0.0);
        CHECK(p[0] <= 30.0);
        CHECK(p[1] >= 0.0);
        CHECK(p[1] <= 10.0);
        if (dy <= 1e-12) side[std::abs(p[1]) <= 1e-12 ? 0 : 1] += 1;
        else side[std::abs(p[0]) <= 1e-12 ? 2 : 3] += 1;
    }
    const std::array<double, 4> prob = {30.0 / 80, 30.0 / 80, 10.0 / 80, 10.0 / 80};
    for (std::size_t s = 0; s < 4; ++s) {
        const double mean = 4000 * prob[s];
        const double se = std::sqrt(4000 * prob[s] * (1 - prob[s]));
        CHECK(std::abs(side[s] - mean) < 3 * se);
    }
    CHECK(sample_boundary(img, 4000, 6) == c);
}

TEST_CASE("sampling is deterministic per seed") {
    const auto img = synthetic_honeycomb(1);
    CHECK(sample_intensity(img, 500, true, 4) == sample_intensity(img, 500, true, 4));
    CHECK_FALSE(sample_intensity(img, 500, true, 4) == sample_intensity(img, 500, true, 5));
}

TEST_CASE("synthetic honeycomb") {
    const auto img = synthetic_honeycomb(1);
    CHECK(img.width == 330);
    CHECK(img.height == 330);
    CHECK(img == synthetic_honeycomb(1));
    std::size_t dark = 0;
    for (unsigned p : img.pixels) dark += p < 128;
    // Walls cover a minority of the image.
    CHECK(dark > img.pixels.size() / 20);
    CHECK(dark < img.pixels.size() / 3);
}
