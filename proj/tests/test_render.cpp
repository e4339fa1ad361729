#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pterrace/error.hpp"
#include "pterrace/render.hpp"

using namespace pterrace;

namespace {

TerraceMatrix matrix(std::vector<double> x, std::vector<double> y, std::vector<std::vector<long>> z) {
    TerraceMatrix m;
    m.xvec = std::move(x);
    m.yvec = std::move(y);
    for (const auto& row : z) m.zmat.insert(m.zmat.end(), row.begin(), row.end());
    return m;
}

TerraceMatrix small_matrix() {
    return matrix({0.1, 0.2, 0.4, 0.8}, {0.9, 0.6, 0.35, 0.2, 0.0},
                  {{0, 1, 0, 0}, {1, 2, 1, 0}, {2, 3, 1, 0}, {1, 1, 0, 0}, {0, 0, 0, 0}});
}

std::size_t count(const std::string& s, const std::string& needle) {
    std::size_t n = 0;
    for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
    return n;
}

std::string legend_label(const std::string& label) { return "\">" + label + "</text>"; }

// Compares against tests/golden/<name>; PTERRACE_UPDATE_GOLDEN=1 rewrites it.
void check_golden(const std::string& name, const std::string& svg) {
    const auto path = std::filesystem::path(PTERRACE_GOLDEN_DIR) / name;
    if (std::getenv("PTERRACE_UPDATE_GOLDEN")) std::ofstream(path, std::ios::binary) << svg;
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), "missing golden file " << path);
    std::ostringstream want;
    want << in.rdbuf();
    CHECK(svg == want.str());
}

}  // namespace

TEST_CASE("all-zero terrace: background only, legend '0'") {
    const auto m = matrix({0.1, 0.2}, {1.0, 0.0}, {{0, 0}, {0, 0}});
    const auto svg = render_terrace(m, {});
    const auto bg = std::string(palette_colors("viridis")[0]);
    CHECK(count(svg, "fill=\"" + bg + "\"") == 2);  // plot area and legend swatch
    CHECK(count(svg, legend_label("0")) == 1);
    CHECK(count(svg, legend_label("1")) == 0);
}

TEST_CASE("height cap collects the top layers into one bucket") {
    std::vector<std::vector<long>> z;
    std::vector<double> y;
    for (long h = 9; h >= 0; --h) {
        z.push_back({h, h, 0});
        y.push_back(static_cast<double>(h + 1));
    }
    z.push_back({0, 0, 0});
    y.push_back(0.0);
    const auto m = matrix({0.1, 0.2, 0.3}, y, z);
    RenderOptions o;
    o.height_cap = 6;
    const auto svg = render_terrace(m, o);
    for (int h = 0; h <= 5; ++h) CHECK(count(svg, legend_label(std::to_string(h))) == 1);
    CHECK(count(svg, legend_label("≥6")) == 1);
    for (int h = 6; h <= 9; ++h) CHECK(count(svg, legend_label(std::to_string(h))) == 0);

    o.height_cap = 0;
    CHECK_THROWS_AS(render_terrace(m, o), Error);
}

TEST_CASE("legend lists exactly the heights present") {
    const auto svg = render_terrace(small_matrix(), {});
    for (int h = 0; h <= 3; ++h) CHECK(count(svg, legend_label(std::to_string(h))) == 1);
    CHECK(count(svg, legend_label("4")) == 0);
}

TEST_CASE("terrace cells are painted with their height colour") {
    const auto m = small_matrix();
    RenderOptions o;
    o.annotate = false;
    const auto svg = render_terrace(m, o);
    const auto colors = palette_colors("viridis");
    // Painted runs per row, equal neighbours merged: 1 | 1 2 1 | 2 3 1 | 1.
    CHECK(count(svg, "fill=\"" + std::string(colors[3]) + "\"") == 1);
    CHECK(count(svg, "fill=\"" + std::string(colors[2]) + "\"") == 2);
    CHECK(count(svg, "fill=\"" + std::string(colors[1]) + "\"") == 5);
}

TEST_CASE("golden terrace and area SVGs") {
    const auto m = small_matrix();
    check_golden("terrace_small.svg", render_terrace(m, {}));
    RenderOptions capped;
    capped.height_cap = 2;
    capped.palette = "gray";
    capped.width_px = 400;
    capped.height_px = 300;
    check_golden("terrace_small_capped.svg", render_terrace(m, capped));
    check_golden("area_small.svg", render_area(terrace_area(m), {}));
    check_golden("slice_small.svg", render_barcode_slice(m, 1, {}));
    CHECK(render_terrace(m, {}) == render_terrace(m, {}));
}

TEST_CASE("area chart") {
    RenderOptions o;
    o.annotate = false;
    TerraceAreaSummary empty;
    const auto e = render_area(empty, o);
    CHECK(count(e, "<rect") == 1);  // page background only

    TerraceAreaSummary half;
    half.by_height = {0.5};
    const auto svg = render_area(half, o);
    REQUIRE(count(svg, "<rect") == 2);
    // Plot height with annotate=false is 600 - 20; the bar is half of it.
    CHECK(svg.find("height=\"290.000000\"") != std::string::npos);
}

TEST_CASE("bars from a step function reproduce its counts") {
    BettiStepFunction f;
    f.breakpoints = {1.0, 0.8, 0.5, 0.3, 0.1};
    f.counts = {1, 3, 2, 1, 0};
    const auto bars = bars_from_step_function(f, 1);
    CHECK(bars.size() == 3);
    for (double y : {1.1, 1.0, 0.9, 0.8, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1, 0.0}) {
        long c = 0;
        for (const auto& b : bars) c += (b.death < y && y <= b.birth);
        CHECK(c == f(y));
    }
}

TEST_CASE("barcode slice") {
    const auto one = matrix({0.1, 0.2}, {1.0, 0.0}, {{1, 0}, {0, 0}});
    RenderOptions o;
    o.annotate = false;
    const auto svg = render_barcode_slice(one, 0, o);
    REQUIRE(count(svg, "<line") == 1);
    // Full y-range: from the bottom of the plot (y = 590) to the top (y = 10).
    CHECK(svg.find("y1=\"590.000000\"") != std::string::npos);
    CHECK(svg.find("y2=\"10.000000\"") != std::string::npos);

    CHECK(count(render_barcode_slice(one, 1, o), "<line") == 0);
    CHECK_THROWS_AS(render_barcode_slice(one, 2, o), Error);

    const auto m = small_matrix();
    for (std::size_t i = 0; i < m.cols(); ++i) {
        const auto bars = bars_from_step_function(slice_at_bandwidth(m, i), 1);
        for (std::size_t j = 0; j + 1 < m.rows(); ++j) {
            const double mid = 0.5 * (m.yvec[j] + m.yvec[j + 1]);
            long c = 0;
            for (const auto& b : bars) c += (b.death < mid && mid <= b.birth);
            CHECK(c == m.z(j, i));
        }
    }
}

TEST_CASE("unknown palette") {
    CHECK_THROWS_AS(palette_colors("rainbow"), Error);
    CHECK(palette_colors("viridis").size() == static_cast<std::size_t>(kPaletteSteps) + 1);
}
