#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "pterrace/error.hpp"
#include "pterrace/kde.hpp"

using namespace pterrace;

namespace {

GridSpec square_grid(double lo, double hi, std::size_t n) {
    return GridSpec(BoundingBox{{lo, lo}, {hi, hi}}, {n, n});
}

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

}  // namespace

TEST_CASE("kde: peak of a single point") {
    const PointCloud c(2, {0.0, 0.0});
    const auto g = evaluate_kde(c, 0.5, square_grid(-1, 1, 3));
    const std::size_t centre[] = {1, 1};
    const double want = 1.0 / (2.0 * std::numbers::pi * 0.25);
    CHECK(want == doctest::Approx(0.636620).epsilon(1e-6));
    CHECK(rel_err(g.at(centre), want) < 1e-12);
}

TEST_CASE("kde: off-peak value") {
    const PointCloud c(2, {0.0, 0.0});
    const auto g = evaluate_kde(c, 1.0, square_grid(-1, 1, 3));
    const std::size_t corner[] = {2, 2};
    const double want = std::exp(-1.0) / (2.0 * std::numbers::pi);
    CHECK(want == doctest::Approx(0.0585498).epsilon(1e-6));
    CHECK(rel_err(g.at(corner), want) < 1e-12);
}

TEST_CASE("kde: every vertex matches the scalar oracle") {
    std::mt19937_64 gen(17);
    for (std::size_t d : {2u, 3u}) {
        std::normal_distribution<double> nd(0.0, 1.0);
        std::vector<double> coords(40 * d);
        for (double& x : coords) x = nd(gen);
        const PointCloud c(d, coords);
        const auto spec = grid_spec_auto(c, 0.4, {d == 2 ? 17u : 9u});
        const auto g = evaluate_kde(c, 0.4, spec);
        for (std::size_t v = 0; v < spec.vertex_count(); ++v) {
            const auto idx = oracle::unflatten(v, {spec.resolution().begin(), spec.resolution().end()});
            std::vector<double> at(d);
            for (std::size_t a = 0; a < d; ++a) at[a] = spec.coordinate(a, idx[a]);
            const double want = oracle::kde_at(coords, d, 0.4, at);
            const double got = g.values()[v];
            // Far from every point both sides underflow towards zero.
            if (want > 1e-250) CHECK(rel_err(got, want) < 1e-12);
            else CHECK(got < 1e-250);
        }
    }
}

TEST_CASE("kde: integrates to one on a padded grid") {
    for (double h : {0.1, 0.3, 0.8}) {
        const auto c = PointCloud(2, {0, 0, 1, 0.5, -0.5, 1, 0.2, -0.7});
        const auto spec = GridSpec(bounding_box(c, 5.0 * h), {201, 201});
        const auto g = evaluate_kde(c, h, spec);
        double sum = 0.0;
        for (double v : g.values()) sum += v;
        sum *= spec.spacing(0) * spec.spacing(1);
        CHECK(std::abs(sum - 1.0) < 1e-2);
    }
}

TEST_CASE("grid_spec_auto: margin rule") {
    std::vector<double> ring;
    for (int i = 0; i < 16; ++i) {
        const double t = 2.0 * std::numbers::pi * i / 16.0;
        ring.push_back(i % 4 == 0 ? std::round(std::cos(t)) : std::cos(t));
        ring.push_back(i % 4 == 0 ? std::round(std::sin(t)) : std::sin(t));
    }
    const auto spec = grid_spec_auto(PointCloud(2, ring), 1.5, {64});
    for (std::size_t a = 0; a < 2; ++a) {
        CHECK(spec.box().lower[a] == doctest::Approx(-5.5));
        CHECK(spec.box().upper[a] == doctest::Approx(5.5));
        CHECK(spec.resolution()[a] == 64);
    }

    const auto one = grid_spec_auto(PointCloud(3, {1, 2, 3}), 1.0, {8});
    CHECK(one.box().lower == std::vector<double>{-2, -1, 0});
    CHECK(one.box().upper == std::vector<double>{4, 5, 6});

    CHECK_THROWS_AS(grid_spec_auto(PointCloud(2, {0, 0}), 0.0, {8}), Error);
}

TEST_CASE("kde: argument errors") {
    const PointCloud c(2, {0, 0});
    CHECK_THROWS_AS(evaluate_kde(c, 0.0, square_grid(-1, 1, 4)), Error);
    CHECK_THROWS_AS(evaluate_kde(c, -1.0, square_grid(-1, 1, 4)), Error);
    const GridSpec three(BoundingBox{{-1, -1, -1}, {1, 1, 1}}, {4, 4, 4});
    CHECK_THROWS_AS(evaluate_kde(c, 1.0, three), Error);
    CHECK_THROWS_AS(GridSpec(BoundingBox{{0, 0}, {1, 1}}, {1, 4}), Error);
}

TEST_CASE("kde: translation equivariance") {
    const std::vector<double> pts = {0.1, 0.2, -0.4, 0.9, 0.7, -0.3};
    const PointCloud c(2, pts);
    const auto spec = GridSpec(BoundingBox{{-2, -2}, {2, 2}}, {21, 21});
    const double t[] = {0.75, -1.25};
    std::vector<double> moved = pts;
    for (std::size_t i = 0; i < moved.size(); ++i) moved[i] += t[i % 2];
    const auto spec_moved = GridSpec(BoundingBox{{-2 + t[0], -2 + t[1]}, {2 + t[0], 2 + t[1]}}, {21, 21});
    const auto a = evaluate_kde(c, 0.5, spec);
    const auto b = evaluate_kde(PointCloud(2, moved), 0.5, spec_moved);
    for (std::size_t v = 0; v < a.values().size(); ++v)
        CHECK(std::abs(a.values()[v] - b.values()[v]) <= 1e-12 * std::max(1.0, a.values()[v]));
}

TEST_CASE("kde: a duplicate point adds exactly one kernel peak to the sum") {
    const std::vector<double> pts = {0.0, 0.0, 1.0, 1.0};
    const auto spec = GridSpec(BoundingBox{{0, 0}, {1, 1}}, {3, 3});
    const double h = 0.7;
    const auto a = evaluate_kde(PointCloud(2, pts), h, spec);
    auto more = pts;
    more.insert(more.end(), {0.0, 0.0});
    const auto b = evaluate_kde(PointCloud(2, more), h, spec);
    const double peak = 1.0 / (2.0 * std::numbers::pi * h * h);
    const std::size_t origin[] = {0, 0};
    CHECK(rel_err(3.0 * b.at(origin) - 2.0 * a.at(origin), peak) < 1e-12);
}

TEST_CASE("kde: reflection symmetry and peak bound") {
    const PointCloud c(2, {-1, 0.3, 1, 0.3, -0.5, -0.8, 0.5, -0.8});
    const auto spec = square_grid(-3, 3, 31);
    const double h = 0.6;
    const auto g = evaluate_kde(c, h, spec);
    const double peak = 1.0 / (2.0 * std::numbers::pi * h * h);
    for (std::size_t r = 0; r < 31; ++r)
        for (std::size_t col = 0; col < 31; ++col) {
            const std::size_t a[] = {col, r};
            const std::size_t b[] = {30 - col, r};
            CHECK(std::abs(g.at(a) - g.at(b)) <= 1e-12 * peak);
            CHECK(g.at(a) >= 0.0);
            CHECK(g.at(a) <= peak);
        }
}

TEST_CASE("grid export header") {
    const auto spec = square_grid(0, 1, 2);
    const auto g = evaluate_kde(PointCloud(2, {0.5, 0.5}), 0.25, spec);
    const auto csv = grid_to_csv(g);
    CHECK(csv.rfind("# pterrace grid d=2 res=2,2 box=", 0) == 0);
    CHECK(csv.find("bandwidth=0.25") != std::string::npos);
    std::size_t lines = 0;
    for (char ch : csv) lines += ch == '\n';
    CHECK(lines >= 5);
}
