// Named synthetic datasets. Every component draws from its own stream label,
// so adding or reordering components never perturbs the others.

#include <array>
#include <string>
#include <vector>

#include "pterrace/error.hpp"
#include "pterrace/pointcloud.hpp"
#include "pterrace/rng.hpp"

namespace pterrace {

namespace {

using Vertex = std::array<double, 2>;

PointCloud circle(double cx, double cy, double r, std::size_t n, const NoiseSpec& noise,
                  std::uint64_t seed, std::string_view label) {
    const double c[2] = {cx, cy};
    return generate_circle(c, r, n, noise, seed, label);
}

PointCloud uniform_box(double x0, double y0, double x1, double y1, std::size_t n,
                       std::uint64_t seed, std::string_view label) {
    Rng rng(seed, label);
    std::vector<double> coords;
    coords.reserve(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        coords.push_back(rng.uniform(x0, x1));
        coords.push_back(rng.uniform(y0, y1));
    }
    return PointCloud(2, std::move(coords));
}

// Three circles of 200 points each: large/sparse, medium, small/dense.
PointCloud three_circles(std::uint64_t seed) {
    const GaussianRadial noise{0.05};
    const PointCloud parts[] = {
        circle(0.0, 0.0, 2.0, 200, noise, seed, "three-circles/a"),
        circle(4.5, 1.0, 1.0, 200, noise, seed, "three-circles/b"),
        circle(3.8, -2.2, 0.5, 200, noise, seed, "three-circles/c"),
    };
    return concat(parts);
}

// A large sparse circle and a small dense one, with radial noise and a
// uniform background.
PointCloud two_noisy_circles(std::uint64_t seed) {
    const PointCloud parts[] = {
        circle(0.0, 0.0, 2.0, 250, GaussianRadial{0.2}, seed, "two-noisy-circles/large"),
        circle(4.0, 0.0, 0.5, 250, GaussianRadial{0.05}, seed, "two-noisy-circles/small"),
        uniform_box(-3.0, -3.0, 5.5, 3.0, 100, seed, "two-noisy-circles/background"),
    };
    return concat(parts);
}

// Equal radii, 100 vs 400 points.
PointCloud density_pair(std::uint64_t seed) {
    const GaussianRadial noise{0.05};
    const PointCloud parts[] = {
        circle(0.0, 0.0, 1.0, 100, noise, seed, "density-pair/sparse"),
        circle(3.0, 0.0, 1.0, 400, noise, seed, "density-pair/dense"),
    };
    return concat(parts);
}

// Radius 1 with 200 points, radius 4 with 800 points: near-equal densities.
PointCloud size_pair(std::uint64_t seed) {
    const GaussianRadial noise{0.05};
    const PointCloud parts[] = {
        circle(0.0, 0.0, 1.0, 200, noise, seed, "size-pair/small"),
        circle(6.0, 0.0, 4.0, 800, noise, seed, "size-pair/large"),
    };
    return concat(parts);
}

// Square, exponentially blurred circle, isosceles and equilateral triangles.
PointCloud four_shapes(std::uint64_t seed) {
    const double sd = 0.15;
    const Vertex square[] = {{-3.5, 1.0}, {-2.5, 1.0}, {-2.5, 2.0}, {-3.5, 2.0}};
    const Vertex isosceles[] = {{2.2, -0.8}, {4.6, -0.8}, {3.4, 1.4}};
    const double side = 1.2;
    const double tri_h = side * 0.8660254037844386;
    const Vertex equilateral[] = {{-1.2, -2.2}, {-1.2 + side, -2.2}, {-1.2 + side / 2, -2.2 + tri_h}};
    const PointCloud parts[] = {
        generate_polygon_edges(square, 100, sd, seed, "four-shapes/square"),
        circle(0.0, 1.5, 1.0, 800, ExponentialInOut{4.0, 10.0, 400, 400}, seed,
               "four-shapes/circle"),
        generate_polygon_edges(isosceles, 200, sd, seed, "four-shapes/isosceles"),
        generate_polygon_edges(equilateral, 200, sd, seed, "four-shapes/equilateral"),
    };
    return concat(parts);
}

constexpr std::string_view kNames[] = {"three-circles", "two-noisy-circles", "density-pair",
                                       "size-pair", "four-shapes"};

}  // namespace

std::span<const std::string_view> dataset_names() { return kNames; }

PointCloud generate_dataset(std::string_view name, std::uint64_t seed) {
    if (name == "three-circles") return three_circles(seed);
    if (name == "two-noisy-circles") return two_noisy_circles(seed);
    if (name == "density-pair") return density_pair(seed);
    if (name == "size-pair") return size_pair(seed);
    if (name == "four-shapes") return four_shapes(seed);
    fail(ErrorKind::Config, "unknown dataset '" + std::string(name) + "'");
}

}  // namespace pterrace
