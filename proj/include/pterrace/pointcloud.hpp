#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace pterrace {

/// Finite set of points in R^2 or R^3, stored row-major.
///
/// Construction validates dimension, arity and finiteness; afterwards the
/// cloud is immutable.
class PointCloud {
public:
    PointCloud(std::size_t dim, std::vector<double> coords);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return coords_.size() / dim_; }
    bool empty() const noexcept { return coords_.empty(); }

    std::span<const double> point(std::size_t i) const {
        return {coords_.data() + i * dim_, dim_};
    }
    std::span<const double> coords() const noexcept { return coords_; }

    friend bool operator==(const PointCloud&, const PointCloud&) = default;

private:
    std::size_t dim_;
    std::vector<double> coords_;
};

/// Concatenate clouds of equal dimension, preserving order.
PointCloud concat(std::span<const PointCloud> parts);

struct BoundingBox {
    std::vector<double> lower;
    std::vector<double> upper;

    std::size_t dim() const noexcept { return lower.size(); }
    bool contains(std::span<const double> p) const;
};

/// Axis-aligned bounds expanded by `margin` on every side. An axis with zero
/// extent is inflated symmetrically to kDegenerateExtent.
BoundingBox bounding_box(const PointCloud& cloud, double margin);

inline constexpr double kDegenerateExtent = 1e-6;

// ---------------------------------------------------------------------------
// CSV

/// Comma separated, one point per row. Lines starting with '#' are comments;
/// a first data row that does not parse as numbers is taken as a header.
PointCloud load_csv(const std::filesystem::path& path);
PointCloud parse_csv(std::string_view text);

/// Emits "# pterrace pointcloud d=<d>" followed by one row per point, with
/// round-trip precision.
std::string to_csv(const PointCloud& cloud);

// ---------------------------------------------------------------------------
// Generators

struct NoNoise {};
struct GaussianRadial {
    double sd;
};
/// n_in points at radius r*(1 - Exp(rate_in)) followed by n_out points at
/// radius r*(1 + Exp(rate_out)).
struct ExponentialInOut {
    double rate_in;
    double rate_out;
    std::size_t n_in;
    std::size_t n_out;
};
using NoiseSpec = std::variant<NoNoise, GaussianRadial, ExponentialInOut>;

/// Points on a circle in the first two coordinates of `center` (a 3D center
/// keeps its z). Angles are uniform on [0, 2pi).
PointCloud generate_circle(std::span<const double> center, double radius, std::size_t n,
                           const NoiseSpec& noise, std::uint64_t seed,
                           std::string_view stream = "circle");

/// n_per_edge uniform points on each edge of the closed polygon, each
/// coordinate then perturbed by N(0, sd^2).
PointCloud generate_polygon_edges(std::span<const std::array<double, 2>> vertices,
                                  std::size_t n_per_edge, double gaussian_sd,
                                  std::uint64_t seed, std::string_view stream = "polygon");

/// Named synthetic datasets: three-circles, two-noisy-circles, density-pair,
/// size-pair, four-shapes.
PointCloud generate_dataset(std::string_view name, std::uint64_t seed);
std::span<const std::string_view> dataset_names();

}  // namespace pterrace
