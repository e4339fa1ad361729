#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pterrace/pointcloud.hpp"

namespace pterrace {

/// Regular lattice over a box; `resolution` counts vertices per axis.
class GridSpec {
public:
    GridSpec(BoundingBox box, std::vector<std::size_t> resolution);

    std::size_t dim() const noexcept { return resolution_.size(); }
    const BoundingBox& box() const noexcept { return box_; }
    std::span<const std::size_t> resolution() const noexcept { return resolution_; }
    std::size_t vertex_count() const noexcept;

    double spacing(std::size_t axis) const noexcept {
        return (box_.upper[axis] - box_.lower[axis]) / static_cast<double>(resolution_[axis] - 1);
    }
    /// Coordinate of vertex `index` along `axis`; the last index maps exactly
    /// onto the upper bound.
    double coordinate(std::size_t axis, std::size_t index) const noexcept;

    friend bool operator==(const GridSpec&, const GridSpec&) = default;

private:
    BoundingBox box_;
    std::vector<std::size_t> resolution_;
};

/// Box = bounding_box(cloud, margin_factor * max_bandwidth).
GridSpec grid_spec_auto(const PointCloud& cloud, double max_bandwidth,
                        std::vector<std::size_t> resolution, double margin_factor = 3.0);

/// KDE values sampled on a GridSpec, row-major with the last axis fastest.
class ScalarGrid {
public:
    ScalarGrid(GridSpec spec, std::vector<double> values, double bandwidth);

    const GridSpec& spec() const noexcept { return spec_; }
    std::span<const double> values() const noexcept { return values_; }
    double bandwidth() const noexcept { return bandwidth_; }

    double at(std::span<const std::size_t> index) const;

private:
    GridSpec spec_;
    std::vector<double> values_;
    double bandwidth_;
};

/// Gaussian kernel density estimate with scalar bandwidth h:
///
///   f(v) = 1 / (n (2 pi)^(d/2) h^d) * sum_i exp(-|v - x_i|^2 / (2 h^2))
///
/// evaluated at every grid vertex by direct summation.
ScalarGrid evaluate_kde(const PointCloud& cloud, double bandwidth, const GridSpec& spec);

/// Human-readable statement of the normalization above; embedded in exports.
extern const char* const kKdeDescriptor;

/// Header "# pterrace grid d=.. res=.. box=.. bandwidth=.." and one value
/// per line.
std::string grid_to_csv(const ScalarGrid& grid);

/// The grid/bandwidth comment line used by grid and barcode exports.
std::string grid_header_line(const GridSpec& spec, double bandwidth);

}  // namespace pterrace
