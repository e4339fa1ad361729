#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "pterrace/pointcloud.hpp"

namespace pterrace {

/// Grayscale raster, row 0 at the top. Pixel (col, row) covers the unit
/// square [col, col+1] x [height-1-row, height-row] in point coordinates, so
/// the image is upright when plotted.
struct GrayImage {
    std::size_t width = 0;
    std::size_t height = 0;
    unsigned maxval = 255;
    std::vector<unsigned> pixels;

    unsigned at(std::size_t col, std::size_t row) const { return pixels[row * width + col]; }

    friend bool operator==(const GrayImage&, const GrayImage&) = default;
};

/// Binary (P5) or ASCII (P2) PGM.
GrayImage load_pgm(const std::filesystem::path& path);
GrayImage parse_pgm(std::string_view bytes);
std::string to_pgm(const GrayImage& image, bool binary = true);

/// n points drawn with pixel probability proportional to (maxval - value) if
/// `darkness`, else to value; each point is jittered uniformly inside its
/// pixel square.
PointCloud sample_intensity(const GrayImage& image, std::size_t n, bool darkness,
                            std::uint64_t seed);

/// n points uniform on the perimeter of [0, width] x [0, height].
PointCloud sample_boundary(const GrayImage& image, std::size_t n, std::uint64_t seed);

/// Cell-wall image with kHoneycombCells enclosed cells once the image
/// border is closed: dark walls of varying spacing on a bright, lightly
/// speckled background. Dimensions 330 x 330.
GrayImage synthetic_honeycomb(std::uint64_t seed);
inline constexpr int kHoneycombCells = 9;

}  // namespace pterrace
