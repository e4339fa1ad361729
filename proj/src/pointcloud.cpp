#include "pterrace/pointcloud.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "pterrace/error.hpp"
#include "pterrace/rng.hpp"
#include "text_util.hpp"

namespace pterrace {

PointCloud::PointCloud(std::size_t dim, std::vector<double> coords)
    : dim_(dim), coords_(std::move(coords)) {
    if (dim_ != 2 && dim_ != 3)
        fail(ErrorKind::InvalidArgument,
             "point cloud dimension must be 2 or 3, got " + std::to_string(dim_));
    if (coords_.size() % dim_ != 0)
        fail(ErrorKind::InvalidArgument, "coordinate count is not a multiple of the dimension");
    for (std::size_t i = 0; i < coords_.size(); ++i)
        if (!std::isfinite(coords_[i]))
            fail(ErrorKind::Data, "non-finite coordinate in point " + std::to_string(i / dim_));
}

PointCloud concat(std::span<const PointCloud> parts) {
    if (parts.empty()) fail(ErrorKind::InvalidArgument, "concat of zero clouds");
    const std::size_t dim = parts.front().dim();
    std::vector<double> coords;
    for (const auto& p : parts) {
        if (p.dim() != dim) fail(ErrorKind::InvalidArgument, "concat of clouds with different dimensions");
        coords.insert(coords.end(), p.coords().begin(), p.coords().end());
    }
    return PointCloud(dim, std::move(coords));
}

bool BoundingBox::contains(std::span<const double> p) const {
    for (std::size_t a = 0; a < dim(); ++a)
        if (p[a] < lower[a] || p[a] > upper[a]) return false;
    return true;
}

BoundingBox bounding_box(const PointCloud& cloud, double margin) {
    if (cloud.empty()) fail(ErrorKind::InvalidArgument, "bounding box of an empty cloud");
    if (!(margin >= 0.0) || !std::isfinite(margin))
        fail(ErrorKind::InvalidArgument, "bounding box margin must be finite and >= 0");
    const std::size_t d = cloud.dim();
    BoundingBox box{std::vector<double>(cloud.point(0).begin(), cloud.point(0).end()),
                    std::vector<double>(cloud.point(0).begin(), cloud.point(0).end())};
    for (std::size_t i = 1; i < cloud.size(); ++i) {
        auto p = cloud.point(i);
        for (std::size_t a = 0; a < d; ++a) {
            box.lower[a] = std::min(box.lower[a], p[a]);
            box.upper[a] = std::max(box.upper[a], p[a]);
        }
    }
    for (std::size_t a = 0; a < d; ++a) {
        box.lower[a] -= margin;
        box.upper[a] += margin;
        if (!(box.lower[a] < box.upper[a])) {
            const double mid = box.lower[a];
            box.lower[a] = mid - kDegenerateExtent / 2;
            box.upper[a] = mid + kDegenerateExtent / 2;
        }
    }
    return box;
}

// ---------------------------------------------------------------------------
// CSV

PointCloud parse_csv(std::string_view text) {
    std::size_t dim = 0;
    std::vector<double> coords;
    bool seen_row = false;
    std::size_t line_no = 0;

    for (std::string_view line : detail::split_lines(text)) {
        ++line_no;
        line = detail::trim(line);
        if (line.empty() || line.front() == '#') continue;

        auto fields = detail::split(line, ',');
        std::vector<double> row;
        row.reserve(fields.size());
        std::size_t bad_field = fields.size();
        for (std::size_t f = 0; f < fields.size(); ++f) {
            auto v = detail::parse_double(detail::trim(fields[f]));
            if (!v) {
                bad_field = f;
                break;
            }
            row.push_back(*v);
        }

        if (bad_field != fields.size()) {
            if (!seen_row && bad_field == 0) {
                // Header row.
                seen_row = true;
                dim = fields.size();
                continue;
            }
            fail(ErrorKind::Data, "row " + std::to_string(line_no) + ": field " +
                                      std::to_string(bad_field + 1) + " is not numeric: '" +
                                      std::string(detail::trim(fields[bad_field])) + "'");
        }
        if (dim == 0) dim = row.size();
        seen_row = true;
        if (row.size() != dim)
            fail(ErrorKind::Data, "row " + std::to_string(line_no) + ": expected " +
                                      std::to_string(dim) + " fields, got " +
                                      std::to_string(row.size()));
        coords.insert(coords.end(), row.begin(), row.end());
    }
    if (coords.empty()) fail(ErrorKind::Data, "no data rows in point-cloud CSV");
    if (dim != 2 && dim != 3)
        fail(ErrorKind::Data, "point-cloud CSV must have 2 or 3 columns, got " + std::to_string(dim));
    return PointCloud(dim, std::move(coords));
}

PointCloud load_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Data, "cannot open point-cloud file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_csv(ss.str());
    } catch (const Error& e) {
        throw Error(e.kind(), path.string() + ": " + e.what());
    }
}

std::string to_csv(const PointCloud& cloud) {
    std::string out = "# pterrace pointcloud d=" + std::to_string(cloud.dim()) + "\n";
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        auto p = cloud.point(i);
        for (std::size_t a = 0; a < p.size(); ++a) {
            if (a) out += ',';
            out += detail::format_exact(p[a]);
        }
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// Generators

namespace {

struct RadiusSampler {
    Rng& rng;
    double radius;

    double operator()(const NoNoise&, std::size_t) const { return radius; }
    double operator()(const GaussianRadial& g, std::size_t) const {
        return radius + rng.normal(0.0, g.sd);
    }
    double operator()(const ExponentialInOut& e, std::size_t i) const {
        if (i < e.n_in) return radius * (1.0 - rng.exponential(e.rate_in));
        return radius * (1.0 + rng.exponential(e.rate_out));
    }
};

void validate_noise(const NoiseSpec& noise, std::size_t n) {
    if (auto g = std::get_if<GaussianRadial>(&noise); g && !(g->sd > 0.0))
        fail(ErrorKind::InvalidArgument, "Gaussian radial noise sd must be positive");
    if (auto e = std::get_if<ExponentialInOut>(&noise)) {
        if (!(e->rate_in > 0.0) || !(e->rate_out > 0.0))
            fail(ErrorKind::InvalidArgument, "exponential noise rates must be positive");
        if (e->n_in + e->n_out != n)
            fail(ErrorKind::InvalidArgument, "exponential noise n_in + n_out must equal n");
    }
}

}  // namespace

PointCloud generate_circle(std::span<const double> center, double radius, std::size_t n,
                           const NoiseSpec& noise, std::uint64_t seed, std::string_view stream) {
    if (center.size() != 2 && center.size() != 3)
        fail(ErrorKind::InvalidArgument, "circle center must have 2 or 3 coordinates");
    if (!(radius > 0.0) || !std::isfinite(radius))
        fail(ErrorKind::InvalidArgument, "circle radius must be positive");
    if (n == 0) fail(ErrorKind::InvalidArgument, "circle point count must be positive");
    validate_noise(noise, n);

    Rng rng(seed, stream);
    const std::size_t d = center.size();
    std::vector<double> coords;
    coords.reserve(n * d);
    for (std::size_t i = 0; i < n; ++i) {
        const double theta = 2.0 * std::numbers::pi * rng.uniform();
        const double r = std::visit([&](const auto& spec) { return RadiusSampler{rng, radius}(spec, i); },
                                    noise);
        coords.push_back(center[0] + r * std::cos(theta));
        coords.push_back(center[1] + r * std::sin(theta));
        if (d == 3) coords.push_back(center[2]);
    }
    return PointCloud(d, std::move(coords));
}

PointCloud generate_polygon_edges(std::span<const std::array<double, 2>> vertices,
                                  std::size_t n_per_edge, double gaussian_sd, std::uint64_t seed,
                                  std::string_view stream) {
    if (vertices.size() < 3)
        fail(ErrorKind::InvalidArgument, "polygon needs at least 3 vertices, got " +
                                             std::to_string(vertices.size()));
    if (n_per_edge == 0) fail(ErrorKind::InvalidArgument, "points per edge must be positive");
    if (!(gaussian_sd >= 0.0)) fail(ErrorKind::InvalidArgument, "perturbation sd must be >= 0");

    Rng rng(seed, stream);
    std::vector<double> coords;
    coords.reserve(vertices.size() * n_per_edge * 2);
    for (std::size_t e = 0; e < vertices.size(); ++e) {
        const auto& a = vertices[e];
        const auto& b = vertices[(e + 1) % vertices.size()];
        for (std::size_t i = 0; i < n_per_edge; ++i) {
            const double t = rng.uniform();
            double x = a[0] + t * (b[0] - a[0]);
            double y = a[1] + t * (b[1] - a[1]);
            if (gaussian_sd > 0.0) {
                x += rng.normal(0.0, gaussian_sd);
                y += rng.normal(0.0, gaussian_sd);
            }
            coords.push_back(x);
            coords.push_back(y);
        }
    }
    return PointCloud(2, std::move(coords));
}

}  // namespace pterrace
