#include "pterrace/kde.hpp"

#include <cmath>
#include <numbers>

#include "pterrace/error.hpp"
#include "text_util.hpp"

namespace pterrace {

const char* const kKdeDescriptor =
    "gaussian product kernel, scalar bandwidth h: "
    "f(v) = 1/(n (2pi)^(d/2) h^d) * sum_i exp(-|v - x_i|^2 / (2 h^2))";

GridSpec::GridSpec(BoundingBox box, std::vector<std::size_t> resolution)
    : box_(std::move(box)), resolution_(std::move(resolution)) {
    if (resolution_.empty() || resolution_.size() > 3)
        fail(ErrorKind::InvalidArgument, "grid dimension must be 1, 2 or 3");
    if (box_.lower.size() != resolution_.size() || box_.upper.size() != resolution_.size())
        fail(ErrorKind::InvalidArgument, "grid box and resolution dimensions differ");
    for (std::size_t a = 0; a < resolution_.size(); ++a) {
        if (resolution_[a] < 2)
            fail(ErrorKind::InvalidArgument, "grid resolution must be >= 2 on every axis");
        const double s = spacing(a);
        if (!(s > 0.0) || !std::isfinite(s))
            fail(ErrorKind::InvalidArgument, "grid spacing must be finite and positive");
    }
}

std::size_t GridSpec::vertex_count() const noexcept {
    std::size_t n = 1;
    for (auto r : resolution_) n *= r;
    return n;
}

double GridSpec::coordinate(std::size_t axis, std::size_t index) const noexcept {
    if (index + 1 == resolution_[axis]) return box_.upper[axis];
    const double t = static_cast<double>(index) / static_cast<double>(resolution_[axis] - 1);
    return box_.lower[axis] + t * (box_.upper[axis] - box_.lower[axis]);
}

GridSpec grid_spec_auto(const PointCloud& cloud, double max_bandwidth,
                        std::vector<std::size_t> resolution, double margin_factor) {
    if (!(max_bandwidth > 0.0) || !std::isfinite(max_bandwidth))
        fail(ErrorKind::InvalidArgument, "max bandwidth must be positive");
    if (!(margin_factor >= 0.0)) fail(ErrorKind::InvalidArgument, "margin factor must be >= 0");
    if (resolution.size() == 1) resolution.assign(cloud.dim(), resolution.front());
    if (resolution.size() != cloud.dim())
        fail(ErrorKind::InvalidArgument, "resolution has " + std::to_string(resolution.size()) +
                                             " axes but the cloud has dimension " +
                                             std::to_string(cloud.dim()));
    return GridSpec(bounding_box(cloud, margin_factor * max_bandwidth), std::move(resolution));
}

ScalarGrid::ScalarGrid(GridSpec spec, std::vector<double> values, double bandwidth)
    : spec_(std::move(spec)), values_(std::move(values)), bandwidth_(bandwidth) {
    if (values_.size() != spec_.vertex_count())
        fail(ErrorKind::InvalidArgument, "grid value count does not match the grid spec");
    for (double v : values_)
        if (!std::isfinite(v) || v < 0.0)
            fail(ErrorKind::Compute, "grid values must be finite and non-negative");
}

double ScalarGrid::at(std::span<const std::size_t> index) const {
    std::size_t flat = 0;
    for (std::size_t a = 0; a < spec_.dim(); ++a) flat = flat * spec_.resolution()[a] + index[a];
    return values_.at(flat);
}

ScalarGrid evaluate_kde(const PointCloud& cloud, double bandwidth, const GridSpec& spec) {
    if (!(bandwidth > 0.0) || !std::isfinite(bandwidth))
        fail(ErrorKind::InvalidArgument, "bandwidth must be positive");
    if (cloud.empty()) fail(ErrorKind::InvalidArgument, "KDE of an empty cloud");
    if (cloud.dim() != spec.dim())
        fail(ErrorKind::InvalidArgument, "cloud dimension " + std::to_string(cloud.dim()) +
                                             " does not match grid dimension " +
                                             std::to_string(spec.dim()));

    const std::size_t d = spec.dim();
    const auto res = spec.resolution();
    const double inv_two_h2 = 1.0 / (2.0 * bandwidth * bandwidth);

    // The kernel factorizes over axes, so each point needs only sum(res)
    // exponentials; the grid is then filled with outer products.
    std::vector<std::vector<double>> coord(d);
    for (std::size_t a = 0; a < d; ++a) {
        coord[a].resize(res[a]);
        for (std::size_t k = 0; k < res[a]; ++k) coord[a][k] = spec.coordinate(a, k);
    }

    std::vector<double> sum(spec.vertex_count(), 0.0);
    std::vector<std::vector<double>> factor(d);
    for (std::size_t a = 0; a < d; ++a) factor[a].resize(res[a]);

    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const auto p = cloud.point(i);
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t k = 0; k < res[a]; ++k) {
                const double diff = coord[a][k] - p[a];
                factor[a][k] = std::exp(-diff * diff * inv_two_h2);
            }

        if (d == 2) {
            const auto& fx = factor[0];
            const auto& fy = factor[1];
            for (std::size_t r = 0; r < res[0]; ++r) {
                if (fx[r] == 0.0) continue;
                double* row = sum.data() + r * res[1];
                for (std::size_t c = 0; c < res[1]; ++c) row[c] += fx[r] * fy[c];
            }
        } else if (d == 3) {
            for (std::size_t r = 0; r < res[0]; ++r) {
                if (factor[0][r] == 0.0) continue;
                for (std::size_t s = 0; s < res[1]; ++s) {
                    const double f01 = factor[0][r] * factor[1][s];
                    if (f01 == 0.0) continue;
                    double* row = sum.data() + (r * res[1] + s) * res[2];
                    for (std::size_t c = 0; c < res[2]; ++c) row[c] += f01 * factor[2][c];
                }
            }
        } else {
            for (std::size_t c = 0; c < res[0]; ++c) sum[c] += factor[0][c];
        }
    }

    const double norm = 1.0 / (static_cast<double>(cloud.size()) *
                               std::pow(2.0 * std::numbers::pi, static_cast<double>(d) / 2.0) *
                               std::pow(bandwidth, static_cast<double>(d)));
    for (double& v : sum) v *= norm;
    return ScalarGrid(spec, std::move(sum), bandwidth);
}

std::string grid_header_line(const GridSpec& spec, double bandwidth) {
    std::string line = "# pterrace grid d=" + std::to_string(spec.dim()) + " res=";
    for (std::size_t a = 0; a < spec.dim(); ++a) {
        if (a) line += ',';
        line += std::to_string(spec.resolution()[a]);
    }
    line += " box=";
    for (std::size_t a = 0; a < spec.dim(); ++a) {
        if (a) line += 'x';
        line += '[' + detail::format_exact(spec.box().lower[a]) + ',' +
                detail::format_exact(spec.box().upper[a]) + ']';
    }
    line += " bandwidth=" + detail::format_exact(bandwidth);
    return line;
}

std::string grid_to_csv(const ScalarGrid& grid) {
    std::string out = grid_header_line(grid.spec(), grid.bandwidth()) + "\n";
    out += std::string("# kde: ") + kKdeDescriptor + "\n";
    for (double v : grid.values()) out += detail::format_exact(v) + '\n';
    return out;
}

}  // namespace pterrace
