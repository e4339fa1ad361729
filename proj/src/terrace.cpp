#include "pterrace/terrace.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "pterrace/error.hpp"

namespace pterrace {

long BettiStepFunction::operator()(double y) const {
    if (breakpoints.empty() || y > breakpoints.front()) return 0;
    // Last q with breakpoints[q] >= y; then y lies in (breakpoints[q+1], breakpoints[q]].
    const auto it = std::partition_point(breakpoints.begin(), breakpoints.end(),
                                         [y](double b) { return b >= y; });
    return counts[static_cast<std::size_t>(it - breakpoints.begin()) - 1];
}

BettiStepFunction betti_step_function(const Barcode& barcode, int k) {
    struct Event {
        double value;
        long delta;
    };
    std::vector<Event> events;
    for (const auto& p : barcode.pairs) {
        if (p.dim != k) continue;
        const double death =
            p.essential ? std::nextafter(p.death, -std::numeric_limits<double>::infinity())
                        : p.death;
        events.push_back({p.birth, +1});
        events.push_back({death, -1});
    }
    if (events.empty()) return {};

    std::stable_sort(events.begin(), events.end(),
                     [](const Event& a, const Event& b) { return a.value > b.value; });

    BettiStepFunction f;
    f.breakpoints.clear();
    f.counts.clear();
    long running = 0;
    for (std::size_t e = 0; e < events.size();) {
        const double v = events[e].value;
        for (; e < events.size() && events[e].value == v; ++e) running += events[e].delta;
        f.breakpoints.push_back(v);
        f.counts.push_back(running);
    }
    return f;
}

long TerraceMatrix::max_height() const {
    return zmat.empty() ? 0 : *std::max_element(zmat.begin(), zmat.end());
}

TerraceMatrix assemble_terrace(std::span<const BettiStepFunction> step_functions,
                               std::span<const double> bandwidths, int k) {
    if (step_functions.size() != bandwidths.size())
        fail(ErrorKind::InvalidArgument, "got " + std::to_string(step_functions.size()) +
                                             " step functions for " +
                                             std::to_string(bandwidths.size()) + " bandwidths");
    if (bandwidths.empty()) fail(ErrorKind::InvalidArgument, "terrace needs at least one bandwidth");
    for (std::size_t i = 1; i < bandwidths.size(); ++i)
        if (!(bandwidths[i - 1] < bandwidths[i]))
            fail(ErrorKind::InvalidArgument, "bandwidths must be strictly ascending");

    TerraceMatrix m;
    m.dim = k;
    m.xvec.assign(bandwidths.begin(), bandwidths.end());
    m.yvec.push_back(0.0);
    for (const auto& f : step_functions)
        m.yvec.insert(m.yvec.end(), f.breakpoints.begin(), f.breakpoints.end());
    std::sort(m.yvec.begin(), m.yvec.end(), std::greater<>());
    m.yvec.erase(std::unique(m.yvec.begin(), m.yvec.end()), m.yvec.end());

    m.zmat.assign(m.yvec.size() * m.xvec.size(), 0);
    for (std::size_t i = 0; i < m.xvec.size(); ++i) {
        const auto& f = step_functions[i];
        // Both sequences descend, so one merge pass places every y.
        std::size_t q = 0;
        for (std::size_t j = 0; j < m.yvec.size(); ++j) {
            const double y = m.yvec[j];
            if (y > f.breakpoints.front()) continue;
            while (q + 1 < f.breakpoints.size() && f.breakpoints[q + 1] >= y) ++q;
            m.zmat[j * m.xvec.size() + i] = f.counts[q];
        }
    }
    return m;
}

BettiStepFunction slice_at_bandwidth(const TerraceMatrix& matrix, std::size_t column) {
    if (column >= matrix.cols())
        fail(ErrorKind::OutOfRange, "column " + std::to_string(column) + " out of range [0, " +
                                        std::to_string(matrix.cols()) + ")");
    BettiStepFunction f;
    f.breakpoints.clear();
    f.counts.clear();
    for (std::size_t j = 0; j < matrix.rows(); ++j) {
        const long v = matrix.z(j, column);
        const bool starts_run = f.counts.empty() ? v != 0 : v != f.counts.back();
        if (starts_run) {
            f.breakpoints.push_back(matrix.yvec[j]);
            f.counts.push_back(v);
        }
    }
    if (f.breakpoints.empty()) return {};
    return f;
}

double TerraceAreaSummary::area(long h) const {
    if (h == 0) return height_zero;
    if (h < 1 || static_cast<std::size_t>(h) > by_height.size()) return 0.0;
    return by_height[static_cast<std::size_t>(h) - 1];
}

double TerraceAreaSummary::total_nonzero() const {
    double s = 0.0;
    for (double a : by_height) s += a;
    return s;
}

TerraceAreaSummary terrace_area(const TerraceMatrix& matrix) {
    if (matrix.cols() < 2)
        fail(ErrorKind::Compute, "terrace area needs at least two bandwidths (degenerate x axis)");
    if (matrix.rows() < 2)
        fail(ErrorKind::Compute,
             "terrace area needs at least two filtration values (degenerate y axis)");

    TerraceAreaSummary s;
    s.x_range = {matrix.xvec.front(), matrix.xvec.back()};
    s.y_range = {matrix.yvec.back(), matrix.yvec.front()};
    const double width = s.x_range.second - s.x_range.first;
    const double height = s.y_range.second - s.y_range.first;

    const long hmax = matrix.max_height();
    s.by_height.assign(static_cast<std::size_t>(std::max(hmax, 0L)), 0.0);
    for (std::size_t j = 0; j + 1 < matrix.rows(); ++j) {
        const double dy = (matrix.yvec[j] - matrix.yvec[j + 1]) / height;
        for (std::size_t i = 0; i + 1 < matrix.cols(); ++i) {
            const double cell = dy * (matrix.xvec[i + 1] - matrix.xvec[i]) / width;
            const long h = matrix.z(j, i);
            if (h <= 0)
                s.height_zero += cell;
            else
                s.by_height[static_cast<std::size_t>(h) - 1] += cell;
        }
    }
    return s;
}

}  // namespace pterrace
