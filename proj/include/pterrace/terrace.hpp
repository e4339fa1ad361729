#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pterrace/persistence.hpp"

namespace pterrace {

/// Piecewise-constant beta_k as a function of the filtration value.
///
/// `breakpoints` is strictly descending; counts[q] is beta_k on the half-open
/// interval (breakpoints[q+1], breakpoints[q]], where breakpoints[m] is taken
/// as -infinity. Above breakpoints[0] the count is zero, and counts.back()
/// is zero.
struct BettiStepFunction {
    std::vector<double> breakpoints{0.0};
    std::vector<long> counts{0};

    long operator()(double y) const;
    bool trivial() const { return breakpoints.size() == 1 && counts.front() == 0; }

    friend bool operator==(const BettiStepFunction&, const BettiStepFunction&) = default;
};

/// Births contribute +1 and deaths -1; events are merged at equal filtration
/// values, sorted from the top and accumulated. Essential bars (which are
/// alive at their clamped death) are closed just below that value so that
/// evaluation agrees with betti_at everywhere.
BettiStepFunction betti_step_function(const Barcode& barcode, int k);

/// Persistence terrace for one homological dimension.
///
/// xvec: bandwidths, ascending. yvec: union of all breakpoints plus the
/// density floor 0, strictly descending. z(j, i) is beta_k at bandwidth
/// xvec[i] and filtration yvec[j]; storage is row-major by yvec.
struct TerraceMatrix {
    int dim = 1;
    std::vector<double> xvec;
    std::vector<double> yvec;
    std::vector<long> zmat;

    std::size_t rows() const noexcept { return yvec.size(); }
    std::size_t cols() const noexcept { return xvec.size(); }
    long z(std::size_t j, std::size_t i) const { return zmat[j * xvec.size() + i]; }
    long max_height() const;

    friend bool operator==(const TerraceMatrix&, const TerraceMatrix&) = default;
};

TerraceMatrix assemble_terrace(std::span<const BettiStepFunction> step_functions,
                               std::span<const double> bandwidths, int k);

/// Column i of the terrace as a step function, with equal neighbouring rows
/// merged.
BettiStepFunction slice_at_bandwidth(const TerraceMatrix& matrix, std::size_t column);

/// Areas of the terrace layers of each height on the standardized
/// [min x, max x] x [min y, max y] rectangle. The open cell
/// (x_i, x_{i+1}) x (y_{j+1}, y_j) carries the height z(j, i).
struct TerraceAreaSummary {
    std::vector<double> by_height;  // by_height[h - 1] for h = 1..max height
    double height_zero = 0.0;
    std::pair<double, double> x_range{0.0, 0.0};
    std::pair<double, double> y_range{0.0, 0.0};

    double area(long h) const;
    double total_nonzero() const;
};

TerraceAreaSummary terrace_area(const TerraceMatrix& matrix);

// ---------------------------------------------------------------------------
// Serialization

/// "bandwidths,x1,...,xm" then "y_j,z_j1,...,z_jm" per row.
std::string terrace_to_csv(const TerraceMatrix& matrix);
TerraceMatrix terrace_from_csv(std::string_view text, int k);

/// JSON object with dim, xvec, yvec, zmat (rows by yvec), kde and grid.
/// `grid_json` is embedded verbatim and must itself be valid JSON.
std::string terrace_to_json(const TerraceMatrix& matrix, std::string_view grid_json);
TerraceMatrix terrace_from_json(std::string_view text);

/// "height,area" header then one row per height, ascending from 1.
std::string area_to_csv(const TerraceAreaSummary& summary);

}  // namespace pterrace
