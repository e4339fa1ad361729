#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pterrace/persistence.hpp"
#include "pterrace/terrace.hpp"

namespace pterrace {

struct RenderOptions {
    /// Heights >= cap share one colour and the legend entry "≥cap".
    std::optional<long> height_cap;
    std::string palette = "viridis";
    int width_px = 800;
    int height_px = 600;
    bool annotate = true;
};

/// Discrete palettes: entry 0 is the height-zero background, entries 1..13
/// the layer heights. "viridis" (default, colour-blind safe) and "gray".
std::span<const std::string_view> palette_colors(std::string_view name);
inline constexpr long kPaletteSteps = 13;

/// Satellite view: x = bandwidth, y = filtration, colour = height. The cell
/// (x_i, x_{i+1}) x (y_{j+1}, y_j) is painted with z(j, i).
std::string render_terrace(const TerraceMatrix& matrix, const RenderOptions& options);

/// Bar chart of standardized area against height (h >= 1) on a [0, 1] axis.
std::string render_area(const TerraceAreaSummary& summary, const RenderOptions& options);

/// Vertical barcode over the filtration range [y_lo, y_hi]: one segment per
/// bar from death to birth.
std::string render_bars(std::span<const PersistencePair> bars, std::pair<double, double> y_range,
                        const RenderOptions& options, std::string_view title);

/// Barcode for one terrace column, on the terrace's y-axis. Bars come from
/// bars_from_step_function.
std::string render_barcode_slice(const TerraceMatrix& matrix, std::size_t column,
                                 const RenderOptions& options);

/// A multiset of bars whose containment count reproduces the step function
/// at every y. Increases open bars; decreases close the most recently opened.
std::vector<PersistencePair> bars_from_step_function(const BettiStepFunction& f, int k);

}  // namespace pterrace
