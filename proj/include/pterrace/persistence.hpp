#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pterrace/kde.hpp"

namespace pterrace {

/// One bar of a super-level barcode: born at the higher value, dies at the
/// lower one (birth >= death).
struct PersistencePair {
    int dim = 0;
    double birth = 0.0;
    double death = 0.0;
    bool essential = false;

    friend bool operator==(const PersistencePair&, const PersistencePair&) = default;
};

struct Barcode {
    std::vector<PersistencePair> pairs;
    int max_dim = 0;
    double grid_min = 0.0;
    double grid_max = 0.0;

    std::vector<PersistencePair> in_dim(int k) const;

    friend bool operator==(const Barcode&, const Barcode&) = default;
};

/// Barcode of the filtration {v : f(v) >= y} for y decreasing, computed on the
/// cubical complex of the grid. Edges, squares and cubes enter at the minimum
/// of their vertex values. Columns are ordered by (value descending, cell
/// dimension, cell index) and reduced over Z/2 with clearing.
///
/// Zero-persistence pairs are dropped. Essential classes are reported with
/// death equal to the grid minimum.
Barcode superlevel_persistence(std::span<const std::size_t> shape, std::span<const double> values,
                               int max_dim);
Barcode superlevel_persistence(const ScalarGrid& grid, int max_dim);

/// beta_k of the super-level set at y: finite bars with death < y <= birth,
/// plus essential bars with death <= y <= birth (an essential class is still
/// alive at the grid minimum).
std::size_t betti_at(const Barcode& barcode, int k, double y);

/// Rows "dim,birth,death,essential" after the given comment header lines.
std::string barcode_to_csv(const Barcode& barcode, std::span<const std::string> comments);

}  // namespace pterrace
