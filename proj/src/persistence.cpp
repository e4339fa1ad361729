#include "pterrace/persistence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "pterrace/error.hpp"
#include "text_util.hpp"

namespace pterrace {

namespace {

// Cells of the cubical complex live on the doubled lattice of extent 2n-1 per
// axis: a cell's dimension is the number of odd coordinates, and its faces
// are the neighbours at +-1 along each odd axis.
class CubicalComplex {
public:
    CubicalComplex(std::span<const std::size_t> shape, std::span<const double> values)
        : d_(shape.size()) {
        extent_.resize(d_);
        stride_.assign(d_, 1);
        for (std::size_t a = 0; a < d_; ++a) extent_[a] = 2 * shape[a] - 1;
        for (std::size_t a = d_; a-- > 1;) stride_[a - 1] = stride_[a] * extent_[a];
        ncells_ = stride_[0] * extent_[0];

        dim_.resize(ncells_);
        value_.resize(ncells_);
        std::vector<std::size_t> c(d_, 0);
        for (std::size_t cell = 0; cell < ncells_; ++cell) {
            std::size_t rem = cell;
            int k = 0;
            for (std::size_t a = 0; a < d_; ++a) {
                c[a] = rem / stride_[a];
                rem %= stride_[a];
                k += static_cast<int>(c[a] & 1U);
            }
            dim_[cell] = static_cast<std::uint8_t>(k);
            if (k == 0) {
                std::size_t v = 0;
                for (std::size_t a = 0; a < d_; ++a) v = v * shape[a] + c[a] / 2;
                value_[cell] = values[v];
            }
        }
        // Min over vertices, built up one dimension at a time from the two
        // facets across the first odd axis.
        for (int k = 1; k <= static_cast<int>(d_); ++k)
            for (std::size_t cell = 0; cell < ncells_; ++cell) {
                if (dim_[cell] != k) continue;
                const std::size_t a = first_odd_axis(cell);
                value_[cell] = std::min(value_[cell - stride_[a]], value_[cell + stride_[a]]);
            }
    }

    std::size_t size() const { return ncells_; }
    int dim(std::size_t cell) const { return dim_[cell]; }
    double value(std::size_t cell) const { return value_[cell]; }

    template <typename F>
    void for_each_facet(std::size_t cell, F&& f) const {
        std::size_t rem = cell;
        for (std::size_t a = 0; a < d_; ++a) {
            const std::size_t ca = rem / stride_[a];
            rem %= stride_[a];
            if (ca & 1U) {
                f(cell - stride_[a]);
                f(cell + stride_[a]);
            }
        }
    }

private:
    std::size_t first_odd_axis(std::size_t cell) const {
        std::size_t rem = cell;
        for (std::size_t a = 0; a < d_; ++a) {
            const std::size_t ca = rem / stride_[a];
            rem %= stride_[a];
            if (ca & 1U) return a;
        }
        return d_;
    }

    std::size_t d_;
    std::vector<std::size_t> extent_;
    std::vector<std::size_t> stride_;
    std::size_t ncells_ = 0;
    std::vector<std::uint8_t> dim_;
    std::vector<double> value_;
};

using Column = std::vector<std::uint32_t>;

void add_into(Column& target, const Column& source, Column& scratch) {
    scratch.clear();
    std::set_symmetric_difference(target.begin(), target.end(), source.begin(), source.end(),
                                  std::back_inserter(scratch));
    target.swap(scratch);
}

}  // namespace

std::vector<PersistencePair> Barcode::in_dim(int k) const {
    std::vector<PersistencePair> out;
    for (const auto& p : pairs)
        if (p.dim == k) out.push_back(p);
    return out;
}

Barcode superlevel_persistence(std::span<const std::size_t> shape, std::span<const double> values,
                               int max_dim) {
    const int d = static_cast<int>(shape.size());
    if (d < 1 || d > 3) fail(ErrorKind::InvalidArgument, "grid dimension must be 1, 2 or 3");
    if (max_dim < 0 || max_dim > d)
        fail(ErrorKind::InvalidArgument, "max_dim " + std::to_string(max_dim) +
                                             " exceeds grid dimension " + std::to_string(d));
    std::size_t nvert = 1;
    for (auto n : shape) {
        if (n < 1) fail(ErrorKind::InvalidArgument, "grid shape entries must be positive");
        nvert *= n;
    }
    if (values.size() != nvert)
        fail(ErrorKind::InvalidArgument, "grid value count does not match its shape");
    for (double v : values)
        if (!std::isfinite(v)) fail(ErrorKind::Compute, "grid contains a non-finite value");

    const CubicalComplex cx(shape, values);
    const int top = std::min(max_dim + 1, d);

    // Filtration order over the cells we need.
    std::vector<std::uint32_t> order;
    order.reserve(cx.size());
    for (std::size_t c = 0; c < cx.size(); ++c)
        if (cx.dim(c) <= top) order.push_back(static_cast<std::uint32_t>(c));
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (cx.value(a) != cx.value(b)) return cx.value(a) > cx.value(b);
        if (cx.dim(a) != cx.dim(b)) return cx.dim(a) < cx.dim(b);
        return a < b;
    });
    std::vector<std::uint32_t> rank_of(cx.size(), UINT32_MAX);
    for (std::uint32_t r = 0; r < order.size(); ++r) rank_of[order[r]] = r;

    constexpr std::int64_t kNone = -1;
    std::vector<std::int64_t> column_of_low(order.size(), kNone);
    std::vector<Column> reduced(order.size());
    std::vector<char> is_low(order.size(), 0);
    std::vector<char> is_negative(order.size(), 0);

    Barcode out;
    out.max_dim = max_dim;
    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    out.grid_min = *mn;
    out.grid_max = *mx;

    Column col, scratch;
    for (int p = top; p >= 1; --p) {
        for (std::uint32_t r = 0; r < order.size(); ++r) {
            const std::uint32_t cell = order[r];
            if (cx.dim(cell) != p || is_low[r]) continue;  // cleared: positive and paired
            col.clear();
            cx.for_each_facet(cell, [&](std::size_t f) { col.push_back(rank_of[f]); });
            std::sort(col.begin(), col.end());
            while (!col.empty()) {
                const std::int64_t owner = column_of_low[col.back()];
                if (owner == kNone) break;
                add_into(col, reduced[static_cast<std::size_t>(owner)], scratch);
            }
            if (col.empty()) continue;
            const std::uint32_t low = col.back();
            column_of_low[low] = r;
            is_low[low] = 1;
            is_negative[r] = 1;
            reduced[r] = col;

            const double birth = cx.value(order[low]);
            const double death = cx.value(cell);
            if (birth != death && p - 1 <= max_dim)
                out.pairs.push_back({p - 1, birth, death, false});
        }
    }

    for (std::uint32_t r = 0; r < order.size(); ++r) {
        const int k = cx.dim(order[r]);
        if (k > max_dim || is_low[r] || is_negative[r]) continue;
        out.pairs.push_back({k, cx.value(order[r]), out.grid_min, true});
    }

    std::stable_sort(out.pairs.begin(), out.pairs.end(),
                     [](const PersistencePair& a, const PersistencePair& b) {
                         if (a.dim != b.dim) return a.dim < b.dim;
                         if (a.birth != b.birth) return a.birth > b.birth;
                         return a.death > b.death;
                     });
    return out;
}

Barcode superlevel_persistence(const ScalarGrid& grid, int max_dim) {
    return superlevel_persistence(grid.spec().resolution(), grid.values(), max_dim);
}

std::size_t betti_at(const Barcode& barcode, int k, double y) {
    std::size_t n = 0;
    for (const auto& p : barcode.pairs) {
        if (p.dim != k || y > p.birth) continue;
        if (p.death < y || (p.essential && p.death <= y)) ++n;
    }
    return n;
}

std::string barcode_to_csv(const Barcode& barcode, std::span<const std::string> comments) {
    std::string out;
    for (const auto& c : comments) out += c + '\n';
    out += "dim,birth,death,essential\n";
    for (const auto& p : barcode.pairs) {
        out += std::to_string(p.dim) + ',' + detail::format_exact(p.birth) + ',' +
               detail::format_exact(p.death) + ',' + (p.essential ? "1" : "0") + '\n';
    }
    return out;
}

}  // namespace pterrace
