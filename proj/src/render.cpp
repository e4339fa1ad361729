#include "pterrace/render.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "pterrace/error.hpp"
#include "text_util.hpp"

namespace pterrace {

namespace {

// viridis sampled at 13 evenly spaced points, behind a light neutral for 0.
constexpr std::string_view kViridis[] = {
    "#f2f2f2", "#440154", "#481f70", "#443983", "#3b528b", "#31688e", "#287c8e", "#21918c",
    "#20a486", "#35b779", "#5ec962", "#90d743", "#c8e020", "#fde725",
};
constexpr std::string_view kGray[] = {
    "#ffffff", "#e6e6e6", "#d4d4d4", "#c2c2c2", "#b0b0b0", "#9e9e9e", "#8c8c8c", "#7a7a7a",
    "#686868", "#565656", "#444444", "#323232", "#202020", "#0e0e0e",
};

using detail::format_fixed6;

struct Frame {
    double left = 80, right = 130, top = 30, bottom = 60;
    double width, height;

    Frame(const RenderOptions& o) : width(o.width_px), height(o.height_px) {
        if (!o.annotate) left = right = top = bottom = 10;
    }
    double plot_w() const { return width - left - right; }
    double plot_h() const { return height - top - bottom; }
};

std::string svg_open(const Frame& f) {
    return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
           "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
           format_fixed6(f.width) + "\" height=\"" + format_fixed6(f.height) + "\" viewBox=\"0 0 " +
           format_fixed6(f.width) + " " + format_fixed6(f.height) + "\">\n" +
           "<rect x=\"0.000000\" y=\"0.000000\" width=\"" + format_fixed6(f.width) +
           "\" height=\"" + format_fixed6(f.height) + "\" fill=\"#ffffff\"/>\n";
}

std::string rect(double x, double y, double w, double h, std::string_view fill,
                 std::string_view extra = {}) {
    std::string s = "<rect x=\"" + format_fixed6(x) + "\" y=\"" + format_fixed6(y) + "\" width=\"" +
                    format_fixed6(w) + "\" height=\"" + format_fixed6(h) + "\" fill=\"" +
                    std::string(fill) + "\"";
    if (!extra.empty()) s += ' ' + std::string(extra);
    return s + "/>\n";
}

std::string line(double x1, double y1, double x2, double y2, std::string_view stroke, double width) {
    return "<line x1=\"" + format_fixed6(x1) + "\" y1=\"" + format_fixed6(y1) + "\" x2=\"" +
           format_fixed6(x2) + "\" y2=\"" + format_fixed6(y2) + "\" stroke=\"" +
           std::string(stroke) + "\" stroke-width=\"" + format_fixed6(width) + "\"/>\n";
}

std::string text(double x, double y, std::string_view anchor, std::string_view body,
                 double rotate = 0.0) {
    std::string s = "<text x=\"" + format_fixed6(x) + "\" y=\"" + format_fixed6(y) +
                    "\" font-family=\"sans-serif\" font-size=\"12.000000\" text-anchor=\"" +
                    std::string(anchor) + "\"";
    if (rotate != 0.0)
        s += " transform=\"rotate(" + format_fixed6(rotate) + " " + format_fixed6(x) + " " +
             format_fixed6(y) + ")\"";
    return s + ">" + std::string(body) + "</text>\n";
}

std::string axes(const Frame& f, std::pair<double, double> xr, std::pair<double, double> yr,
                 std::string_view xlabel, std::string_view ylabel, std::string_view title) {
    std::string s;
    const double x0 = f.left, y0 = f.top + f.plot_h(), x1 = f.left + f.plot_w(), y1 = f.top;
    s += line(x0, y0, x1, y0, "#000000", 1.0);
    s += line(x0, y0, x0, y1, "#000000", 1.0);
    s += text(x0, y0 + 18, "middle", format_fixed6(xr.first));
    s += text(x1, y0 + 18, "middle", format_fixed6(xr.second));
    s += text(x0 - 6, y0 + 4, "end", format_fixed6(yr.first));
    s += text(x0 - 6, y1 + 4, "end", format_fixed6(yr.second));
    s += text((x0 + x1) / 2, y0 + 42, "middle", xlabel);
    s += text(x0 - 58, (y0 + y1) / 2, "middle", ylabel, -90.0);
    s += text((x0 + x1) / 2, y1 - 10, "middle", title);
    return s;
}

}  // namespace

std::span<const std::string_view> palette_colors(std::string_view name) {
    if (name == "viridis") return kViridis;
    if (name == "gray") return kGray;
    fail(ErrorKind::InvalidArgument, "unknown palette '" + std::string(name) + "'");
}

std::string render_terrace(const TerraceMatrix& matrix, const RenderOptions& options) {
    if (matrix.cols() == 0 || matrix.rows() == 0)
        fail(ErrorKind::InvalidArgument, "cannot render an empty terrace");
    if (options.height_cap && *options.height_cap < 1)
        fail(ErrorKind::InvalidArgument, "height cap must be >= 1");
    const auto colors = palette_colors(options.palette);
    const long cap = std::min(options.height_cap.value_or(kPaletteSteps), kPaletteSteps);
    auto bucket = [cap](long z) { return std::min(z, cap); };

    const Frame f(options);
    const double xmin = matrix.xvec.front(), xmax = matrix.xvec.back();
    const double ymin = matrix.yvec.back(), ymax = matrix.yvec.front();
    // Degenerate axes still get a drawable extent.
    const double xspan = xmax > xmin ? xmax - xmin : 1.0;
    const double yspan = ymax > ymin ? ymax - ymin : 1.0;
    auto px = [&](double x) { return f.left + (x - xmin) / xspan * f.plot_w(); };
    auto py = [&](double y) { return f.top + (ymax - y) / yspan * f.plot_h(); };

    std::string svg = svg_open(f);
    svg += rect(f.left, f.top, f.plot_w(), f.plot_h(), colors[0]);

    std::set<long> present;
    for (std::size_t j = 0; j < matrix.rows(); ++j)
        for (std::size_t i = 0; i < matrix.cols(); ++i) present.insert(bucket(matrix.z(j, i)));

    // Runs of equal colour along each row; the last column and the bottom row
    // bound cells and paint nothing themselves.
    svg += "<g shape-rendering=\"crispEdges\">\n";
    for (std::size_t j = 0; j + 1 < matrix.rows(); ++j) {
        const double top = py(matrix.yvec[j]);
        const double h = py(matrix.yvec[j + 1]) - top;
        std::size_t i = 0;
        while (i + 1 < matrix.cols()) {
            const long b = bucket(matrix.z(j, i));
            std::size_t e = i + 1;
            while (e + 1 < matrix.cols() && bucket(matrix.z(j, e)) == b) ++e;
            if (b != 0) {
                const double left = px(matrix.xvec[i]);
                svg += rect(left, top, px(matrix.xvec[e]) - left, h, colors[static_cast<std::size_t>(b)]);
            }
            i = e;
        }
    }
    svg += "</g>\n";

    if (options.annotate) {
        const std::string title = "beta_" + std::to_string(matrix.dim) + " persistence terrace";
        svg += axes(f, {xmin, xmax}, {ymin, ymax}, "smoothing parameter (bandwidth)",
                    "filtration value", title);
        double ly = f.top;
        const double lx = f.left + f.plot_w() + 20;
        svg += text(lx, ly + 4, "start", "height");
        for (long b : present) {
            ly += 18;
            // The top bucket collects everything at or above the cap.
            const std::string label =
                b == cap ? "≥" + std::to_string(cap) : std::to_string(b);
            svg += rect(lx, ly - 10, 14, 12, colors[static_cast<std::size_t>(b)],
                        "stroke=\"#000000\" stroke-width=\"0.500000\"");
            svg += text(lx + 20, ly, "start", label);
        }
    }
    svg += "</svg>\n";
    return svg;
}

std::string render_area(const TerraceAreaSummary& summary, const RenderOptions& options) {
    const auto colors = palette_colors(options.palette);
    const Frame f(options);
    std::string svg = svg_open(f);
    const std::size_t nh = summary.by_height.size();
    const double slot = f.plot_w() / static_cast<double>(std::max<std::size_t>(nh, 1));
    const double base = f.top + f.plot_h();
    for (std::size_t h = 0; h < nh; ++h) {
        const double a = std::clamp(summary.by_height[h], 0.0, 1.0);
        const double bh = a * f.plot_h();
        const std::size_t c = std::min<std::size_t>(h + 1, static_cast<std::size_t>(kPaletteSteps));
        svg += rect(f.left + slot * static_cast<double>(h) + slot * 0.1, base - bh, slot * 0.8, bh,
                    colors[c]);
        if (options.annotate)
            svg += text(f.left + slot * (static_cast<double>(h) + 0.5), base + 14, "middle",
                        std::to_string(h + 1));
    }
    if (options.annotate)
        svg += axes(f, {0.0, static_cast<double>(nh)}, {0.0, 1.0}, "terrace height", "standardized area",
                    "terrace area plot");
    svg += "</svg>\n";
    return svg;
}

std::vector<PersistencePair> bars_from_step_function(const BettiStepFunction& fn, int k) {
    std::vector<PersistencePair> done;
    std::vector<double> open;  // births of live bars, oldest first
    long current = 0;
    for (std::size_t q = 0; q < fn.breakpoints.size(); ++q) {
        const double b = fn.breakpoints[q];
        for (; current < fn.counts[q]; ++current) open.push_back(b);
        for (; current > fn.counts[q]; --current) {
            done.push_back({k, open.back(), b, false});
            open.pop_back();
        }
    }
    // counts.back() is zero for well-formed step functions; anything still
    // open runs to the bottom breakpoint.
    for (auto it = open.rbegin(); it != open.rend(); ++it)
        done.push_back({k, *it, fn.breakpoints.back(), false});
    std::stable_sort(done.begin(), done.end(), [](const auto& a, const auto& b) {
        return (a.birth - a.death) > (b.birth - b.death);
    });
    return done;
}

std::string render_bars(std::span<const PersistencePair> bars, std::pair<double, double> y_range,
                        const RenderOptions& options, std::string_view title) {
    const Frame f(options);
    const double ymin = y_range.first, ymax = y_range.second;
    const double yspan = ymax > ymin ? ymax - ymin : 1.0;
    auto py = [&](double y) { return f.top + (ymax - y) / yspan * f.plot_h(); };
    const auto colors = palette_colors(options.palette);

    std::string svg = svg_open(f);
    const double slot = f.plot_w() / static_cast<double>(bars.size() + 1);
    for (std::size_t b = 0; b < bars.size(); ++b) {
        const double x = f.left + slot * static_cast<double>(b + 1);
        svg += line(x, py(bars[b].death), x, py(bars[b].birth), colors[1],
                    std::clamp(slot * 0.5, 1.0, 6.0));
    }
    if (options.annotate)
        svg += axes(f, {0.0, static_cast<double>(bars.size())}, {ymin, ymax}, "bar", "filtration value",
                    title);
    svg += "</svg>\n";
    return svg;
}

std::string render_barcode_slice(const TerraceMatrix& matrix, std::size_t column,
                                 const RenderOptions& options) {
    const auto fn = slice_at_bandwidth(matrix, column);
    const auto bars = bars_from_step_function(fn, matrix.dim);
    const std::string title = "beta_" + std::to_string(matrix.dim) + " barcode at bandwidth " +
                              format_fixed6(matrix.xvec[column]);
    return render_bars(bars, {matrix.yvec.back(), matrix.yvec.front()}, options, title);
}

}  // namespace pterrace
