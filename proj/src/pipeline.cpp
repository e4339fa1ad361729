#include "pterrace/pipeline.hpp"

#include <openssl/evp.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <json.hpp>
#include <thread>
#include <unistd.h>

#include "pterrace/error.hpp"
#include "pterrace/imageio.hpp"
#include "text_util.hpp"

namespace pterrace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::vector<double> BandwidthSweep::values() const {
    std::vector<double> v(count);
    if (count == 1) {
        v[0] = min;
        return v;
    }
    for (std::size_t i = 0; i < count; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(count - 1);
        if (i + 1 == count)
            v[i] = max;
        else if (log_spacing)
            v[i] = std::exp(std::log(min) + t * (std::log(max) - std::log(min)));
        else
            v[i] = min + t * (max - min);
    }
    return v;
}

// ---------------------------------------------------------------------------
// Config

namespace {

const char* const kOutputNames[] = {"matrix_csv", "matrix_json", "area_csv",
                                    "terrace_svg", "area_svg",   "barcodes_csv"};

bool known_output(const std::string& name) {
    for (auto n : kOutputNames)
        if (name == n) return true;
    return name.rfind("barcode_svg@", 0) == 0;
}

void validate(const PipelineConfig& c) {
    const auto& b = c.bandwidths;
    if (b.count < 1) fail(ErrorKind::Config, "bandwidth count must be >= 1");
    if (!(b.min > 0.0) || !std::isfinite(b.min) || !std::isfinite(b.max))
        fail(ErrorKind::Config, "bandwidths must be finite and positive");
    if (b.count > 1 && !(b.min < b.max))
        fail(ErrorKind::Config, "bandwidth min must be < max");
    if (c.grid.resolution.empty()) fail(ErrorKind::Config, "grid resolution is empty");
    for (auto r : c.grid.resolution)
        if (r < 2) fail(ErrorKind::Config, "grid resolution must be >= 2 per axis");
    if (c.grid.margin && !(*c.grid.margin >= 0.0)) fail(ErrorKind::Config, "margin must be >= 0");
    if (c.workers < 1) fail(ErrorKind::Config, "workers must be >= 1");
    if (c.k < 0 || c.k > 3) fail(ErrorKind::Config, "homological dimension k must be in 0..3");
    if (c.height_cap && *c.height_cap < 1) fail(ErrorKind::Config, "height cap must be >= 1");
    for (const auto& e : c.emit) {
        if (!known_output(e)) fail(ErrorKind::Config, "unknown output '" + e + "'");
        if (e.rfind("barcode_svg@", 0) == 0 && !detail::parse_double(e.substr(12)))
            fail(ErrorKind::Config, "barcode_svg@ needs a bandwidth value: '" + e + "'");
    }
    if (c.input.kind == InputSpec::Kind::Pgm && c.input.n_dark + c.input.n_boundary == 0)
        fail(ErrorKind::Config, "image input needs a positive sample count");
}

template <typename T>
T get_or(const ordered_json& j, const char* key, T fallback) {
    return j.contains(key) ? j.at(key).get<T>() : fallback;
}

}  // namespace

PipelineConfig config_from_json(const std::string& text) {
    PipelineConfig c;
    try {
        const auto j = ordered_json::parse(text);
        if (!j.is_object()) fail(ErrorKind::Config, "config must be a JSON object");
        if (j.contains("input")) {
            const auto& in = j.at("input");
            if (in.contains("csv")) {
                c.input.kind = InputSpec::Kind::Csv;
                c.input.source = in.at("csv").get<std::string>();
            } else if (in.contains("dataset")) {
                c.input.kind = InputSpec::Kind::Dataset;
                c.input.source = in.at("dataset").get<std::string>();
            } else if (in.contains("pgm")) {
                c.input.kind = InputSpec::Kind::Pgm;
                c.input.source = in.at("pgm").get<std::string>();
                c.input.n_dark = get_or<std::size_t>(in, "n_dark", c.input.n_dark);
                c.input.n_boundary = get_or<std::size_t>(in, "n_boundary", c.input.n_boundary);
                c.input.darkness = get_or<bool>(in, "darkness", c.input.darkness);
            } else {
                fail(ErrorKind::Config, "input needs one of 'csv', 'dataset' or 'pgm'");
            }
        }
        c.k = get_or<int>(j, "k", c.k);
        if (j.contains("bandwidths")) {
            const auto& b = j.at("bandwidths");
            c.bandwidths.min = get_or<double>(b, "min", c.bandwidths.min);
            c.bandwidths.max = get_or<double>(b, "max", c.bandwidths.max);
            c.bandwidths.count = get_or<std::size_t>(b, "count", c.bandwidths.count);
            const auto spacing = get_or<std::string>(b, "spacing", "linear");
            if (spacing != "linear" && spacing != "log")
                fail(ErrorKind::Config, "bandwidth spacing must be 'linear' or 'log'");
            c.bandwidths.log_spacing = spacing == "log";
        }
        if (j.contains("grid")) {
            const auto& g = j.at("grid");
            if (g.contains("resolution")) {
                const auto& r = g.at("resolution");
                c.grid.resolution = r.is_array() ? r.get<std::vector<std::size_t>>()
                                                 : std::vector<std::size_t>{r.get<std::size_t>()};
            }
            if (g.contains("box") && !g.at("box").is_null())
                c.grid.box = BoundingBox{g.at("box").at("lower").get<std::vector<double>>(),
                                         g.at("box").at("upper").get<std::vector<double>>()};
            if (g.contains("margin") && !g.at("margin").is_null())
                c.grid.margin = g.at("margin").get<double>();
        }
        if (j.contains("emit")) c.emit = j.at("emit").get<std::vector<std::string>>();
        c.workers = get_or<std::size_t>(j, "workers", c.workers);
        c.seed = get_or<std::uint64_t>(j, "seed", c.seed);
        c.out_dir = get_or<std::string>(j, "out_dir", c.out_dir.string());
        if (j.contains("height_cap") && !j.at("height_cap").is_null())
            c.height_cap = j.at("height_cap").get<long>();
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::Config, std::string("config: ") + e.what());
    }
    validate(c);
    return c;
}

namespace {

ordered_json config_json(const PipelineConfig& c) {
    ordered_json j;
    switch (c.input.kind) {
        case InputSpec::Kind::Csv: j["input"] = {{"csv", c.input.source}}; break;
        case InputSpec::Kind::Dataset: j["input"] = {{"dataset", c.input.source}}; break;
        case InputSpec::Kind::Pgm:
            j["input"] = {{"pgm", c.input.source},
                          {"n_dark", c.input.n_dark},
                          {"n_boundary", c.input.n_boundary},
                          {"darkness", c.input.darkness}};
            break;
    }
    j["k"] = c.k;
    j["bandwidths"] = {{"min", c.bandwidths.min},
                       {"max", c.bandwidths.max},
                       {"count", c.bandwidths.count},
                       {"spacing", c.bandwidths.log_spacing ? "log" : "linear"}};
    ordered_json g;
    g["resolution"] = c.grid.resolution;
    g["box"] = c.grid.box ? ordered_json{{"lower", c.grid.box->lower}, {"upper", c.grid.box->upper}}
                          : ordered_json(nullptr);
    g["margin"] = c.grid.margin ? ordered_json(*c.grid.margin) : ordered_json(nullptr);
    j["grid"] = g;
    j["emit"] = c.emit;
    j["workers"] = c.workers;
    j["seed"] = c.seed;
    j["out_dir"] = c.out_dir.string();
    j["height_cap"] = c.height_cap ? ordered_json(*c.height_cap) : ordered_json(nullptr);
    return j;
}

ordered_json grid_json(const GridSpec& g) {
    return {{"dim", g.dim()},
            {"resolution", std::vector<std::size_t>(g.resolution().begin(), g.resolution().end())},
            {"lower", g.box().lower},
            {"upper", g.box().upper},
            {"cell_rule", "min of vertex values (super-level cubical)"}};
}

}  // namespace

std::string config_to_json(const PipelineConfig& config) { return config_json(config).dump(2); }

PointCloud resolve_input(const PipelineConfig& c) {
    switch (c.input.kind) {
        case InputSpec::Kind::Csv: return load_csv(c.input.source);
        case InputSpec::Kind::Dataset: return generate_dataset(c.input.source, c.seed);
        case InputSpec::Kind::Pgm: {
            const GrayImage img = load_pgm(c.input.source);
            std::vector<PointCloud> parts;
            if (c.input.n_dark > 0)
                parts.push_back(sample_intensity(img, c.input.n_dark, c.input.darkness, c.seed));
            if (c.input.n_boundary > 0) parts.push_back(sample_boundary(img, c.input.n_boundary, c.seed));
            return concat(parts);
        }
    }
    fail(ErrorKind::Config, "unsupported input kind");
}

GridSpec resolve_grid(const PointCloud& cloud, const PipelineConfig& c) {
    auto res = c.grid.resolution;
    if (res.size() == 1) res.assign(cloud.dim(), res.front());
    if (res.size() != cloud.dim())
        fail(ErrorKind::Config, "grid resolution has " + std::to_string(res.size()) +
                                    " axes for a " + std::to_string(cloud.dim()) + "-d cloud");
    try {
        if (c.grid.box) return GridSpec(*c.grid.box, std::move(res));
        const double max_bw = c.bandwidths.values().back();
        if (c.grid.margin) return GridSpec(bounding_box(cloud, *c.grid.margin), std::move(res));
        return grid_spec_auto(cloud, max_bw, std::move(res));
    } catch (const Error& e) {
        fail(ErrorKind::Config, std::string("grid: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Sweep

SweepResult sweep(const PointCloud& cloud, const GridSpec& grid, std::span<const double> bandwidths,
                  int k, std::size_t workers) {
    const std::size_t n = bandwidths.size();
    if (n == 0) fail(ErrorKind::Config, "empty bandwidth sweep");
    if (k > static_cast<int>(grid.dim()))
        fail(ErrorKind::Config, "k = " + std::to_string(k) + " exceeds the grid dimension");

    std::vector<std::optional<Barcode>> slots(n);
    std::vector<double> seconds(n, 0.0);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};

    auto work = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) {
            const auto t0 = std::chrono::steady_clock::now();
            const char* stage = "kde";
            try {
                const ScalarGrid values = evaluate_kde(cloud, bandwidths[i], grid);
                stage = "persistence";
                slots[i] = superlevel_persistence(values, k);
            } catch (const Error& e) {
                errors[i] = std::make_exception_ptr(
                    Error(e.kind() == ErrorKind::InvalidArgument ? ErrorKind::Compute : e.kind(),
                          std::string("stage ") + stage + ", bandwidth index " + std::to_string(i) +
                              " (h=" + detail::format_exact(bandwidths[i]) + "): " + e.what()));
            } catch (...) {
                errors[i] = std::current_exception();
            }
            seconds[i] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        }
    };

    const std::size_t nthreads = std::min(std::max<std::size_t>(workers, 1), n);
    if (nthreads == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(nthreads);
        for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(work);
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    SweepResult r{grid, std::vector<double>(bandwidths.begin(), bandwidths.end()), {}, seconds, {}};
    std::vector<BettiStepFunction> steps;
    r.barcodes.reserve(n);
    steps.reserve(n);
    for (auto& s : slots) {
        r.barcodes.push_back(std::move(*s));
        steps.push_back(betti_step_function(r.barcodes.back(), k));
    }
    r.matrix = assemble_terrace(steps, r.bandwidths, k);
    return r;
}

// ---------------------------------------------------------------------------
// Files

std::string sha256_hex(const std::string& content) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(content.data(), content.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        fail(ErrorKind::Compute, "sha256 failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xF];
    }
    return out;
}

namespace {

fs::path temp_sibling(const fs::path& path) {
    return path.string() + ".tmp" + std::to_string(::getpid());
}

void write_raw(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::Io, "cannot write '" + path.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.close();
    if (!out) fail(ErrorKind::Io, "error writing '" + path.string() + "'");
}

}  // namespace

void write_file_atomic(const fs::path& path, const std::string& content) {
    const auto tmp = temp_sibling(path);
    write_raw(tmp, content);
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        fail(ErrorKind::Io, "cannot rename into '" + path.string() + "'");
    }
}

std::size_t default_workers(std::size_t fallback) {
    if (const char* env = std::getenv("PTERRACE_WORKERS")) {
        const auto v = detail::parse_int(detail::trim(env));
        if (!v || *v < 1) fail(ErrorKind::Config, "PTERRACE_WORKERS must be a positive integer");
        return static_cast<std::size_t>(*v);
    }
    return fallback;
}

// ---------------------------------------------------------------------------
// Pipeline

PipelineOutcome run_pipeline(const PipelineConfig& config) {
    validate(config);
    const PointCloud cloud = resolve_input(config);
    const GridSpec grid = resolve_grid(cloud, config);
    const auto bandwidths = config.bandwidths.values();

    PipelineOutcome out{sweep(cloud, grid, bandwidths, config.k, config.workers), {}, {}, {}};
    const auto& m = out.sweep.matrix;
    const std::string grid_text = grid_json(grid).dump();

    RenderOptions ropt;
    ropt.height_cap = config.height_cap;

    auto wants = [&](std::string_view name) {
        return std::find(config.emit.begin(), config.emit.end(), name) != config.emit.end();
    };
    if (wants("area_csv") || wants("area_svg")) {
        try {
            out.area = terrace_area(m);
        } catch (const Error& e) {
            fail(e.kind(), std::string("stage area: ") + e.what());
        }
    }

    // Produce every requested output in memory first.
    std::vector<std::pair<std::string, std::string>> staged;
    for (const auto& e : config.emit) {
        if (e == "matrix_csv") staged.emplace_back("terrace.csv", terrace_to_csv(m));
        else if (e == "matrix_json") staged.emplace_back("terrace.json", terrace_to_json(m, grid_text));
        else if (e == "area_csv") staged.emplace_back("area.csv", area_to_csv(*out.area));
        else if (e == "terrace_svg") staged.emplace_back("terrace.svg", render_terrace(m, ropt));
        else if (e == "area_svg") staged.emplace_back("area.svg", render_area(*out.area, ropt));
        else if (e == "barcodes_csv") {
            std::string text = grid_header_line(grid, 0.0) + "\n# kde: " + kKdeDescriptor + "\n";
            text += "bandwidth,dim,birth,death,essential\n";
            for (std::size_t i = 0; i < bandwidths.size(); ++i)
                for (const auto& p : out.sweep.barcodes[i].pairs)
                    text += detail::format_exact(bandwidths[i]) + ',' + std::to_string(p.dim) + ',' +
                            detail::format_exact(p.birth) + ',' + detail::format_exact(p.death) + ',' +
                            (p.essential ? "1" : "0") + '\n';
            staged.emplace_back("barcodes.csv", std::move(text));
        } else if (e.rfind("barcode_svg@", 0) == 0) {
            const double target = *detail::parse_double(e.substr(12));
            std::size_t best = 0;
            for (std::size_t i = 1; i < bandwidths.size(); ++i)
                if (std::abs(bandwidths[i] - target) < std::abs(bandwidths[best] - target)) best = i;
            const auto bars = out.sweep.barcodes[best].in_dim(config.k);
            const std::string title = "beta_" + std::to_string(config.k) + " barcode at bandwidth " +
                                      detail::format_fixed6(bandwidths[best]);
            staged.emplace_back("barcode_" + std::to_string(best) + ".svg",
                                render_bars(bars, {m.yvec.back(), m.yvec.front()}, ropt, title));
        }
    }

    std::error_code ec;
    fs::create_directories(config.out_dir, ec);
    if (ec) fail(ErrorKind::Io, "cannot create output directory '" + config.out_dir.string() + "'");

    std::vector<fs::path> temps;
    try {
        for (const auto& [name, content] : staged) {
            temps.push_back(temp_sibling(config.out_dir / name));
            write_raw(temps.back(), content);
        }
    } catch (...) {
        for (const auto& t : temps) fs::remove(t, ec);
        throw;
    }
    for (std::size_t i = 0; i < staged.size(); ++i) {
        fs::rename(temps[i], config.out_dir / staged[i].first, ec);
        if (ec) {
            for (std::size_t r = i; r < temps.size(); ++r) fs::remove(temps[r], ec);
            fail(ErrorKind::Io, "cannot rename output '" + staged[i].first + "'");
        }
        out.files[staged[i].first] = sha256_hex(staged[i].second);
    }

    ordered_json manifest;
    manifest["tool"] = "pterrace";
    manifest["config"] = config_json(config);
    manifest["kde"] = kKdeDescriptor;
    manifest["grid"] = grid_json(grid);
    manifest["points"] = cloud.size();
    manifest["bandwidths"] = bandwidths;
    manifest["seconds_per_bandwidth"] = out.sweep.seconds;
    manifest["max_height"] = m.max_height();
    ordered_json files = ordered_json::object();
    for (const auto& [name, content] : staged) files[name] = {{"sha256", out.files[name]}, {"bytes", content.size()}};
    manifest["outputs"] = files;
    out.manifest_json = manifest.dump(2) + '\n';
    write_file_atomic(config.out_dir / "manifest.json", out.manifest_json);
    return out;
}

}  // namespace pterrace
