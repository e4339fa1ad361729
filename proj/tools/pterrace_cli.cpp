// pterrace command-line tool. Talks to the library only through the C API.
//
// Exit codes: 0 success, 2 configuration error, 3 data error, 4 compute error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pterrace/pterrace.h"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitCompute = 4;

int exit_code(pt_status s) {
    switch (s) {
        case PT_OK: return 0;
        case PT_ERR_INVALID_ARGUMENT:
        case PT_ERR_CONFIG: return kExitConfig;
        case PT_ERR_DATA:
        case PT_ERR_IO: return kExitData;
        default: return kExitCompute;
    }
}

struct Failure {
    int code;
};

void check(pt_status s, const char* what) {
    if (s == PT_OK) return;
    std::cerr << "pterrace: " << what << ": " << pt_status_name(s) << ": " << pt_last_error() << "\n";
    throw Failure{exit_code(s)};
}

[[noreturn]] void config_error(const std::string& msg) {
    std::cerr << "pterrace: " << msg << "\n";
    throw Failure{kExitConfig};
}

template <typename T, void (*Free)(T*)>
struct Deleter {
    void operator()(T* p) const { Free(p); }
};
using Cloud = std::unique_ptr<pt_cloud, Deleter<pt_cloud, pt_cloud_free>>;
using Image = std::unique_ptr<pt_image, Deleter<pt_image, pt_image_free>>;
using BarcodeHandle = std::unique_ptr<pt_barcode, Deleter<pt_barcode, pt_barcode_free>>;
using Terrace = std::unique_ptr<pt_terrace, Deleter<pt_terrace, pt_terrace_free>>;
using Area = std::unique_ptr<pt_area, Deleter<pt_area, pt_area_free>>;

std::vector<std::size_t> parse_resolution(const std::string& text) {
    std::vector<std::size_t> res;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) {
        try {
            std::size_t used = 0;
            const long v = std::stol(item, &used);
            if (used != item.size() || v < 2) throw std::invalid_argument(item);
            res.push_back(static_cast<std::size_t>(v));
        } catch (const std::exception&) {
            config_error("--grid-res expects integers >= 2 separated by commas, got '" + text + "'");
        }
    }
    if (res.empty()) config_error("--grid-res is empty");
    return res;
}

std::vector<std::string> split_list(const std::vector<std::string>& items) {
    std::vector<std::string> out;
    for (const auto& it : items) {
        std::stringstream ss(it);
        for (std::string s; std::getline(ss, s, ',');)
            if (!s.empty()) out.push_back(s);
    }
    return out;
}

// Input selection shared by terrace, slice and the cloud-producing commands.
struct InputFlags {
    std::string csv;
    std::string dataset;
    std::string pgm;
    std::size_t n_dark = 5000;
    std::size_t n_boundary = 1500;
    bool bright = false;

    void add(CLI::App* app) {
        app->add_option("--input", csv, "Point-cloud CSV");
        app->add_option("--dataset", dataset, "Named synthetic dataset");
        app->add_option("--pgm", pgm, "Grayscale PGM image to sample");
        app->add_option("--n-dark", n_dark, "Intensity-sampled points for --pgm");
        app->add_option("--n-boundary", n_boundary, "Perimeter points for --pgm");
        app->add_flag("--bright", bright, "Sample bright pixels instead of dark ones");
    }
    int count() const { return !csv.empty() + !dataset.empty() + !pgm.empty(); }

    nlohmann::json to_json() const {
        if (!csv.empty()) return {{"csv", csv}};
        if (!dataset.empty()) return {{"dataset", dataset}};
        return {{"pgm", pgm}, {"n_dark", n_dark}, {"n_boundary", n_boundary}, {"darkness", !bright}};
    }

    Cloud load(std::uint64_t seed) const {
        if (count() != 1) config_error("exactly one of --input, --dataset, --pgm is required");
        pt_cloud* c = nullptr;
        if (!csv.empty()) {
            check(pt_cloud_load_csv(csv.c_str(), &c), "loading point cloud");
        } else if (!dataset.empty()) {
            check(pt_cloud_generate(dataset.c_str(), seed, &c), "generating dataset");
        } else {
            pt_image* img = nullptr;
            check(pt_image_load_pgm(pgm.c_str(), &img), "loading image");
            Image holder(img);
            check(pt_image_sample(img, n_dark, n_boundary, bright ? 0 : 1, seed, &c), "sampling image");
        }
        return Cloud(c);
    }
};

void write_cloud(const pt_cloud* cloud, const std::string& out) {
    if (!out.empty() && out != "-") {
        check(pt_cloud_save_csv(cloud, out.c_str()), "writing point cloud");
        return;
    }
    const std::size_t d = pt_cloud_dim(cloud), n = pt_cloud_size(cloud);
    std::vector<double> coords(n * d);
    check(pt_cloud_coords(cloud, coords.data(), coords.size()), "reading coordinates");
    std::printf("# pterrace pointcloud d=%zu\n", d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t a = 0; a < d; ++a) std::printf(a + 1 < d ? "%.17g," : "%.17g\n", coords[i * d + a]);
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) config_error("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pterrace: persistence terraces of point clouds"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "Write a named synthetic dataset as CSV");
    std::string gen_name, gen_out;
    std::uint64_t gen_seed = 1;
    gen->add_option("dataset", gen_name, "three-circles | two-noisy-circles | density-pair | size-pair | four-shapes")
        ->required();
    gen->add_option("--seed", gen_seed, "Random seed");
    gen->add_option("--out,-o", gen_out, "Output CSV (default stdout)");

    // terrace
    auto* ter = app.add_subcommand("terrace", "Run the full bandwidth sweep and write outputs");
    InputFlags ter_in;
    ter_in.add(ter);
    std::string ter_config, ter_grid, ter_out;
    std::optional<int> ter_k;
    std::optional<double> ter_bw_min, ter_bw_max, ter_margin;
    std::optional<std::size_t> ter_bw_count, ter_workers;
    std::optional<std::uint64_t> ter_seed;
    std::optional<long> ter_cap;
    std::vector<std::string> ter_emit;
    bool ter_log = false;
    ter->add_option("--config", ter_config, "JSON config file; flags override it");
    ter->add_option("--k", ter_k, "Homological dimension");
    ter->add_option("--bw-min", ter_bw_min, "Smallest bandwidth");
    ter->add_option("--bw-max", ter_bw_max, "Largest bandwidth");
    ter->add_option("--bw-count", ter_bw_count, "Number of bandwidths");
    ter->add_flag("--bw-log", ter_log, "Log-spaced bandwidths");
    ter->add_option("--grid-res", ter_grid, "Vertices per axis, e.g. 64 or 64,96");
    ter->add_option("--margin", ter_margin, "Absolute grid margin (default 3 x max bandwidth)");
    ter->add_option("--workers", ter_workers, "Worker threads (default $PTERRACE_WORKERS or 1)");
    ter->add_option("--seed", ter_seed, "Random seed for generated or sampled input");
    ter->add_option("--out-dir", ter_out, "Output directory");
    ter->add_option("--emit", ter_emit,
                    "Outputs: matrix_csv,matrix_json,area_csv,terrace_svg,area_svg,barcodes_csv,"
                    "barcode_svg@<bandwidth>")
        ->delimiter(',');
    ter->add_option("--height-cap", ter_cap, "Heights >= cap share one colour");

    // slice
    auto* sl = app.add_subcommand("slice", "Barcode at a single bandwidth");
    InputFlags sl_in;
    sl_in.add(sl);
    double sl_bw = 0.0;
    int sl_k = 1;
    std::string sl_grid = "64", sl_out, sl_svg;
    double sl_margin = -1.0;
    std::uint64_t sl_seed = 1;
    sl->add_option("--bandwidth", sl_bw, "Bandwidth")->required();
    sl->add_option("--k", sl_k, "Dimension drawn in the SVG");
    sl->add_option("--grid-res", sl_grid, "Vertices per axis");
    sl->add_option("--margin", sl_margin, "Absolute grid margin (default 3 x bandwidth)");
    sl->add_option("--seed", sl_seed, "Random seed");
    sl->add_option("--out,-o", sl_out, "Barcode CSV output")->required();
    sl->add_option("--svg", sl_svg, "Barcode SVG output");

    // area
    auto* ar = app.add_subcommand("area", "Recompute the terrace area summary from a matrix file");
    std::string ar_in, ar_out, ar_svg;
    int ar_k = 1;
    ar->add_option("--in", ar_in, "terrace.csv or terrace.json")->required();
    ar->add_option("--k", ar_k, "Dimension label for CSV input");
    ar->add_option("--out,-o", ar_out, "Area CSV output")->required();
    ar->add_option("--svg", ar_svg, "Area plot SVG output");

    // sample-image
    auto* si = app.add_subcommand("sample-image", "Sample a PGM image into a point-cloud CSV");
    std::string si_pgm, si_out;
    std::size_t si_n = 5000, si_boundary = 1500;
    bool si_bright = false;
    std::uint64_t si_seed = 1;
    si->add_option("--pgm", si_pgm, "Input PGM (P2 or P5)")->required();
    si->add_option("--n", si_n, "Intensity-sampled points");
    si->add_option("--boundary", si_boundary, "Perimeter points");
    si->add_flag("--bright", si_bright, "Favour bright pixels instead of dark ones");
    si->add_option("--seed", si_seed, "Random seed");
    si->add_option("--out,-o", si_out, "Output CSV (default stdout)");

    // honeycomb
    auto* hc = app.add_subcommand("honeycomb", "Write the synthetic cell-wall test image");
    std::string hc_out;
    std::uint64_t hc_seed = 1;
    bool hc_ascii = false;
    hc->add_option("--out,-o", hc_out, "Output PGM")->required();
    hc->add_option("--seed", hc_seed, "Random seed");
    hc->add_flag("--ascii", hc_ascii, "Write P2 instead of P5");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    try {
        if (gen->parsed()) {
            pt_cloud* c = nullptr;
            check(pt_cloud_generate(gen_name.c_str(), gen_seed, &c), "generate");
            Cloud cloud(c);
            write_cloud(cloud.get(), gen_out);
            if (!gen_out.empty() && gen_out != "-")
                std::cerr << "wrote " << pt_cloud_size(c) << " points to " << gen_out << "\n";
        } else if (ter->parsed()) {
            nlohmann::json cfg = nlohmann::json::object();
            if (!ter_config.empty()) {
                try {
                    cfg = nlohmann::json::parse(read_text(ter_config));
                } catch (const nlohmann::json::exception& e) {
                    config_error(std::string("config file: ") + e.what());
                }
            }
            if (ter_in.count() > 1) config_error("give at most one of --input, --dataset, --pgm");
            if (ter_in.count() == 1) cfg["input"] = ter_in.to_json();
            if (ter_k) cfg["k"] = *ter_k;
            if (ter_bw_min) cfg["bandwidths"]["min"] = *ter_bw_min;
            if (ter_bw_max) cfg["bandwidths"]["max"] = *ter_bw_max;
            if (ter_bw_count) cfg["bandwidths"]["count"] = *ter_bw_count;
            if (ter_log) cfg["bandwidths"]["spacing"] = "log";
            if (!ter_grid.empty()) cfg["grid"]["resolution"] = parse_resolution(ter_grid);
            if (ter_margin) cfg["grid"]["margin"] = *ter_margin;
            if (ter_seed) cfg["seed"] = *ter_seed;
            if (!ter_out.empty()) cfg["out_dir"] = ter_out;
            if (!ter_emit.empty()) cfg["emit"] = split_list(ter_emit);
            if (ter_cap) cfg["height_cap"] = *ter_cap;
            if (ter_workers) {
                cfg["workers"] = *ter_workers;
            } else if (!cfg.contains("workers")) {
                std::size_t w = 1;
                check(pt_default_workers(1, &w), "PTERRACE_WORKERS");
                cfg["workers"] = w;
            }

            char* manifest = nullptr;
            check(pt_pipeline_run(cfg.dump().c_str(), &manifest), "terrace");
            const auto m = nlohmann::json::parse(manifest);
            pt_string_free(manifest);
            std::cout << "points: " << m["points"] << ", bandwidths: " << m["bandwidths"].size()
                      << ", max height: " << m["max_height"] << "\n";
            for (const auto& [name, info] : m["outputs"].items())
                std::cout << "  " << name << "  sha256=" << info["sha256"].get<std::string>() << "\n";
        } else if (sl->parsed()) {
            Cloud cloud = sl_in.load(sl_seed);
            const auto res = parse_resolution(sl_grid);
            pt_barcode* b = nullptr;
            check(pt_barcode_compute(cloud.get(), sl_bw, res.data(), res.size(), sl_margin,
                                     static_cast<int>(pt_cloud_dim(cloud.get())) - 1, &b),
                  "slice");
            BarcodeHandle barcode(b);
            check(pt_barcode_save_csv(b, sl_out.c_str()), "writing barcode");
            if (!sl_svg.empty()) check(pt_barcode_render_svg(b, sl_k, sl_svg.c_str()), "rendering barcode");
            std::cout << pt_barcode_pair_count(b) << " pairs\n";
        } else if (ar->parsed()) {
            pt_terrace* t = nullptr;
            check(pt_terrace_load(ar_in.c_str(), ar_k, &t), "reading terrace");
            Terrace terrace(t);
            pt_area* a = nullptr;
            check(pt_terrace_area(t, &a), "area");
            Area area(a);
            check(pt_area_save_csv(a, ar_out.c_str()), "writing area");
            if (!ar_svg.empty()) check(pt_area_render_svg(a, ar_svg.c_str()), "rendering area");
        } else if (si->parsed()) {
            pt_image* img = nullptr;
            check(pt_image_load_pgm(si_pgm.c_str(), &img), "loading image");
            Image image(img);
            pt_cloud* c = nullptr;
            check(pt_image_sample(img, si_n, si_boundary, si_bright ? 0 : 1, si_seed, &c), "sampling");
            Cloud cloud(c);
            write_cloud(c, si_out);
        } else if (hc->parsed()) {
            pt_image* img = nullptr;
            check(pt_image_synthetic_honeycomb(hc_seed, &img), "honeycomb");
            Image image(img);
            check(pt_image_save_pgm(img, hc_out.c_str(), hc_ascii ? 0 : 1), "writing image");
        }
    } catch (const Failure& f) {
        return f.code;
    }
    return 0;
}
