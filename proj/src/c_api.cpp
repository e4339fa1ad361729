// extern "C" surface over the C++ core. Each handle wraps a value type; all
// exceptions stop here and become pt_status codes.

#include "pterrace/pterrace.h"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <new>
#include <sstream>
#include <string>

#include "pterrace/error.hpp"
#include "pterrace/imageio.hpp"
#include "pterrace/kde.hpp"
#include "pterrace/persistence.hpp"
#include "pterrace/pipeline.hpp"
#include "pterrace/pointcloud.hpp"
#include "pterrace/render.hpp"
#include "pterrace/terrace.hpp"

using namespace pterrace;

struct pt_cloud {
    PointCloud value;
};
struct pt_image {
    GrayImage value;
};
struct pt_barcode {
    Barcode value;
    GridSpec grid;
    double bandwidth;
};
struct pt_terrace {
    TerraceMatrix value;
};
struct pt_area {
    TerraceAreaSummary value;
};

namespace {

thread_local std::string g_last_error;

pt_status to_status(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidArgument: return PT_ERR_INVALID_ARGUMENT;
        case ErrorKind::Config: return PT_ERR_CONFIG;
        case ErrorKind::Data: return PT_ERR_DATA;
        case ErrorKind::Io: return PT_ERR_IO;
        case ErrorKind::Compute: return PT_ERR_COMPUTE;
        case ErrorKind::OutOfRange: return PT_ERR_OUT_OF_RANGE;
    }
    return PT_ERR_INTERNAL;
}

template <typename F>
pt_status guard(F&& body) {
    g_last_error.clear();
    try {
        body();
        return PT_OK;
    } catch (const Error& e) {
        g_last_error = e.what();
        return to_status(e.kind());
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return PT_ERR_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return PT_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return PT_ERR_INTERNAL;
    }
}

void require(const void* p, const char* what) {
    if (!p) fail(ErrorKind::InvalidArgument, std::string(what) + " is null");
}

std::string read_file(const char* path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Data, std::string("cannot open '") + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

}  // namespace

extern "C" {

const char* pt_version(void) { return "1.0.0"; }
const char* pt_last_error(void) { return g_last_error.c_str(); }

const char* pt_status_name(pt_status status) {
    switch (status) {
        case PT_OK: return "ok";
        case PT_ERR_INVALID_ARGUMENT: return "invalid argument";
        case PT_ERR_CONFIG: return "configuration error";
        case PT_ERR_DATA: return "data error";
        case PT_ERR_IO: return "i/o error";
        case PT_ERR_COMPUTE: return "compute error";
        case PT_ERR_OUT_OF_RANGE: return "out of range";
        case PT_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

void pt_string_free(char* s) { delete[] s; }

// ---- point clouds ---------------------------------------------------------

pt_status pt_cloud_load_csv(const char* path, pt_cloud** out) {
    return guard([&] {
        require(path, "path");
        require(out, "out");
        *out = new pt_cloud{load_csv(path)};
    });
}

pt_status pt_cloud_from_coords(size_t dim, const double* coords, size_t n_points, pt_cloud** out) {
    return guard([&] {
        require(out, "out");
        if (n_points > 0) require(coords, "coords");
        *out = new pt_cloud{PointCloud(dim, std::vector<double>(coords, coords + dim * n_points))};
    });
}

pt_status pt_cloud_generate(const char* dataset, uint64_t seed, pt_cloud** out) {
    return guard([&] {
        require(dataset, "dataset");
        require(out, "out");
        *out = new pt_cloud{generate_dataset(dataset, seed)};
    });
}

pt_status pt_cloud_save_csv(const pt_cloud* cloud, const char* path) {
    return guard([&] {
        require(cloud, "cloud");
        require(path, "path");
        write_file_atomic(path, to_csv(cloud->value));
    });
}

size_t pt_cloud_size(const pt_cloud* cloud) { return cloud ? cloud->value.size() : 0; }
size_t pt_cloud_dim(const pt_cloud* cloud) { return cloud ? cloud->value.dim() : 0; }

pt_status pt_cloud_coords(const pt_cloud* cloud, double* out, size_t capacity) {
    return guard([&] {
        require(cloud, "cloud");
        const auto c = cloud->value.coords();
        if (capacity < c.size()) fail(ErrorKind::OutOfRange, "coordinate buffer too small");
        require(out, "out");
        std::memcpy(out, c.data(), c.size() * sizeof(double));
    });
}

void pt_cloud_free(pt_cloud* cloud) { delete cloud; }

size_t pt_dataset_count(void) { return dataset_names().size(); }

const char* pt_dataset_name(size_t index) {
    const auto names = dataset_names();
    return index < names.size() ? names[index].data() : nullptr;
}

// ---- images ---------------------------------------------------------------

pt_status pt_image_load_pgm(const char* path, pt_image** out) {
    return guard([&] {
        require(path, "path");
        require(out, "out");
        *out = new pt_image{load_pgm(path)};
    });
}

pt_status pt_image_synthetic_honeycomb(uint64_t seed, pt_image** out) {
    return guard([&] {
        require(out, "out");
        *out = new pt_image{synthetic_honeycomb(seed)};
    });
}

int pt_image_honeycomb_cells(void) { return kHoneycombCells; }

pt_status pt_image_save_pgm(const pt_image* image, const char* path, int binary) {
    return guard([&] {
        require(image, "image");
        require(path, "path");
        write_file_atomic(path, to_pgm(image->value, binary != 0));
    });
}

size_t pt_image_width(const pt_image* image) { return image ? image->value.width : 0; }
size_t pt_image_height(const pt_image* image) { return image ? image->value.height : 0; }

pt_status pt_image_sample(const pt_image* image, size_t n_dark, size_t n_boundary, int darkness,
                          uint64_t seed, pt_cloud** out) {
    return guard([&] {
        require(image, "image");
        require(out, "out");
        std::vector<PointCloud> parts;
        if (n_dark) parts.push_back(sample_intensity(image->value, n_dark, darkness != 0, seed));
        if (n_boundary) parts.push_back(sample_boundary(image->value, n_boundary, seed));
        if (parts.empty()) fail(ErrorKind::InvalidArgument, "no points requested");
        *out = new pt_cloud{concat(parts)};
    });
}

void pt_image_free(pt_image* image) { delete image; }

// ---- barcodes -------------------------------------------------------------

pt_status pt_barcode_compute(const pt_cloud* cloud, double bandwidth, const size_t* resolution,
                             size_t n_axes, double margin, int max_dim, pt_barcode** out) {
    return guard([&] {
        require(cloud, "cloud");
        require(resolution, "resolution");
        require(out, "out");
        std::vector<std::size_t> res(resolution, resolution + n_axes);
        if (res.size() == 1) res.assign(cloud->value.dim(), res.front());
        const GridSpec grid =
            margin < 0.0 ? grid_spec_auto(cloud->value, bandwidth, res)
                         : GridSpec(bounding_box(cloud->value, margin), res);
        const ScalarGrid values = evaluate_kde(cloud->value, bandwidth, grid);
        *out = new pt_barcode{superlevel_persistence(values, max_dim), grid, bandwidth};
    });
}

size_t pt_barcode_pair_count(const pt_barcode* barcode) {
    return barcode ? barcode->value.pairs.size() : 0;
}

pt_status pt_barcode_pair(const pt_barcode* barcode, size_t index, int* dim, double* birth,
                          double* death, int* essential) {
    return guard([&] {
        require(barcode, "barcode");
        if (index >= barcode->value.pairs.size()) fail(ErrorKind::OutOfRange, "pair index out of range");
        const auto& p = barcode->value.pairs[index];
        if (dim) *dim = p.dim;
        if (birth) *birth = p.birth;
        if (death) *death = p.death;
        if (essential) *essential = p.essential ? 1 : 0;
    });
}

size_t pt_barcode_betti_at(const pt_barcode* barcode, int k, double y) {
    return barcode ? betti_at(barcode->value, k, y) : 0;
}

pt_status pt_barcode_save_csv(const pt_barcode* barcode, const char* path) {
    return guard([&] {
        require(barcode, "barcode");
        require(path, "path");
        const std::string comments[] = {grid_header_line(barcode->grid, barcode->bandwidth),
                                        std::string("# kde: ") + kKdeDescriptor};
        write_file_atomic(path, barcode_to_csv(barcode->value, comments));
    });
}

pt_status pt_barcode_render_svg(const pt_barcode* barcode, int k, const char* path) {
    return guard([&] {
        require(barcode, "barcode");
        require(path, "path");
        const auto bars = barcode->value.in_dim(k);
        char title[96];
        std::snprintf(title, sizeof title, "beta_%d barcode at bandwidth %.6f", k, barcode->bandwidth);
        write_file_atomic(path, render_bars(bars, {barcode->value.grid_min, barcode->value.grid_max},
                                            RenderOptions{}, title));
    });
}

void pt_barcode_free(pt_barcode* barcode) { delete barcode; }

// ---- terraces -------------------------------------------------------------

pt_status pt_terrace_load(const char* path, int k, pt_terrace** out) {
    return guard([&] {
        require(path, "path");
        require(out, "out");
        const std::string text = read_file(path);
        *out = new pt_terrace{ends_with(path, ".json") ? terrace_from_json(text)
                                                      : terrace_from_csv(text, k)};
    });
}

size_t pt_terrace_rows(const pt_terrace* t) { return t ? t->value.rows() : 0; }
size_t pt_terrace_cols(const pt_terrace* t) { return t ? t->value.cols() : 0; }

double pt_terrace_bandwidth(const pt_terrace* t, size_t col) {
    return t && col < t->value.cols() ? t->value.xvec[col] : 0.0;
}
double pt_terrace_filtration(const pt_terrace* t, size_t row) {
    return t && row < t->value.rows() ? t->value.yvec[row] : 0.0;
}
long pt_terrace_height(const pt_terrace* t, size_t row, size_t col) {
    return t && row < t->value.rows() && col < t->value.cols() ? t->value.z(row, col) : 0;
}

pt_status pt_terrace_save_csv(const pt_terrace* t, const char* path) {
    return guard([&] {
        require(t, "terrace");
        require(path, "path");
        write_file_atomic(path, terrace_to_csv(t->value));
    });
}

pt_status pt_terrace_save_json(const pt_terrace* t, const char* path) {
    return guard([&] {
        require(t, "terrace");
        require(path, "path");
        write_file_atomic(path, terrace_to_json(t->value, {}));
    });
}

pt_status pt_terrace_render_svg(const pt_terrace* t, long height_cap, const char* path) {
    return guard([&] {
        require(t, "terrace");
        require(path, "path");
        RenderOptions opt;
        if (height_cap > 0) opt.height_cap = height_cap;
        write_file_atomic(path, render_terrace(t->value, opt));
    });
}

pt_status pt_terrace_render_slice_svg(const pt_terrace* t, size_t col, const char* path) {
    return guard([&] {
        require(t, "terrace");
        require(path, "path");
        write_file_atomic(path, render_barcode_slice(t->value, col, RenderOptions{}));
    });
}

void pt_terrace_free(pt_terrace* t) { delete t; }

pt_status pt_terrace_area(const pt_terrace* t, pt_area** out) {
    return guard([&] {
        require(t, "terrace");
        require(out, "out");
        *out = new pt_area{terrace_area(t->value)};
    });
}

long pt_area_max_height(const pt_area* a) {
    return a ? static_cast<long>(a->value.by_height.size()) : 0;
}
double pt_area_at(const pt_area* a, long h) { return a ? a->value.area(h) : 0.0; }

pt_status pt_area_save_csv(const pt_area* a, const char* path) {
    return guard([&] {
        require(a, "area");
        require(path, "path");
        write_file_atomic(path, area_to_csv(a->value));
    });
}

pt_status pt_area_render_svg(const pt_area* a, const char* path) {
    return guard([&] {
        require(a, "area");
        require(path, "path");
        write_file_atomic(path, render_area(a->value, RenderOptions{}));
    });
}

void pt_area_free(pt_area* a) { delete a; }

// ---- pipeline -------------------------------------------------------------

pt_status pt_pipeline_run(const char* config_json, char** manifest_json) {
    return guard([&] {
        require(config_json, "config_json");
        const auto outcome = run_pipeline(config_from_json(config_json));
        if (manifest_json) {
            char* s = new char[outcome.manifest_json.size() + 1];
            std::memcpy(s, outcome.manifest_json.c_str(), outcome.manifest_json.size() + 1);
            *manifest_json = s;
        }
    });
}

pt_status pt_default_workers(size_t fallback, size_t* out) {
    return guard([&] {
        require(out, "out");
        *out = default_workers(fallback);
    });
}

}  // extern "C"
