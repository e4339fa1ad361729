#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pterrace/kde.hpp"
#include "pterrace/persistence.hpp"
#include "pterrace/pointcloud.hpp"
#include "pterrace/render.hpp"
#include "pterrace/terrace.hpp"

namespace pterrace {

struct InputSpec {
    enum class Kind { Csv, Dataset, Pgm };
    Kind kind = Kind::Dataset;
    std::string source = "three-circles";  // path or dataset name
    std::size_t n_dark = 5000;             // PGM: intensity-sampled points
    std::size_t n_boundary = 1500;         // PGM: perimeter points
    bool darkness = true;
};

struct BandwidthSweep {
    double min = 0.01;
    double max = 1.5;
    std::size_t count = 50;
    bool log_spacing = false;

    /// Equally spaced (or log-equally spaced) values; value i is computed from
    /// the fraction i/(count-1), so sweeps whose grids share a fraction share
    /// the exact bandwidth.
    std::vector<double> values() const;
};

struct GridConfig {
    std::vector<std::size_t> resolution{64};  // one entry applies to every axis
    std::optional<BoundingBox> box;           // explicit domain
    std::optional<double> margin;             // absolute margin; default 3 * max bandwidth
};

struct PipelineConfig {
    InputSpec input;
    int k = 1;
    BandwidthSweep bandwidths;
    GridConfig grid;
    std::vector<std::string> emit{"matrix_csv", "area_csv"};
    std::size_t workers = 1;
    std::uint64_t seed = 1;
    std::filesystem::path out_dir = ".";
    std::optional<long> height_cap;
};

/// Parses the JSON config (see README for keys). Throws Error{Config}.
PipelineConfig config_from_json(const std::string& text);
std::string config_to_json(const PipelineConfig& config);

PointCloud resolve_input(const PipelineConfig& config);
GridSpec resolve_grid(const PointCloud& cloud, const PipelineConfig& config);

/// Everything computed before any file is written.
struct SweepResult {
    GridSpec grid;
    std::vector<double> bandwidths;
    std::vector<Barcode> barcodes;
    std::vector<double> seconds;  // wall time per bandwidth
    TerraceMatrix matrix;
};

/// KDE + persistence for every bandwidth on a pool of `workers` threads,
/// then terrace assembly in bandwidth order. The result does not depend on
/// `workers`.
SweepResult sweep(const PointCloud& cloud, const GridSpec& grid, std::span<const double> bandwidths,
                  int k, std::size_t workers);

struct PipelineOutcome {
    SweepResult sweep;
    std::optional<TerraceAreaSummary> area;
    std::map<std::string, std::string> files;  // output name -> sha256
    std::string manifest_json;
};

/// Full run: input, sweep, terrace, area, renders. Requested outputs are all
/// staged under temporary names and renamed only once every one has been
/// produced; manifest.json is written last.
PipelineOutcome run_pipeline(const PipelineConfig& config);

/// Writes via a temporary sibling and rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string sha256_hex(const std::string& content);

/// Worker count from PTERRACE_WORKERS, else `fallback`.
std::size_t default_workers(std::size_t fallback = 1);

}  // namespace pterrace
