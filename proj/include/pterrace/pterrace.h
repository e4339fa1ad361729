/*
 * pterrace C API.
 *
 * Every object is an opaque handle owned by the caller and released with the
 * matching *_free function. Functions that can fail return a pt_status; on
 * failure, pt_last_error() returns a message for the calling thread that
 * stays valid until that thread's next API call.
 */
#ifndef PTERRACE_H
#define PTERRACE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(PTERRACE_BUILDING)
#    define PT_API __declspec(dllexport)
#  else
#    define PT_API __declspec(dllimport)
#  endif
#else
#  define PT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pt_status {
    PT_OK = 0,
    PT_ERR_INVALID_ARGUMENT = 1,
    PT_ERR_CONFIG = 2,
    PT_ERR_DATA = 3,
    PT_ERR_IO = 4,
    PT_ERR_COMPUTE = 5,
    PT_ERR_OUT_OF_RANGE = 6,
    PT_ERR_INTERNAL = 7
} pt_status;

typedef struct pt_cloud pt_cloud;
typedef struct pt_image pt_image;
typedef struct pt_barcode pt_barcode;
typedef struct pt_terrace pt_terrace;
typedef struct pt_area pt_area;

PT_API const char* pt_version(void);
PT_API const char* pt_last_error(void);
PT_API const char* pt_status_name(pt_status status);
/* Frees strings returned through char** out-parameters. */
PT_API void pt_string_free(char* s);

/* ---- point clouds ----------------------------------------------------- */

PT_API pt_status pt_cloud_load_csv(const char* path, pt_cloud** out);
PT_API pt_status pt_cloud_from_coords(size_t dim, const double* coords, size_t n_points,
                                      pt_cloud** out);
/* Named datasets: see pt_dataset_name. */
PT_API pt_status pt_cloud_generate(const char* dataset, uint64_t seed, pt_cloud** out);
PT_API pt_status pt_cloud_save_csv(const pt_cloud* cloud, const char* path);
PT_API size_t pt_cloud_size(const pt_cloud* cloud);
PT_API size_t pt_cloud_dim(const pt_cloud* cloud);
/* Copies size*dim coordinates, row-major; capacity counts doubles. */
PT_API pt_status pt_cloud_coords(const pt_cloud* cloud, double* out, size_t capacity);
PT_API void pt_cloud_free(pt_cloud* cloud);

PT_API size_t pt_dataset_count(void);
PT_API const char* pt_dataset_name(size_t index);

/* ---- grayscale images -------------------------------------------------- */

PT_API pt_status pt_image_load_pgm(const char* path, pt_image** out);
PT_API pt_status pt_image_synthetic_honeycomb(uint64_t seed, pt_image** out);
PT_API int pt_image_honeycomb_cells(void);
PT_API pt_status pt_image_save_pgm(const pt_image* image, const char* path, int binary);
PT_API size_t pt_image_width(const pt_image* image);
PT_API size_t pt_image_height(const pt_image* image);
/* n_dark intensity-weighted points (darker pixels favoured when darkness is
 * nonzero) followed by n_boundary points on the image perimeter. */
PT_API pt_status pt_image_sample(const pt_image* image, size_t n_dark, size_t n_boundary,
                                 int darkness, uint64_t seed, pt_cloud** out);
PT_API void pt_image_free(pt_image* image);

/* ---- barcode at a single bandwidth -------------------------------------- */

/* Evaluates the KDE on a grid over the cloud's bounding box (margin < 0
 * selects 3 * bandwidth) and computes the super-level barcode up to
 * max_dim. n_axes is 1 (same count on every axis) or the cloud dimension. */
PT_API pt_status pt_barcode_compute(const pt_cloud* cloud, double bandwidth,
                                    const size_t* resolution, size_t n_axes, double margin,
                                    int max_dim, pt_barcode** out);
PT_API size_t pt_barcode_pair_count(const pt_barcode* barcode);
PT_API pt_status pt_barcode_pair(const pt_barcode* barcode, size_t index, int* dim,
                                 double* birth, double* death, int* essential);
PT_API size_t pt_barcode_betti_at(const pt_barcode* barcode, int k, double y);
PT_API pt_status pt_barcode_save_csv(const pt_barcode* barcode, const char* path);
/* Vertical barcode of the dimension-k bars. */
PT_API pt_status pt_barcode_render_svg(const pt_barcode* barcode, int k, const char* path);
PT_API void pt_barcode_free(pt_barcode* barcode);

/* ---- terraces ----------------------------------------------------------- */

/* Reads a terrace matrix from .json, or from CSV (any other extension) in
 * which case k labels the homological dimension. */
PT_API pt_status pt_terrace_load(const char* path, int k, pt_terrace** out);
PT_API size_t pt_terrace_rows(const pt_terrace* terrace);
PT_API size_t pt_terrace_cols(const pt_terrace* terrace);
PT_API double pt_terrace_bandwidth(const pt_terrace* terrace, size_t col);
PT_API double pt_terrace_filtration(const pt_terrace* terrace, size_t row);
PT_API long pt_terrace_height(const pt_terrace* terrace, size_t row, size_t col);
PT_API pt_status pt_terrace_save_csv(const pt_terrace* terrace, const char* path);
PT_API pt_status pt_terrace_save_json(const pt_terrace* terrace, const char* path);
/* height_cap <= 0 disables capping. */
PT_API pt_status pt_terrace_render_svg(const pt_terrace* terrace, long height_cap,
                                       const char* path);
PT_API pt_status pt_terrace_render_slice_svg(const pt_terrace* terrace, size_t col,
                                             const char* path);
PT_API void pt_terrace_free(pt_terrace* terrace);

PT_API pt_status pt_terrace_area(const pt_terrace* terrace, pt_area** out);
PT_API long pt_area_max_height(const pt_area* area);
/* Standardized area of height h (h = 0 gives the height-zero layer). */
PT_API double pt_area_at(const pt_area* area, long h);
PT_API pt_status pt_area_save_csv(const pt_area* area, const char* path);
PT_API pt_status pt_area_render_svg(const pt_area* area, const char* path);
PT_API void pt_area_free(pt_area* area);

/* ---- full pipeline ------------------------------------------------------ */

/* Runs the configured sweep and writes the requested outputs plus
 * manifest.json into the output directory. On success *manifest_json (if
 * non-null) receives the manifest text; free it with pt_string_free. */
PT_API pt_status pt_pipeline_run(const char* config_json, char** manifest_json);

/* Worker count from PTERRACE_WORKERS, else fallback. */
PT_API pt_status pt_default_workers(size_t fallback, size_t* out);

#ifdef __cplusplus
}
#endif

#endif /* PTERRACE_H */
