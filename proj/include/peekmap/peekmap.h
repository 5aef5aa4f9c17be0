/* Copyright 2026 The peekmap Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef PEEKMAP_PEEKMAP_H_
#define PEEKMAP_PEEKMAP_H_

/* C interface to libpeekmap. Every fallible call returns a peekmap_status;
 * on failure peekmap_last_error() returns a message for the calling thread
 * that stays valid until the next failing call on that thread. Objects are
 * opaque handles released with the matching *_free function; *_free accepts
 * NULL. Handles are immutable once created and may be shared across threads
 * for reading. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define PEEKMAP_API __declspec(dllexport)
#else
#define PEEKMAP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum peekmap_status {
  PEEKMAP_OK = 0,
  PEEKMAP_ERR_INVALID_ARGUMENT = 1,
  PEEKMAP_ERR_IO = 2,
  PEEKMAP_ERR_FORMAT = 3,
  PEEKMAP_ERR_DOMAIN = 4,
  PEEKMAP_ERR_NUMERIC = 5,
  PEEKMAP_ERR_INDEX = 6,
  PEEKMAP_ERR_INVARIANT = 7,
  PEEKMAP_ERR_INTERNAL = 99
} peekmap_status;

typedef enum peekmap_method {
  PEEKMAP_METHOD_PEEK = 0,
  PEEKMAP_METHOD_EIGENCAM = 1
} peekmap_method;

typedef struct peekmap_bundle peekmap_bundle;
typedef struct peekmap_stack peekmap_stack;
typedef struct peekmap_map peekmap_map;
typedef struct peekmap_image peekmap_image;

PEEKMAP_API const char* peekmap_version(void);
PEEKMAP_API const char* peekmap_last_error(void);
PEEKMAP_API const char* peekmap_status_name(peekmap_status status);
/* Releases strings returned through char** out-parameters. */
PEEKMAP_API void peekmap_string_free(char* s);

/* ---- activation bundles ------------------------------------------------ */

typedef struct peekmap_layer_info {
  int64_t index;
  const char* name;        /* owned by the bundle */
  const char* file;        /* owned by the bundle */
  const char* module_type; /* owned by the bundle */
  size_t depth, height, width;
} peekmap_layer_info;

PEEKMAP_API peekmap_status peekmap_bundle_load(const char* dir,
                                               peekmap_bundle** out);
PEEKMAP_API peekmap_status peekmap_bundle_save(const peekmap_bundle* bundle,
                                               const char* dir);
PEEKMAP_API void peekmap_bundle_free(peekmap_bundle* bundle);
PEEKMAP_API const char* peekmap_bundle_model_name(const peekmap_bundle* bundle);
PEEKMAP_API size_t peekmap_bundle_layer_count(const peekmap_bundle* bundle);
/* Layers are ordered by index; `position` is 0-based within that order. */
PEEKMAP_API peekmap_status peekmap_bundle_layer_info(
    const peekmap_bundle* bundle, size_t position, peekmap_layer_info* out);
PEEKMAP_API peekmap_status peekmap_bundle_find_layer(
    const peekmap_bundle* bundle, int64_t index, size_t* position);
/* Shares the layer tensor; the stack outlives the bundle if needed. */
PEEKMAP_API peekmap_status peekmap_bundle_layer_stack(
    const peekmap_bundle* bundle, size_t position, peekmap_stack** out);
PEEKMAP_API peekmap_status peekmap_bundle_input_image(
    const peekmap_bundle* bundle, peekmap_image** out);

/* ---- feature stacks ---------------------------------------------------- */

/* `data` holds depth*height*width floats, channel-first; it is copied. */
PEEKMAP_API peekmap_status peekmap_stack_create(size_t depth, size_t height,
                                                size_t width, const float* data,
                                                int64_t layer_index,
                                                peekmap_stack** out);
PEEKMAP_API void peekmap_stack_free(peekmap_stack* stack);
PEEKMAP_API void peekmap_stack_shape(const peekmap_stack* stack, size_t* depth,
                                     size_t* height, size_t* width);
PEEKMAP_API const float* peekmap_stack_data(const peekmap_stack* stack);
PEEKMAP_API peekmap_status peekmap_tensor_read(const char* path,
                                               peekmap_stack** out);
PEEKMAP_API peekmap_status peekmap_tensor_write(const peekmap_stack* stack,
                                                const char* path);

/* ---- saliency ---------------------------------------------------------- */

PEEKMAP_API peekmap_status peekmap_entropy_kernel(double x, double* out);
PEEKMAP_API peekmap_status peekmap_positivize(const peekmap_stack* stack,
                                              peekmap_stack** out);
PEEKMAP_API peekmap_status peekmap_peek_map(const peekmap_stack* stack,
                                            int negate, peekmap_map** out);
/* `direction` receives `depth` doubles. */
PEEKMAP_API peekmap_status peekmap_first_principal_direction(
    const peekmap_stack* stack, double* direction);
PEEKMAP_API peekmap_status peekmap_eigencam_map(const peekmap_stack* stack,
                                                peekmap_map** out);

PEEKMAP_API peekmap_status peekmap_map_create(size_t height, size_t width,
                                              const float* data,
                                              peekmap_map** out);
PEEKMAP_API void peekmap_map_free(peekmap_map* map);
PEEKMAP_API void peekmap_map_shape(const peekmap_map* map, size_t* height,
                                   size_t* width);
PEEKMAP_API const float* peekmap_map_data(const peekmap_map* map);
PEEKMAP_API uint64_t peekmap_map_checksum(const peekmap_map* map);

/* ---- rendering --------------------------------------------------------- */

PEEKMAP_API peekmap_status peekmap_map_normalize(const peekmap_map* map,
                                                 peekmap_map** out);
PEEKMAP_API peekmap_status peekmap_map_normalize_bounds(const peekmap_map* map,
                                                        double lo, double hi,
                                                        peekmap_map** out);
PEEKMAP_API peekmap_status peekmap_map_resize(const peekmap_map* map,
                                              size_t height, size_t width,
                                              peekmap_map** out);
PEEKMAP_API peekmap_status peekmap_colormap(double t, uint8_t rgb[3]);

/* `pixels` holds height*width*3 bytes, interleaved RGB; it is copied. */
PEEKMAP_API peekmap_status peekmap_image_create(size_t height, size_t width,
                                                const uint8_t* pixels,
                                                peekmap_image** out);
PEEKMAP_API void peekmap_image_free(peekmap_image* image);
PEEKMAP_API void peekmap_image_shape(const peekmap_image* image, size_t* height,
                                     size_t* width);
PEEKMAP_API const uint8_t* peekmap_image_pixels(const peekmap_image* image);
PEEKMAP_API peekmap_status peekmap_image_read_png(const char* path,
                                                  peekmap_image** out);
PEEKMAP_API peekmap_status peekmap_image_write_png(const peekmap_image* image,
                                                   const char* path);

PEEKMAP_API peekmap_status peekmap_overlay(const peekmap_image* image,
                                           const peekmap_map* map01,
                                           double alpha, peekmap_image** out);
PEEKMAP_API peekmap_status peekmap_render_feature_slice(
    const peekmap_stack* stack, size_t channel, peekmap_image** out);
/* `labels` may be NULL; otherwise it holds `count` strings. */
PEEKMAP_API peekmap_status peekmap_grid_compare(
    const peekmap_image* const* images, size_t count, size_t columns,
    const char* const* labels, peekmap_image** out);

/* ---- detection metrics ------------------------------------------------- */

typedef struct peekmap_box {
  double x_min, y_min, x_max, y_max;
} peekmap_box;

PEEKMAP_API peekmap_status peekmap_iou(const peekmap_box* a,
                                       const peekmap_box* b, double* out);

/* Evaluates YOLO-format label directories. The report is JSON
 * (schema_version 1) and `table`, if non-NULL, receives a text summary. */
PEEKMAP_API peekmap_status peekmap_evaluate_label_dirs(
    const char* gt_dir, const char* det_dir, const char* sizes_json,
    const double* iou_thresholds, size_t threshold_count,
    double confidence_threshold, char** report_json, char** table);

/* ---- benchmark --------------------------------------------------------- */

typedef struct peekmap_bench_stats {
  int repeats;
  double mean_ns;
  double std_ns;
  uint64_t checksum;
} peekmap_bench_stats;

PEEKMAP_API peekmap_status peekmap_bench_time(const peekmap_stack* stack,
                                              peekmap_method method,
                                              int repeats, int warmup,
                                              peekmap_bench_stats* out);
/* `svg` may be NULL. */
PEEKMAP_API peekmap_status peekmap_bench_run(const peekmap_bundle* bundle,
                                             int repeats, int warmup,
                                             char** csv, char** svg);

#ifdef __cplusplus
}
#endif

#endif /* PEEKMAP_PEEKMAP_H_ */
