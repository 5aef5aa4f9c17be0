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

#include "peekmap/peekmap.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "peekmap/bench.hpp"
#include "peekmap/bundle.hpp"
#include "peekmap/eigencam.hpp"
#include "peekmap/error.hpp"
#include "peekmap/metrics.hpp"
#include "peekmap/npy.hpp"
#include "peekmap/peek.hpp"
#include "peekmap/png_io.hpp"
#include "peekmap/render.hpp"
#include "peekmap/yolo_io.hpp"

struct peekmap_bundle {
  std::shared_ptr<const peekmap::ActivationBundle> value;
};
struct peekmap_stack {
  std::shared_ptr<const peekmap::FeatureStack> value;
};
struct peekmap_map {
  peekmap::SaliencyMap value;
};
struct peekmap_image {
  peekmap::RgbImage value;
};

namespace {

thread_local std::string g_last_error;

peekmap_status Fail(peekmap_status status, const char* what) {
  g_last_error = what;
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <typename Body>
peekmap_status Guard(Body&& body) {
  try {
    body();
    return PEEKMAP_OK;
  } catch (const peekmap::Error& e) {
    return Fail(static_cast<peekmap_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return Fail(PEEKMAP_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(PEEKMAP_ERR_INTERNAL, e.what());
  }
}

void Require(const void* p, const char* name) {
  if (p == nullptr) {
    throw peekmap::Error(peekmap::ErrorCode::kInvalidArgument,
                         std::string(name) + " must not be NULL");
  }
}

char* Duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

peekmap_stack* Wrap(peekmap::FeatureStack s) {
  return new peekmap_stack{
      std::make_shared<const peekmap::FeatureStack>(std::move(s))};
}

}  // namespace

extern "C" {

const char* peekmap_version(void) { return "1.0.0"; }

const char* peekmap_last_error(void) { return g_last_error.c_str(); }

const char* peekmap_status_name(peekmap_status status) {
  switch (status) {
    case PEEKMAP_OK: return "ok";
    case PEEKMAP_ERR_INVALID_ARGUMENT: return "invalid argument";
    case PEEKMAP_ERR_IO: return "i/o error";
    case PEEKMAP_ERR_FORMAT: return "format error";
    case PEEKMAP_ERR_DOMAIN: return "domain error";
    case PEEKMAP_ERR_NUMERIC: return "numeric error";
    case PEEKMAP_ERR_INDEX: return "index error";
    case PEEKMAP_ERR_INVARIANT: return "invariant violation";
    case PEEKMAP_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void peekmap_string_free(char* s) { std::free(s); }

// ---- bundles

peekmap_status peekmap_bundle_load(const char* dir, peekmap_bundle** out) {
  return Guard([&] {
    Require(dir, "dir");
    Require(out, "out");
    *out = new peekmap_bundle{std::make_shared<const peekmap::ActivationBundle>(
        peekmap::LoadBundle(dir))};
  });
}

peekmap_status peekmap_bundle_save(const peekmap_bundle* bundle,
                                   const char* dir) {
  return Guard([&] {
    Require(bundle, "bundle");
    Require(dir, "dir");
    peekmap::SaveBundle(*bundle->value, dir);
  });
}

void peekmap_bundle_free(peekmap_bundle* bundle) { delete bundle; }

const char* peekmap_bundle_model_name(const peekmap_bundle* bundle) {
  return bundle ? bundle->value->model_name.c_str() : "";
}

size_t peekmap_bundle_layer_count(const peekmap_bundle* bundle) {
  return bundle ? bundle->value->layers.size() : 0;
}

peekmap_status peekmap_bundle_layer_info(const peekmap_bundle* bundle,
                                         size_t position,
                                         peekmap_layer_info* out) {
  return Guard([&] {
    Require(bundle, "bundle");
    Require(out, "out");
    const auto& layers = bundle->value->layers;
    if (position >= layers.size()) {
      throw peekmap::Error(peekmap::ErrorCode::kIndex,
                           "layer position " + std::to_string(position) +
                               " out of range");
    }
    const auto& l = layers[position];
    *out = {l.index,        l.name.c_str(),  l.file.c_str(), l.module_type.c_str(),
            l.shape.depth, l.shape.height, l.shape.width};
  });
}

peekmap_status peekmap_bundle_find_layer(const peekmap_bundle* bundle,
                                         int64_t index, size_t* position) {
  return Guard([&] {
    Require(bundle, "bundle");
    Require(position, "position");
    *position = bundle->value->Find(index);
  });
}

peekmap_status peekmap_bundle_layer_stack(const peekmap_bundle* bundle,
                                          size_t position, peekmap_stack** out) {
  return Guard([&] {
    Require(bundle, "bundle");
    Require(out, "out");
    const auto& layers = bundle->value->layers;
    if (position >= layers.size()) {
      throw peekmap::Error(peekmap::ErrorCode::kIndex,
                           "layer position " + std::to_string(position) +
                               " out of range");
    }
    *out = new peekmap_stack{std::shared_ptr<const peekmap::FeatureStack>(
        bundle->value, &layers[position].stack)};
  });
}

peekmap_status peekmap_bundle_input_image(const peekmap_bundle* bundle,
                                          peekmap_image** out) {
  return Guard([&] {
    Require(bundle, "bundle");
    Require(out, "out");
    *out = new peekmap_image{bundle->value->input_image};
  });
}

// ---- stacks

peekmap_status peekmap_stack_create(size_t depth, size_t height, size_t width,
                                    const float* data, int64_t layer_index,
                                    peekmap_stack** out) {
  return Guard([&] {
    Require(data, "data");
    Require(out, "out");
    const peekmap::StackShape shape{depth, height, width};
    *out = Wrap(peekmap::FeatureStack(
        shape, std::vector<float>(data, data + shape.size()), layer_index));
  });
}

void peekmap_stack_free(peekmap_stack* stack) { delete stack; }

void peekmap_stack_shape(const peekmap_stack* stack, size_t* depth,
                         size_t* height, size_t* width) {
  const peekmap::StackShape s = stack ? stack->value->shape() : peekmap::StackShape{};
  if (depth) *depth = s.depth;
  if (height) *height = s.height;
  if (width) *width = s.width;
}

const float* peekmap_stack_data(const peekmap_stack* stack) {
  return stack ? stack->value->data().data() : nullptr;
}

peekmap_status peekmap_tensor_read(const char* path, peekmap_stack** out) {
  return Guard([&] {
    Require(path, "path");
    Require(out, "out");
    *out = Wrap(peekmap::ReadTensor(path));
  });
}

peekmap_status peekmap_tensor_write(const peekmap_stack* stack,
                                    const char* path) {
  return Guard([&] {
    Require(stack, "stack");
    Require(path, "path");
    peekmap::WriteTensor(*stack->value, path);
  });
}

// ---- saliency

peekmap_status peekmap_entropy_kernel(double x, double* out) {
  return Guard([&] {
    Require(out, "out");
    *out = peekmap::EntropyKernel(x);
  });
}

peekmap_status peekmap_positivize(const peekmap_stack* stack,
                                  peekmap_stack** out) {
  return Guard([&] {
    Require(stack, "stack");
    Require(out, "out");
    *out = Wrap(peekmap::Positivize(*stack->value));
  });
}

peekmap_status peekmap_peek_map(const peekmap_stack* stack, int negate,
                                peekmap_map** out) {
  return Guard([&] {
    Require(stack, "stack");
    Require(out, "out");
    *out = new peekmap_map{peekmap::PeekMap(*stack->value, negate != 0)};
  });
}

peekmap_status peekmap_first_principal_direction(const peekmap_stack* stack,
                                                 double* direction) {
  return Guard([&] {
    Require(stack, "stack");
    Require(direction, "direction");
    const auto v = peekmap::FirstPrincipalDirection(*stack->value);
    std::copy(v.begin(), v.end(), direction);
  });
}

peekmap_status peekmap_eigencam_map(const peekmap_stack* stack,
                                    peekmap_map** out) {
  return Guard([&] {
    Require(stack, "stack");
    Require(out, "out");
    *out = new peekmap_map{peekmap::EigenCamMap(*stack->value)};
  });
}

peekmap_status peekmap_map_create(size_t height, size_t width,
                                  const float* data, peekmap_map** out) {
  return Guard([&] {
    Require(data, "data");
    Require(out, "out");
    *out = new peekmap_map{peekmap::SaliencyMap(
        height, width, std::vector<float>(data, data + height * width))};
  });
}

void peekmap_map_free(peekmap_map* map) { delete map; }

void peekmap_map_shape(const peekmap_map* map, size_t* height, size_t* width) {
  if (height) *height = map ? map->value.height() : 0;
  if (width) *width = map ? map->value.width() : 0;
}

const float* peekmap_map_data(const peekmap_map* map) {
  return map ? map->value.data().data() : nullptr;
}

uint64_t peekmap_map_checksum(const peekmap_map* map) {
  return map ? peekmap::Checksum(map->value) : 0;
}

// ---- rendering

peekmap_status peekmap_map_normalize(const peekmap_map* map, peekmap_map** out) {
  return Guard([&] {
    Require(map, "map");
    Require(out, "out");
    *out = new peekmap_map{peekmap::MinMaxNormalize(map->value)};
  });
}

peekmap_status peekmap_map_normalize_bounds(const peekmap_map* map, double lo,
                                            double hi, peekmap_map** out) {
  return Guard([&] {
    Require(map, "map");
    Require(out, "out");
    *out = new peekmap_map{peekmap::NormalizeWithBounds(map->value, lo, hi)};
  });
}

peekmap_status peekmap_map_resize(const peekmap_map* map, size_t height,
                                  size_t width, peekmap_map** out) {
  return Guard([&] {
    Require(map, "map");
    Require(out, "out");
    *out = new peekmap_map{peekmap::ResizeBilinear(map->value, height, width)};
  });
}

peekmap_status peekmap_colormap(double t, uint8_t rgb[3]) {
  return Guard([&] {
    Require(rgb, "rgb");
    const auto c = peekmap::Colormap(t);
    std::copy(c.begin(), c.end(), rgb);
  });
}

peekmap_status peekmap_image_create(size_t height, size_t width,
                                    const uint8_t* pixels, peekmap_image** out) {
  return Guard([&] {
    Require(pixels, "pixels");
    Require(out, "out");
    *out = new peekmap_image{peekmap::RgbImage(
        height, width,
        std::vector<std::uint8_t>(pixels, pixels + height * width * 3))};
  });
}

void peekmap_image_free(peekmap_image* image) { delete image; }

void peekmap_image_shape(const peekmap_image* image, size_t* height,
                         size_t* width) {
  if (height) *height = image ? image->value.height() : 0;
  if (width) *width = image ? image->value.width() : 0;
}

const uint8_t* peekmap_image_pixels(const peekmap_image* image) {
  return image ? image->value.pixels().data() : nullptr;
}

peekmap_status peekmap_image_read_png(const char* path, peekmap_image** out) {
  return Guard([&] {
    Require(path, "path");
    Require(out, "out");
    *out = new peekmap_image{peekmap::ReadPng(path)};
  });
}

peekmap_status peekmap_image_write_png(const peekmap_image* image,
                                       const char* path) {
  return Guard([&] {
    Require(image, "image");
    Require(path, "path");
    peekmap::WritePng(image->value, path);
  });
}

peekmap_status peekmap_overlay(const peekmap_image* image,
                               const peekmap_map* map01, double alpha,
                               peekmap_image** out) {
  return Guard([&] {
    Require(image, "image");
    Require(map01, "map01");
    Require(out, "out");
    *out = new peekmap_image{peekmap::Overlay(image->value, map01->value, alpha)};
  });
}

peekmap_status peekmap_render_feature_slice(const peekmap_stack* stack,
                                            size_t channel, peekmap_image** out) {
  return Guard([&] {
    Require(stack, "stack");
    Require(out, "out");
    *out = new peekmap_image{peekmap::RenderFeatureSlice(*stack->value, channel)};
  });
}

peekmap_status peekmap_grid_compare(const peekmap_image* const* images,
                                    size_t count, size_t columns,
                                    const char* const* labels,
                                    peekmap_image** out) {
  return Guard([&] {
    Require(images, "images");
    Require(out, "out");
    std::vector<peekmap::RgbImage> tiles;
    std::vector<std::string> names;
    for (size_t i = 0; i < count; ++i) {
      Require(images[i], "images[i]");
      tiles.push_back(images[i]->value);
      if (labels) names.emplace_back(labels[i] ? labels[i] : "");
    }
    *out = new peekmap_image{peekmap::GridCompare(tiles, columns, names)};
  });
}

// ---- metrics

peekmap_status peekmap_iou(const peekmap_box* a, const peekmap_box* b,
                           double* out) {
  return Guard([&] {
    Require(a, "a");
    Require(b, "b");
    Require(out, "out");
    *out = peekmap::Iou({a->x_min, a->y_min, a->x_max, a->y_max},
                        {b->x_min, b->y_min, b->x_max, b->y_max});
  });
}

peekmap_status peekmap_evaluate_label_dirs(const char* gt_dir,
                                           const char* det_dir,
                                           const char* sizes_json,
                                           const double* iou_thresholds,
                                           size_t threshold_count,
                                           double confidence_threshold,
                                           char** report_json, char** table) {
  return Guard([&] {
    Require(gt_dir, "gt_dir");
    Require(det_dir, "det_dir");
    Require(sizes_json, "sizes_json");
    Require(iou_thresholds, "iou_thresholds");
    Require(report_json, "report_json");
    const auto sizes = peekmap::ReadImageSizes(sizes_json);
    const auto gts = peekmap::ReadGroundTruthDir(gt_dir, sizes);
    const auto dets = peekmap::ReadDetectionDir(det_dir, sizes);
    const std::vector<double> thresholds(iou_thresholds,
                                         iou_thresholds + threshold_count);
    const auto report =
        peekmap::MeanAp(dets, gts, thresholds, {confidence_threshold});
    char* json = Duplicate(peekmap::ReportToJson(report));
    if (table) {
      try {
        *table = Duplicate(peekmap::ReportToTable(report));
      } catch (...) {
        std::free(json);
        throw;
      }
    }
    *report_json = json;
  });
}

// ---- benchmark

peekmap_status peekmap_bench_time(const peekmap_stack* stack,
                                  peekmap_method method, int repeats,
                                  int warmup, peekmap_bench_stats* out) {
  return Guard([&] {
    Require(stack, "stack");
    Require(out, "out");
    const auto m = method == PEEKMAP_METHOD_EIGENCAM
                       ? peekmap::SaliencyMethod::kEigenCam
                       : peekmap::SaliencyMethod::kPeek;
    const auto rec = peekmap::TimeMethod(m, *stack->value, repeats, warmup);
    *out = {rec.repeats, rec.mean_ns, rec.std_ns, rec.checksum};
  });
}

peekmap_status peekmap_bench_run(const peekmap_bundle* bundle, int repeats,
                                 int warmup, char** csv, char** svg) {
  return Guard([&] {
    Require(bundle, "bundle");
    Require(csv, "csv");
    const auto records = peekmap::RunBenchmark(*bundle->value, repeats, warmup);
    char* c = Duplicate(peekmap::BenchToCsv(records));
    if (svg) {
      try {
        *svg = Duplicate(peekmap::BenchToSvg(records));
      } catch (...) {
        std::free(c);
        throw;
      }
    }
    *csv = c;
  });
}

}  // extern "C"
