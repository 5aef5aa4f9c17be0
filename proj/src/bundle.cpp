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

#include "peekmap/bundle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <string>

#include "json.hpp"
#include "peekmap/error.hpp"
#include "peekmap/npy.hpp"
#include "peekmap/png_io.hpp"

namespace peekmap {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr char kManifest[] = "manifest.json";
constexpr char kInputImage[] = "input.png";

[[noreturn]] void Invariant(const std::string& what) {
  throw Error(ErrorCode::kInvariant, what);
}

std::string LayerLabel(const LayerRecord& layer) {
  return "layer " + std::to_string(layer.index) + " (" + layer.file + ")";
}

// Relative, no "..", no root: the file must live inside the bundle.
bool InsideBundle(const std::string& file) {
  if (file.empty()) return false;
  const fs::path p(file);
  if (p.is_absolute() || p.has_root_name()) return false;
  for (const auto& part : p) {
    if (part == "..") return false;
  }
  return true;
}

template <typename T>
T Field(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) {
    throw Error(ErrorCode::kFormat, where + ": missing field '" + key + "'");
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::kFormat, where + ": field '" + key +
                                        "' has the wrong type");
  }
}

}  // namespace

std::string LayerFileName(std::int64_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "layer_%03lld.npy",
                static_cast<long long>(index));
  return buf;
}

std::size_t ActivationBundle::Find(std::int64_t index) const {
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (layers[i].index == index) return i;
  }
  throw Error(ErrorCode::kIndex, "bundle has no layer with index " +
                                     std::to_string(index));
}

void ValidateBundle(const ActivationBundle& bundle) {
  if (bundle.input_image.height() == 0 || bundle.input_image.width() == 0) {
    Invariant("bundle input image is empty");
  }
  std::set<std::string> files;
  for (std::size_t i = 0; i < bundle.layers.size(); ++i) {
    const auto& layer = bundle.layers[i];
    if (layer.index < 0) Invariant(LayerLabel(layer) + ": negative index");
    if (i > 0 && layer.index <= bundle.layers[i - 1].index) {
      Invariant(LayerLabel(layer) +
                ": layer indices must be unique and strictly increasing");
    }
    if (!InsideBundle(layer.file)) {
      Invariant(LayerLabel(layer) + ": file must be a relative path inside "
                                    "the bundle directory");
    }
    if (!files.insert(layer.file).second) {
      Invariant(LayerLabel(layer) + ": file shared with another layer");
    }
    const auto& s = layer.shape;
    if (s.depth == 0 || s.height == 0 || s.width == 0) {
      Invariant(LayerLabel(layer) + ": shape entries must be >= 1");
    }
    if (!(layer.stack.shape() == s)) {
      Invariant(LayerLabel(layer) + ": declared shape does not match tensor");
    }
    for (float v : layer.stack.data()) {
      if (!std::isfinite(v)) {
        Invariant(LayerLabel(layer) + ": tensor contains non-finite values");
      }
    }
  }
}

ActivationBundle LoadBundle(const fs::path& dir) {
  const fs::path manifest_path = dir / kManifest;
  std::ifstream in(manifest_path);
  if (!in) {
    throw Error(ErrorCode::kIo, manifest_path.string() + ": missing manifest");
  }
  json manifest;
  try {
    manifest = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kFormat,
                manifest_path.string() + ": invalid JSON: " + e.what());
  }
  const std::string where = manifest_path.string();
  if (!manifest.is_object()) {
    throw Error(ErrorCode::kFormat, where + ": manifest must be an object");
  }
  if (Field<int>(manifest, "version", where) != 1) {
    throw Error(ErrorCode::kFormat, where + ": unsupported field 'version'");
  }

  ActivationBundle bundle;
  bundle.model_name = Field<std::string>(manifest, "model_name", where);
  const auto image_file = Field<std::string>(manifest, "input_image", where);
  if (!InsideBundle(image_file)) {
    throw Error(ErrorCode::kFormat, where + ": field 'input_image' must be a "
                                            "relative path inside the bundle");
  }
  bundle.input_image = ReadPng(dir / image_file);
  const auto size = Field<std::vector<std::size_t>>(manifest, "input_size", where);
  if (size.size() != 2 || size[0] != bundle.input_image.height() ||
      size[1] != bundle.input_image.width()) {
    throw Error(ErrorCode::kInvariant,
                where + ": field 'input_size' does not match " + image_file);
  }

  const auto layers = Field<json>(manifest, "layers", where);
  if (!layers.is_array()) {
    throw Error(ErrorCode::kFormat, where + ": field 'layers' must be a list");
  }
  for (std::size_t n = 0; n < layers.size(); ++n) {
    const json& entry = layers[n];
    const std::string lw = where + " layers[" + std::to_string(n) + "]";
    if (!entry.is_object()) {
      throw Error(ErrorCode::kFormat, lw + ": entry must be an object");
    }
    LayerRecord layer;
    layer.index = Field<std::int64_t>(entry, "index", lw);
    layer.name = Field<std::string>(entry, "name", lw);
    layer.file = Field<std::string>(entry, "file", lw);
    layer.module_type = entry.value("module_type", std::string());
    const auto dtype = Field<std::string>(entry, "dtype", lw);
    if (dtype != "f32") {
      throw Error(ErrorCode::kFormat,
                  lw + ": unsupported field 'dtype' value '" + dtype + "'");
    }
    const auto shape = Field<std::vector<std::size_t>>(entry, "shape", lw);
    if (shape.size() != 3) {
      throw Error(ErrorCode::kFormat, lw + ": field 'shape' must have 3 entries");
    }
    layer.shape = {shape[0], shape[1], shape[2]};
    if (!InsideBundle(layer.file)) {
      throw Error(ErrorCode::kFormat,
                  lw + ": field 'file' must be a relative path in the bundle");
    }
    layer.stack = ReadTensor(dir / layer.file);
    layer.stack.set_layer_index(layer.index);
    bundle.layers.push_back(std::move(layer));
  }
  std::stable_sort(bundle.layers.begin(), bundle.layers.end(),
                   [](const LayerRecord& a, const LayerRecord& b) {
                     return a.index < b.index;
                   });
  ValidateBundle(bundle);
  return bundle;
}

void SaveBundle(const ActivationBundle& bundle, const fs::path& dir) {
  ValidateBundle(bundle);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw Error(ErrorCode::kIo, dir.string() + ": cannot create directory");
  }

  json layers = json::array();
  for (const auto& layer : bundle.layers) {
    const fs::path target = dir / layer.file;
    if (target.has_parent_path()) fs::create_directories(target.parent_path(), ec);
    WriteTensor(layer.stack, target);
    layers.push_back({{"index", layer.index},
                      {"name", layer.name},
                      {"file", layer.file},
                      {"shape", {layer.shape.depth, layer.shape.height,
                                 layer.shape.width}},
                      {"dtype", "f32"},
                      {"module_type", layer.module_type}});
  }
  WritePng(bundle.input_image, dir / kInputImage);

  const json manifest = {
      {"version", 1},
      {"model_name", bundle.model_name},
      {"input_image", kInputImage},
      {"input_size", {bundle.input_image.height(), bundle.input_image.width()}},
      {"layers", layers}};
  std::ofstream out(dir / kManifest, std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kIo, (dir / kManifest).string() + ": cannot write");
  }
  out << manifest.dump(2) << '\n';
  if (!out) {
    throw Error(ErrorCode::kIo, (dir / kManifest).string() + ": write failed");
  }
}

}  // namespace peekmap
