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

#ifndef PEEKMAP_BUNDLE_HPP_
#define PEEKMAP_BUNDLE_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "peekmap/tensor.hpp"

namespace peekmap {

struct LayerRecord {
  std::int64_t index = 0;
  std::string name;
  std::string file;  // relative to the bundle directory
  StackShape shape;
  std::string module_type;
  FeatureStack stack;
};

struct ActivationBundle {
  std::string model_name;
  RgbImage input_image;
  std::vector<LayerRecord> layers;  // sorted by index

  std::size_t input_height() const { return input_image.height(); }
  std::size_t input_width() const { return input_image.width(); }

  // Position in `layers` of the given layer index, or throws kIndex.
  std::size_t Find(std::int64_t index) const;
};

// Throws kInvariant describing the first violated bundle invariant.
void ValidateBundle(const ActivationBundle& bundle);

ActivationBundle LoadBundle(const std::filesystem::path& dir);
void SaveBundle(const ActivationBundle& bundle,
                const std::filesystem::path& dir);

// Canonical file name for a layer tensor: layer_007.npy.
std::string LayerFileName(std::int64_t index);

}  // namespace peekmap

#endif  // PEEKMAP_BUNDLE_HPP_
