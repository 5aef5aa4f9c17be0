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

#ifndef PEEKMAP_TENSOR_HPP_
#define PEEKMAP_TENSOR_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace peekmap {

struct StackShape {
  std::size_t depth = 0;
  std::size_t height = 0;
  std::size_t width = 0;

  std::size_t plane() const { return height * width; }
  std::size_t size() const { return depth * height * width; }
  bool operator==(const StackShape&) const = default;
};

// Activations of one layer, channel-first (depth, height, width).
class FeatureStack {
 public:
  FeatureStack() = default;
  FeatureStack(StackShape shape, std::vector<float> data,
               std::int64_t layer_index = 0);

  const StackShape& shape() const { return shape_; }
  std::int64_t layer_index() const { return layer_index_; }
  void set_layer_index(std::int64_t index) { layer_index_ = index; }

  std::span<const float> data() const { return data_; }
  std::span<float> mutable_data() { return data_; }

  std::span<const float> slice(std::size_t k) const {
    return std::span<const float>(data_).subspan(k * shape_.plane(),
                                                 shape_.plane());
  }
  float at(std::size_t k, std::size_t i, std::size_t j) const {
    return data_[(k * shape_.height + i) * shape_.width + j];
  }

  bool operator==(const FeatureStack&) const = default;

 private:
  StackShape shape_;
  std::vector<float> data_;
  std::int64_t layer_index_ = 0;
};

enum class SaliencyMethod { kPeek, kEigenCam };

const char* MethodName(SaliencyMethod method);

// A 2-D scalar field, row-major.
class SaliencyMap {
 public:
  SaliencyMap() = default;
  SaliencyMap(std::size_t height, std::size_t width, std::vector<float> data,
              std::int64_t layer_index = 0,
              SaliencyMethod method = SaliencyMethod::kPeek);

  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }
  std::int64_t layer_index() const { return layer_index_; }
  SaliencyMethod method() const { return method_; }

  std::span<const float> data() const { return data_; }
  std::span<float> mutable_data() { return data_; }
  float at(std::size_t i, std::size_t j) const { return data_[i * width_ + j]; }

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<float> data_;
  std::int64_t layer_index_ = 0;
  SaliencyMethod method_ = SaliencyMethod::kPeek;
};

// 8-bit interleaved RGB raster.
class RgbImage {
 public:
  RgbImage() = default;
  RgbImage(std::size_t height, std::size_t width);
  RgbImage(std::size_t height, std::size_t width, std::vector<std::uint8_t> px);

  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }
  std::span<const std::uint8_t> pixels() const { return px_; }
  std::span<std::uint8_t> mutable_pixels() { return px_; }

  std::uint8_t* pixel(std::size_t i, std::size_t j) {
    return &px_[(i * width_ + j) * 3];
  }
  const std::uint8_t* pixel(std::size_t i, std::size_t j) const {
    return &px_[(i * width_ + j) * 3];
  }

  bool operator==(const RgbImage&) const = default;

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<std::uint8_t> px_;
};

// FNV-1a over the raw bytes of a map.
std::uint64_t Checksum(const SaliencyMap& map);

}  // namespace peekmap

#endif  // PEEKMAP_TENSOR_HPP_
