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

#include "peekmap/tensor.hpp"

#include <cstring>
#include <string>

#include "peekmap/error.hpp"

namespace peekmap {

FeatureStack::FeatureStack(StackShape shape, std::vector<float> data,
                           std::int64_t layer_index)
    : shape_(shape), data_(std::move(data)), layer_index_(layer_index) {
  if (shape.depth == 0 || shape.height == 0 || shape.width == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "feature stack dimensions must be >= 1");
  }
  if (data_.size() != shape.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "feature stack holds " + std::to_string(data_.size()) +
                    " values, shape requires " + std::to_string(shape.size()));
  }
}

const char* MethodName(SaliencyMethod method) {
  switch (method) {
    case SaliencyMethod::kPeek:
      return "peek";
    case SaliencyMethod::kEigenCam:
      return "eigencam";
  }
  return "unknown";
}

SaliencyMap::SaliencyMap(std::size_t height, std::size_t width,
                         std::vector<float> data, std::int64_t layer_index,
                         SaliencyMethod method)
    : height_(height),
      width_(width),
      data_(std::move(data)),
      layer_index_(layer_index),
      method_(method) {
  if (height == 0 || width == 0 || data_.size() != height * width) {
    throw Error(ErrorCode::kInvalidArgument,
                "saliency map data does not match its dimensions");
  }
}

RgbImage::RgbImage(std::size_t height, std::size_t width)
    : RgbImage(height, width, std::vector<std::uint8_t>(height * width * 3)) {}

RgbImage::RgbImage(std::size_t height, std::size_t width,
                   std::vector<std::uint8_t> px)
    : height_(height), width_(width), px_(std::move(px)) {
  if (height == 0 || width == 0) {
    throw Error(ErrorCode::kInvalidArgument, "image dimensions must be >= 1");
  }
  if (px_.size() != height * width * 3) {
    throw Error(ErrorCode::kInvalidArgument,
                "image pixel buffer does not match its dimensions");
  }
}

std::uint64_t Checksum(const SaliencyMap& map) {
  std::uint64_t h = 1469598103934665603ULL;
  for (float v : map.data()) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    for (int b = 0; b < 4; ++b) {
      h ^= (bits >> (8 * b)) & 0xffu;
      h *= 1099511628211ULL;
    }
  }
  return h;
}

}  // namespace peekmap
