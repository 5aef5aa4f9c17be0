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

#ifndef PEEKMAP_RENDER_HPP_
#define PEEKMAP_RENDER_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "peekmap/tensor.hpp"

namespace peekmap {

// (x - min) / (max - min); all zeros when max == min.
SaliencyMap MinMaxNormalize(const SaliencyMap& map);
// Same affine map with caller-supplied bounds, clamped to [0, 1]. Used for
// normalizing several maps against shared bounds.
SaliencyMap NormalizeWithBounds(const SaliencyMap& map, double lo, double hi);

// Jet-like colormap through blue, cyan, green, yellow, red at 0, .25, .5,
// .75, 1; channels rounded half-up. Throws kDomain outside [0, 1].
std::array<std::uint8_t, 3> Colormap(double t);

// Half-pixel-centre bilinear resize with border clamping.
SaliencyMap ResizeBilinear(const SaliencyMap& map, std::size_t out_height,
                           std::size_t out_width);

// round(alpha * colormap(t) + (1 - alpha) * image), per channel.
RgbImage Overlay(const RgbImage& image, const SaliencyMap& map01, double alpha);

// Grayscale rendering of the min-max-normalized channel k.
RgbImage RenderFeatureSlice(const FeatureStack& stack, std::size_t k);

// Row-major tiling with 4 px black gutters. Labels are validated for count
// but not drawn: the library carries no font.
RgbImage GridCompare(std::span<const RgbImage> images, std::size_t columns,
                     std::span<const std::string> labels);

inline constexpr std::size_t kGridGutter = 4;

}  // namespace peekmap

#endif  // PEEKMAP_RENDER_HPP_
