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

#include "peekmap/render.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "peekmap/error.hpp"

namespace peekmap {
namespace {

std::uint8_t RoundHalfUp(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
}

struct Stop {
  double t;
  double rgb[3];
};

constexpr Stop kStops[] = {
    {0.00, {0, 0, 255}},   {0.25, {0, 255, 255}}, {0.50, {0, 255, 0}},
    {0.75, {255, 255, 0}}, {1.00, {255, 0, 0}},
};

}  // namespace

SaliencyMap NormalizeWithBounds(const SaliencyMap& map, double lo, double hi) {
  std::vector<float> out(map.data().size(), 0.0f);
  if (hi > lo) {
    const double range = hi - lo;
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] = static_cast<float>(
          std::clamp((double(map.data()[i]) - lo) / range, 0.0, 1.0));
    }
  }
  return SaliencyMap(map.height(), map.width(), std::move(out),
                     map.layer_index(), map.method());
}

SaliencyMap MinMaxNormalize(const SaliencyMap& map) {
  const auto [lo, hi] = std::minmax_element(map.data().begin(), map.data().end());
  return NormalizeWithBounds(map, *lo, *hi);
}

std::array<std::uint8_t, 3> Colormap(double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw Error(ErrorCode::kDomain,
                "colormap input must lie in [0, 1], got " + std::to_string(t));
  }
  std::size_t seg = 0;
  while (seg + 2 < std::size(kStops) && t > kStops[seg + 1].t) ++seg;
  const Stop& a = kStops[seg];
  const Stop& b = kStops[seg + 1];
  const double u = (t - a.t) / (b.t - a.t);
  std::array<std::uint8_t, 3> rgb{};
  for (int c = 0; c < 3; ++c) {
    rgb[c] = RoundHalfUp(a.rgb[c] + (b.rgb[c] - a.rgb[c]) * u);
  }
  return rgb;
}

SaliencyMap ResizeBilinear(const SaliencyMap& map, std::size_t out_height,
                           std::size_t out_width) {
  if (out_height == 0 || out_width == 0) {
    throw Error(ErrorCode::kInvalidArgument, "resize target must be >= 1x1");
  }
  const std::size_t in_h = map.height(), in_w = map.width();
  const double sy = double(in_h) / double(out_height);
  const double sx = double(in_w) / double(out_width);

  struct Tap {
    std::size_t i0, i1;
    double frac;
  };
  auto taps = [](std::size_t out_n, std::size_t in_n, double scale) {
    std::vector<Tap> t(out_n);
    for (std::size_t o = 0; o < out_n; ++o) {
      const double src = std::clamp((double(o) + 0.5) * scale - 0.5, 0.0,
                                    double(in_n - 1));
      const auto i0 = static_cast<std::size_t>(std::floor(src));
      t[o] = {i0, std::min(i0 + 1, in_n - 1), src - double(i0)};
    }
    return t;
  };
  const auto ty = taps(out_height, in_h, sy);
  const auto tx = taps(out_width, in_w, sx);

  std::vector<float> out(out_height * out_width);
  for (std::size_t y = 0; y < out_height; ++y) {
    for (std::size_t x = 0; x < out_width; ++x) {
      const auto& a = ty[y];
      const auto& b = tx[x];
      const double top = map.at(a.i0, b.i0) * (1 - b.frac) + map.at(a.i0, b.i1) * b.frac;
      const double bot = map.at(a.i1, b.i0) * (1 - b.frac) + map.at(a.i1, b.i1) * b.frac;
      out[y * out_width + x] = static_cast<float>(top * (1 - a.frac) + bot * a.frac);
    }
  }
  return SaliencyMap(out_height, out_width, std::move(out), map.layer_index(),
                     map.method());
}

RgbImage Overlay(const RgbImage& image, const SaliencyMap& map01, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(ErrorCode::kDomain, "overlay alpha must lie in [0, 1]");
  }
  if (image.height() != map01.height() || image.width() != map01.width()) {
    throw Error(ErrorCode::kInvalidArgument,
                "overlay map is " + std::to_string(map01.height()) + "x" +
                    std::to_string(map01.width()) + " but image is " +
                    std::to_string(image.height()) + "x" +
                    std::to_string(image.width()));
  }
  RgbImage out(image.height(), image.width());
  for (std::size_t i = 0; i < image.height(); ++i) {
    for (std::size_t j = 0; j < image.width(); ++j) {
      const auto heat = Colormap(std::clamp(double(map01.at(i, j)), 0.0, 1.0));
      const std::uint8_t* src = image.pixel(i, j);
      std::uint8_t* dst = out.pixel(i, j);
      for (int c = 0; c < 3; ++c) {
        dst[c] = RoundHalfUp(alpha * heat[c] + (1.0 - alpha) * src[c]);
      }
    }
  }
  return out;
}

RgbImage RenderFeatureSlice(const FeatureStack& stack, std::size_t k) {
  const auto& s = stack.shape();
  if (k >= s.depth) {
    throw Error(ErrorCode::kIndex, "channel " + std::to_string(k) +
                                       " out of range for depth " +
                                       std::to_string(s.depth));
  }
  const auto slice = stack.slice(k);
  const SaliencyMap normalized = MinMaxNormalize(SaliencyMap(
      s.height, s.width, std::vector<float>(slice.begin(), slice.end())));
  RgbImage out(s.height, s.width);
  auto px = out.mutable_pixels();
  for (std::size_t p = 0; p < normalized.data().size(); ++p) {
    const std::uint8_t g = RoundHalfUp(normalized.data()[p] * 255.0);
    px[3 * p] = px[3 * p + 1] = px[3 * p + 2] = g;
  }
  return out;
}

RgbImage GridCompare(std::span<const RgbImage> images, std::size_t columns,
                     std::span<const std::string> labels) {
  if (images.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "grid needs at least one image");
  }
  if (columns == 0) {
    throw Error(ErrorCode::kInvalidArgument, "grid columns must be >= 1");
  }
  if (!labels.empty() && labels.size() != images.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "grid has " + std::to_string(images.size()) + " images but " +
                    std::to_string(labels.size()) + " labels");
  }
  const std::size_t h = images[0].height(), w = images[0].width();
  for (const auto& img : images) {
    if (img.height() != h || img.width() != w) {
      throw Error(ErrorCode::kInvalidArgument,
                  "grid images must share dimensions");
    }
  }
  const std::size_t cols = std::min(columns, images.size());
  const std::size_t rows = (images.size() + cols - 1) / cols;
  RgbImage out(rows * h + (rows - 1) * kGridGutter,
               cols * w + (cols - 1) * kGridGutter);
  for (std::size_t n = 0; n < images.size(); ++n) {
    const std::size_t oy = (n / cols) * (h + kGridGutter);
    const std::size_t ox = (n % cols) * (w + kGridGutter);
    for (std::size_t i = 0; i < h; ++i) {
      std::copy_n(images[n].pixel(i, 0), w * 3, out.pixel(oy + i, ox));
    }
  }
  return out;
}

}  // namespace peekmap
