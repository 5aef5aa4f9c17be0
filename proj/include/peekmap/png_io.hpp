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

#ifndef PEEKMAP_PNG_IO_HPP_
#define PEEKMAP_PNG_IO_HPP_

#include <filesystem>

#include "peekmap/tensor.hpp"

namespace peekmap {

// Gray, palette and alpha inputs are converted to 8-bit RGB.
RgbImage ReadPng(const std::filesystem::path& path);
// 8-bit RGB, non-interlaced, fixed compression settings.
void WritePng(const RgbImage& image, const std::filesystem::path& path);

}  // namespace peekmap

#endif  // PEEKMAP_PNG_IO_HPP_
