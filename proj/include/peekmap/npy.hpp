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

#ifndef PEEKMAP_NPY_HPP_
#define PEEKMAP_NPY_HPP_

#include <filesystem>

#include "peekmap/tensor.hpp"

namespace peekmap {

// NPY v1.0, C-order, little-endian float32, rank 3 only.
FeatureStack ReadTensor(const std::filesystem::path& path);
void WriteTensor(const FeatureStack& stack, const std::filesystem::path& path);

}  // namespace peekmap

#endif  // PEEKMAP_NPY_HPP_
