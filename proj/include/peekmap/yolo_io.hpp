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

#ifndef PEEKMAP_YOLO_IO_HPP_
#define PEEKMAP_YOLO_IO_HPP_

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "peekmap/metrics.hpp"

namespace peekmap {

// {"image_id": [h, w], ...}
using ImageSizes = std::map<std::string, std::pair<double, double>>;

ImageSizes ReadImageSizes(const std::filesystem::path& json_path);

// Label directories hold one <image_id>.txt per image. Ground truth lines
// are "class xc yc w h", detection lines "class conf xc yc w h", all
// normalized to [0, 1] and denormalized with the image size.
std::vector<GroundTruthBox> ReadGroundTruthDir(const std::filesystem::path& dir,
                                               const ImageSizes& sizes);
std::vector<Detection> ReadDetectionDir(const std::filesystem::path& dir,
                                        const ImageSizes& sizes);

std::string ReportToJson(const EvalReport& report);
std::string ReportToTable(const EvalReport& report);

}  // namespace peekmap

#endif  // PEEKMAP_YOLO_IO_HPP_
