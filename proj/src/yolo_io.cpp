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

#include "peekmap/yolo_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "peekmap/error.hpp"

namespace peekmap {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

std::vector<fs::path> LabelFiles(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw Error(ErrorCode::kIo, dir.string() + ": not a label directory");
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

const std::pair<double, double>& SizeFor(const ImageSizes& sizes,
                                         const fs::path& file) {
  const auto it = sizes.find(file.stem().string());
  if (it == sizes.end()) {
    throw Error(ErrorCode::kFormat, file.string() + ": no image size for '" +
                                        file.stem().string() + "'");
  }
  return it->second;
}

// Parses every non-blank, non-comment line into `columns` numbers.
template <typename OnRow>
void ForEachRow(const fs::path& file, std::size_t columns, OnRow on_row) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorCode::kIo, file.string() + ": cannot open");
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream row(line);
    std::vector<double> values;
    double v;
    while (row >> v) values.push_back(v);
    if (!row.eof() || values.size() != columns) {
      throw Error(ErrorCode::kFormat, file.string() + ":" + std::to_string(n) +
                                          ": expected " + std::to_string(columns) +
                                          " numeric columns");
    }
    try {
      on_row(values);
    } catch (const Error& e) {
      throw Error(e.code(), file.string() + ":" + std::to_string(n) + ": " + e.what());
    }
  }
}

std::int64_t ClassId(double v) {
  if (v < 0 || v != static_cast<double>(static_cast<std::int64_t>(v))) {
    throw Error(ErrorCode::kFormat, "class id must be a nonnegative integer");
  }
  return static_cast<std::int64_t>(v);
}

Box Denormalize(double xc, double yc, double w, double h,
                const std::pair<double, double>& size) {
  const auto [img_h, img_w] = size;
  Box b{(xc - w / 2) * img_w, (yc - h / 2) * img_h, (xc + w / 2) * img_w,
        (yc + h / 2) * img_h};
  if (!b.valid()) throw Error(ErrorCode::kFormat, "box has zero extent");
  return b;
}

std::string Fixed(double v, int digits = 4) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

ImageSizes ReadImageSizes(const fs::path& json_path) {
  std::ifstream in(json_path);
  if (!in) throw Error(ErrorCode::kIo, json_path.string() + ": cannot open");
  ImageSizes sizes;
  try {
    const json doc = json::parse(in);
    for (const auto& [id, hw] : doc.items()) {
      const auto v = hw.get<std::vector<double>>();
      if (v.size() != 2 || !(v[0] > 0) || !(v[1] > 0)) {
        throw Error(ErrorCode::kFormat,
                    json_path.string() + ": size of '" + id + "' must be [h, w]");
      }
      sizes[id] = {v[0], v[1]};
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kFormat, json_path.string() + ": " + e.what());
  }
  return sizes;
}

std::vector<GroundTruthBox> ReadGroundTruthDir(const fs::path& dir,
                                               const ImageSizes& sizes) {
  std::vector<GroundTruthBox> out;
  for (const auto& file : LabelFiles(dir)) {
    const auto& size = SizeFor(sizes, file);
    ForEachRow(file, 5, [&](const std::vector<double>& v) {
      out.push_back({file.stem().string(), ClassId(v[0]),
                     Denormalize(v[1], v[2], v[3], v[4], size)});
    });
  }
  return out;
}

std::vector<Detection> ReadDetectionDir(const fs::path& dir,
                                        const ImageSizes& sizes) {
  std::vector<Detection> out;
  for (const auto& file : LabelFiles(dir)) {
    const auto& size = SizeFor(sizes, file);
    ForEachRow(file, 6, [&](const std::vector<double>& v) {
      if (!(v[1] >= 0 && v[1] <= 1)) {
        throw Error(ErrorCode::kFormat, "confidence must lie in [0, 1]");
      }
      out.push_back({file.stem().string(), ClassId(v[0]), v[1],
                     Denormalize(v[2], v[3], v[4], v[5], size)});
    });
  }
  return out;
}

std::string ReportToJson(const EvalReport& report) {
  ordered_json doc;
  doc["schema_version"] = 1;
  doc["map_50"] = report.map_50;
  doc["map_50_95"] = report.map_50_95;
  doc["classes"] = report.classes;
  ordered_json thresholds = ordered_json::array();
  for (const auto& t : report.thresholds) {
    ordered_json aps = ordered_json::object();
    for (const auto& [c, ap] : t.class_ap) aps[std::to_string(c)] = ap;
    thresholds.push_back({{"iou", t.iou_threshold}, {"map", t.map}, {"class_ap", aps}});
  }
  doc["thresholds"] = thresholds;
  doc["operating_point"] = {{"confidence", report.confidence_threshold},
                            {"iou", report.operating_iou},
                            {"precision", report.precision},
                            {"recall", report.recall},
                            {"tp", report.tp},
                            {"fp", report.fp},
                            {"fn", report.fn}};
  return doc.dump(2) + "\n";
}

std::string ReportToTable(const EvalReport& report) {
  std::ostringstream out;
  out << "IoU     mAP     ";
  for (auto c : report.classes) out << "AP[" << c << "]   ";
  out << "\n";
  for (const auto& t : report.thresholds) {
    out << Fixed(t.iou_threshold, 2) << "    " << Fixed(t.map) << "  ";
    for (auto c : report.classes) out << Fixed(t.class_ap.at(c)) << "   ";
    out << "\n";
  }
  out << "mAP@0.5      " << Fixed(report.map_50) << "\n";
  out << "mAP@0.5:0.95 " << Fixed(report.map_50_95) << "\n";
  out << "conf>=" << Fixed(report.confidence_threshold, 2) << " IoU "
      << Fixed(report.operating_iou, 2) << ": P " << Fixed(report.precision)
      << "  R " << Fixed(report.recall) << "  TP " << report.tp << "  FP "
      << report.fp << "  FN " << report.fn << "\n";
  return out.str();
}

}  // namespace peekmap
