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

#ifndef PEEKMAP_METRICS_HPP_
#define PEEKMAP_METRICS_HPP_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace peekmap {

struct Box {
  double x_min = 0, y_min = 0, x_max = 0, y_max = 0;

  bool valid() const { return x_min < x_max && y_min < y_max; }
  double area() const { return (x_max - x_min) * (y_max - y_min); }
};

struct Detection {
  std::string image_id;
  std::int64_t class_id = 0;
  double confidence = 0;
  Box box;
};

struct GroundTruthBox {
  std::string image_id;
  std::int64_t class_id = 0;
  Box box;
};

double Iou(const Box& a, const Box& b);

// Greedy matching within one image. Returns one TP flag per detection in
// the input order.
std::vector<bool> MatchDetections(std::span<const Detection> dets,
                                  std::span<const GroundTruthBox> gts,
                                  double iou_threshold);

struct PrecisionRecall {
  double precision = 0;
  double recall = 0;
};

PrecisionRecall ComputePrecisionRecall(const std::vector<bool>& tp_flags,
                                       std::size_t n_gt);

struct PrPoint {
  double recall = 0;
  double precision = 0;
};

struct PrCurve {
  std::vector<PrPoint> points;
  std::vector<bool> tp_flags;        // confidence-descending order
  std::vector<double> confidences;   // same order
  std::size_t n_gt = 0;
};

// Build a curve from flags already in confidence-descending order.
PrCurve CurveFromFlags(const std::vector<bool>& tp_flags, std::size_t n_gt);

PrCurve ComputePrCurve(std::span<const Detection> dets,
                       std::span<const GroundTruthBox> gts,
                       std::int64_t class_id, double iou_threshold);

// 101-point interpolated AP.
double AveragePrecision(const PrCurve& curve);

struct ThresholdResult {
  double iou_threshold = 0;
  std::map<std::int64_t, double> class_ap;
  double map = 0;
};

struct EvalReport {
  std::vector<ThresholdResult> thresholds;  // requested thresholds
  double map_50 = 0;
  double map_50_95 = 0;
  double confidence_threshold = 0;
  double operating_iou = 0.5;
  double precision = 0;
  double recall = 0;
  std::size_t tp = 0, fp = 0, fn = 0;
  std::vector<std::int64_t> classes;  // classes present in ground truth
};

// The ten COCO thresholds 0.50, 0.55, ..., 0.95.
std::vector<double> CocoThresholds();

struct EvalOptions {
  double confidence_threshold = 0.25;
};

// Throws kInvalidArgument when ground truth is empty or a threshold is
// outside (0, 1]. mAP@0.5 and mAP@0.5:0.95 are always reported regardless
// of which thresholds were requested.
EvalReport MeanAp(std::span<const Detection> dets,
                  std::span<const GroundTruthBox> gts,
                  std::span<const double> thresholds,
                  const EvalOptions& options = {});

}  // namespace peekmap

#endif  // PEEKMAP_METRICS_HPP_
