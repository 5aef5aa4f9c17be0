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

#include "peekmap/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>
#include <unordered_map>

#include "peekmap/error.hpp"

namespace peekmap {
namespace {

void CheckBox(const Box& b) {
  if (!b.valid()) {
    throw Error(ErrorCode::kInvalidArgument,
                "invalid box: requires x_min < x_max and y_min < y_max");
  }
}

// Indices sorted by confidence descending, ties kept in input order.
template <typename GetConf>
std::vector<std::size_t> ConfidenceOrder(std::size_t n, GetConf conf) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return conf(a) > conf(b);
  });
  return order;
}

void CheckThreshold(double t) {
  if (!(t > 0.0 && t <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "IoU threshold must lie in (0, 1], got " + std::to_string(t));
  }
}

}  // namespace

double Iou(const Box& a, const Box& b) {
  CheckBox(a);
  CheckBox(b);
  const double iw = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
  const double ih = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
  if (iw <= 0 || ih <= 0) return 0.0;
  const double inter = iw * ih;
  return inter / (a.area() + b.area() - inter);
}

std::vector<bool> MatchDetections(std::span<const Detection> dets,
                                  std::span<const GroundTruthBox> gts,
                                  double iou_threshold) {
  std::vector<bool> tp(dets.size(), false);
  std::vector<bool> used(gts.size(), false);
  const auto order =
      ConfidenceOrder(dets.size(), [&](std::size_t i) { return dets[i].confidence; });
  for (std::size_t di : order) {
    const Detection& det = dets[di];
    double best_iou = -1.0;
    std::size_t best = gts.size();
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (used[g] || gts[g].class_id != det.class_id) continue;
      const double v = Iou(det.box, gts[g].box);
      if (v > best_iou) {
        best_iou = v;
        best = g;
      }
    }
    if (best < gts.size() && best_iou >= iou_threshold) {
      used[best] = true;
      tp[di] = true;
    }
  }
  return tp;
}

PrecisionRecall ComputePrecisionRecall(const std::vector<bool>& tp_flags,
                                       std::size_t n_gt) {
  const auto tp = static_cast<std::size_t>(
      std::count(tp_flags.begin(), tp_flags.end(), true));
  PrecisionRecall pr;
  if (!tp_flags.empty()) pr.precision = double(tp) / double(tp_flags.size());
  if (n_gt > 0) pr.recall = double(tp) / double(n_gt);
  return pr;
}

PrCurve CurveFromFlags(const std::vector<bool>& tp_flags, std::size_t n_gt) {
  PrCurve curve;
  curve.n_gt = n_gt;
  curve.tp_flags = tp_flags;
  std::size_t tp = 0, fp = 0;
  for (bool flag : tp_flags) {
    flag ? ++tp : ++fp;
    curve.points.push_back({n_gt > 0 ? double(tp) / double(n_gt) : 0.0,
                            double(tp) / double(tp + fp)});
  }
  return curve;
}

PrCurve ComputePrCurve(std::span<const Detection> dets,
                       std::span<const GroundTruthBox> gts,
                       std::int64_t class_id, double iou_threshold) {
  CheckThreshold(iou_threshold);
  std::unordered_map<std::string, std::vector<GroundTruthBox>> gt_by_image;
  std::size_t n_gt = 0;
  for (const auto& g : gts) {
    if (g.class_id != class_id) continue;
    gt_by_image[g.image_id].push_back(g);
    ++n_gt;
  }
  // Keep the original position so pooled ties fall back to input order.
  std::unordered_map<std::string, std::vector<std::size_t>> det_by_image;
  std::vector<std::string> image_order;
  for (std::size_t i = 0; i < dets.size(); ++i) {
    if (dets[i].class_id != class_id) continue;
    auto [it, inserted] = det_by_image.try_emplace(dets[i].image_id);
    if (inserted) image_order.push_back(dets[i].image_id);
    it->second.push_back(i);
  }

  std::vector<bool> flag_of(dets.size(), false);
  std::vector<std::size_t> pooled;
  for (const auto& image : image_order) {
    const auto& idx = det_by_image[image];
    std::vector<Detection> local;
    local.reserve(idx.size());
    for (std::size_t i : idx) local.push_back(dets[i]);
    static const std::vector<GroundTruthBox> kNone;
    const auto git = gt_by_image.find(image);
    const auto flags = MatchDetections(
        local, git == gt_by_image.end() ? kNone : git->second, iou_threshold);
    for (std::size_t n = 0; n < idx.size(); ++n) flag_of[idx[n]] = flags[n];
    pooled.insert(pooled.end(), idx.begin(), idx.end());
  }
  std::sort(pooled.begin(), pooled.end());
  const auto order = ConfidenceOrder(
      pooled.size(), [&](std::size_t i) { return dets[pooled[i]].confidence; });

  std::vector<bool> flags;
  std::vector<double> confidences;
  for (std::size_t o : order) {
    flags.push_back(flag_of[pooled[o]]);
    confidences.push_back(dets[pooled[o]].confidence);
  }
  PrCurve curve = CurveFromFlags(flags, n_gt);
  curve.confidences = std::move(confidences);
  return curve;
}

double AveragePrecision(const PrCurve& curve) {
  const auto& pts = curve.points;
  if (pts.empty()) return 0.0;
  // Precision envelope: best precision at this recall or beyond.
  std::vector<double> envelope(pts.size());
  double best = 0.0;
  for (std::size_t i = pts.size(); i-- > 0;) {
    best = std::max(best, pts[i].precision);
    envelope[i] = best;
  }
  double sum = 0.0;
  std::size_t idx = 0;
  for (int r = 0; r <= 100; ++r) {
    const double level = double(r) / 100.0;
    while (idx < pts.size() && pts[idx].recall < level) ++idx;
    if (idx == pts.size()) break;
    sum += envelope[idx];
  }
  return sum / 101.0;
}

std::vector<double> CocoThresholds() {
  std::vector<double> t;
  for (int i = 0; i < 10; ++i) t.push_back(double(50 + 5 * i) / 100.0);
  return t;
}

EvalReport MeanAp(std::span<const Detection> dets,
                  std::span<const GroundTruthBox> gts,
                  std::span<const double> thresholds,
                  const EvalOptions& options) {
  if (gts.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "mAP is undefined without ground truth boxes");
  }
  if (thresholds.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no IoU thresholds given");
  }
  for (double t : thresholds) CheckThreshold(t);
  for (const auto& d : dets) {
    CheckBox(d.box);
    if (!(d.confidence >= 0.0 && d.confidence <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "detection confidence must lie in [0, 1]");
    }
  }
  for (const auto& g : gts) CheckBox(g.box);

  EvalReport report;
  report.confidence_threshold = options.confidence_threshold;
  const std::set<std::int64_t> classes = [&] {
    std::set<std::int64_t> s;
    for (const auto& g : gts) s.insert(g.class_id);
    return s;
  }();
  report.classes.assign(classes.begin(), classes.end());

  std::map<double, ThresholdResult> cache;
  auto evaluate = [&](double t) -> const ThresholdResult& {
    auto it = cache.find(t);
    if (it != cache.end()) return it->second;
    ThresholdResult r;
    r.iou_threshold = t;
    double sum = 0;
    for (auto c : classes) {
      const double ap = AveragePrecision(ComputePrCurve(dets, gts, c, t));
      r.class_ap[c] = ap;
      sum += ap;
    }
    r.map = sum / double(classes.size());
    return cache.emplace(t, std::move(r)).first->second;
  };

  for (double t : thresholds) report.thresholds.push_back(evaluate(t));
  double coco_sum = 0;
  for (double t : CocoThresholds()) coco_sum += evaluate(t).map;
  report.map_50 = evaluate(0.5).map;
  report.map_50_95 = coco_sum / 10.0;

  // Operating point at IoU 0.5 over detections above the confidence cut.
  std::vector<Detection> kept;
  for (const auto& d : dets) {
    if (d.confidence >= options.confidence_threshold) kept.push_back(d);
  }
  std::unordered_map<std::string, std::vector<std::size_t>> det_idx;
  std::unordered_map<std::string, std::vector<GroundTruthBox>> gt_img;
  for (std::size_t i = 0; i < kept.size(); ++i) det_idx[kept[i].image_id].push_back(i);
  for (const auto& g : gts) gt_img[g.image_id].push_back(g);
  std::size_t tp = 0;
  for (const auto& [image, idx] : det_idx) {
    std::vector<Detection> local;
    for (std::size_t i : idx) local.push_back(kept[i]);
    const auto flags = MatchDetections(local, gt_img[image], report.operating_iou);
    tp += static_cast<std::size_t>(std::count(flags.begin(), flags.end(), true));
  }
  report.tp = tp;
  report.fp = kept.size() - tp;
  report.fn = gts.size() - tp;
  report.precision = kept.empty() ? 0.0 : double(tp) / double(kept.size());
  report.recall = double(tp) / double(gts.size());
  return report;
}

}  // namespace peekmap
