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

#include "support.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <unistd.h>

namespace peekmap::testing {

namespace fs = std::filesystem;

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  path_ = fs::temp_directory_path() /
          (tag + "_" + std::to_string(::getpid()) + "_" +
           std::to_string(counter.fetch_add(1)));
  fs::remove_all(path_);
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

FeatureStack RandomStack(std::mt19937_64& rng, StackShape shape, float lo,
                         float hi) {
  std::uniform_real_distribution<float> dist(lo, hi);
  std::vector<float> data(shape.size());
  for (auto& v : data) v = dist(rng);
  return FeatureStack(shape, std::move(data));
}

FeatureStack RandomStack(std::mt19937_64& rng, std::size_t max_dim, float lo,
                         float hi) {
  std::uniform_int_distribution<std::size_t> dim(1, max_dim);
  return RandomStack(rng, StackShape{dim(rng), dim(rng), dim(rng)}, lo, hi);
}

RgbImage RandomImage(std::mt19937_64& rng, std::size_t h, std::size_t w) {
  std::uniform_int_distribution<int> byte(0, 255);
  std::vector<std::uint8_t> px(h * w * 3);
  for (auto& p : px) p = static_cast<std::uint8_t>(byte(rng));
  return RgbImage(h, w, std::move(px));
}

ActivationBundle RandomBundle(std::mt19937_64& rng, std::size_t layer_count) {
  ActivationBundle b;
  b.model_name = "toy-" + std::to_string(rng() % 1000);
  std::uniform_int_distribution<std::size_t> side(1, 12);
  b.input_image = RandomImage(rng, side(rng) + 4, side(rng) + 4);
  std::int64_t index = static_cast<std::int64_t>(rng() % 3);
  static const char* kTypes[] = {"Conv", "C3", "SPPF", "Upsample", "Concat"};
  for (std::size_t n = 0; n < layer_count; ++n) {
    LayerRecord layer;
    layer.index = index;
    index += 1 + static_cast<std::int64_t>(rng() % 3);
    layer.name = "model." + std::to_string(layer.index);
    layer.file = LayerFileName(layer.index);
    layer.module_type = kTypes[rng() % 5];
    layer.stack = RandomStack(rng, 6, -5.0f, 5.0f);
    layer.stack.set_layer_index(layer.index);
    layer.shape = layer.stack.shape();
    b.layers.push_back(std::move(layer));
  }
  return b;
}

ActivationBundle FixtureBundle() {
  std::mt19937_64 rng(2024);
  ActivationBundle b;
  b.model_name = "fixture";
  b.input_image = RandomImage(rng, 40, 40);
  const StackShape shapes[] = {{8, 20, 20}, {16, 10, 10}, {32, 5, 5}, {3, 40, 40}};
  for (std::int64_t n = 0; n < 4; ++n) {
    LayerRecord layer;
    layer.index = 2 * n;
    layer.name = "model." + std::to_string(layer.index);
    layer.file = LayerFileName(layer.index);
    layer.module_type = "Conv";
    layer.stack = RandomStack(rng, shapes[n], -3.0f, 3.0f);
    layer.stack.set_layer_index(layer.index);
    layer.shape = layer.stack.shape();
    b.layers.push_back(std::move(layer));
  }
  return b;
}

void WriteLabelFixture(const std::filesystem::path& root) {
  namespace fs = std::filesystem;
  fs::create_directories(root / "gt");
  fs::create_directories(root / "det");
  auto put = [](const fs::path& p, const char* text) { std::ofstream(p) << text; };
  put(root / "gt" / "sizes.json", R"({"img0": [480, 640], "img1": [320, 320], "img2": [100, 200]})");
  put(root / "gt" / "img0.txt", "0 0.5 0.5 0.2 0.3\n1 0.2 0.2 0.1 0.1\n");
  put(root / "gt" / "img1.txt", "0 0.4 0.6 0.3 0.3\n");
  put(root / "gt" / "img2.txt", "2 0.5 0.5 0.5 0.5\n0 0.1 0.1 0.1 0.1\n");
  put(root / "det" / "img0.txt", "0 0.9 0.51 0.5 0.2 0.3\n1 0.6 0.2 0.21 0.1 0.1\n0 0.3 0.8 0.8 0.1 0.1\n");
  put(root / "det" / "img1.txt", "0 0.8 0.42 0.6 0.3 0.28\n");
  put(root / "det" / "img2.txt", "2 0.7 0.5 0.5 0.45 0.5\n0 0.2 0.5 0.5 0.2 0.2\n");
}

FeatureStack ConcatDepth(const FeatureStack& a, const FeatureStack& b) {
  std::vector<float> data(a.data().begin(), a.data().end());
  data.insert(data.end(), b.data().begin(), b.data().end());
  return FeatureStack({a.shape().depth + b.shape().depth, a.shape().height,
                       a.shape().width},
                      std::move(data));
}

double RelativeError(double actual, double expected, double floor) {
  return std::fabs(actual - expected) / std::max(std::fabs(expected), floor);
}

std::vector<double> PeekOracle(const FeatureStack& stack) {
  const auto& s = stack.shape();
  std::vector<double> shift(s.depth);
  for (std::size_t k = 0; k < s.depth; ++k) {
    double m = stack.at(k, 0, 0);
    for (std::size_t i = 0; i < s.height; ++i)
      for (std::size_t j = 0; j < s.width; ++j) m = std::min<double>(m, stack.at(k, i, j));
    shift[k] = std::fabs(m);
  }
  std::vector<double> out(s.plane());
  for (std::size_t i = 0; i < s.height; ++i) {
    for (std::size_t j = 0; j < s.width; ++j) {
      double p = 0;
      for (std::size_t k = 0; k < s.depth; ++k) {
        const double x = double(stack.at(k, i, j)) + shift[k];
        const double g = x == 0.0 ? 0.0 : -x * std::log(x);
        p -= g;
      }
      out[i * s.width + j] = p;
    }
  }
  return out;
}

EigenCamOracleResult EigenCamOracle(const FeatureStack& stack) {
  const auto& s = stack.shape();
  Eigen::MatrixXd m(s.plane(), s.depth);
  for (std::size_t k = 0; k < s.depth; ++k)
    for (std::size_t i = 0; i < s.height; ++i)
      for (std::size_t j = 0; j < s.width; ++j) m(i * s.width + j, k) = stack.at(k, i, j);
  const Eigen::MatrixXd gram = m.transpose() * m;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
  const auto& values = solver.eigenvalues();  // ascending
  Eigen::VectorXd v = solver.eigenvectors().col(s.depth - 1);
  EigenCamOracleResult r;
  const double top = values(s.depth - 1);
  r.eigengap = s.depth > 1 && top > 0 ? (top - values(s.depth - 2)) / top : 1.0;
  if (top == 0.0) {
    v.setZero();
    v(0) = 1.0;
  }
  Eigen::VectorXd proj = m * v;
  if (proj.sum() < 0) {
    v = -v;
    proj = -proj;
  }
  r.direction.assign(v.data(), v.data() + v.size());
  r.map.assign(proj.data(), proj.data() + proj.size());
  return r;
}

namespace {

double OracleIou(const Box& a, const Box& b) {
  const double x0 = std::max(a.x_min, b.x_min), x1 = std::min(a.x_max, b.x_max);
  const double y0 = std::max(a.y_min, b.y_min), y1 = std::min(a.y_max, b.y_max);
  const double inter = (x1 > x0 && y1 > y0) ? (x1 - x0) * (y1 - y0) : 0.0;
  const double area_a = (a.x_max - a.x_min) * (a.y_max - a.y_min);
  const double area_b = (b.x_max - b.x_min) * (b.y_max - b.y_min);
  return inter / (area_a + area_b - inter);
}

double OracleAp(const std::vector<Detection>& dets,
                const std::vector<GroundTruthBox>& gts, std::int64_t cls,
                double thr) {
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < dets.size(); ++i)
    if (dets[i].class_id == cls) order.push_back(i);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dets[a].confidence > dets[b].confidence;
  });
  std::vector<std::size_t> gt_idx;
  for (std::size_t g = 0; g < gts.size(); ++g)
    if (gts[g].class_id == cls) gt_idx.push_back(g);
  const std::size_t n_gt = gt_idx.size();

  // Greedy per image is equivalent to greedy over the pooled order when
  // matches never cross images.
  std::set<std::size_t> used;
  std::vector<std::pair<double, double>> points;  // recall, precision
  int tp = 0, seen = 0;
  for (std::size_t d : order) {
    double best = -1;
    std::size_t best_g = SIZE_MAX;
    for (std::size_t g : gt_idx) {
      if (used.count(g) || gts[g].image_id != dets[d].image_id) continue;
      const double v = OracleIou(dets[d].box, gts[g].box);
      if (v > best) {
        best = v;
        best_g = g;
      }
    }
    ++seen;
    if (best_g != SIZE_MAX && best >= thr) {
      used.insert(best_g);
      ++tp;
    }
    points.emplace_back(n_gt ? double(tp) / double(n_gt) : 0.0,
                        double(tp) / double(seen));
  }
  double sum = 0;
  for (int r = 0; r <= 100; ++r) {
    const double level = double(r) / 100.0;
    double best = 0;
    for (const auto& [rec, prec] : points)
      if (rec >= level) best = std::max(best, prec);
    sum += best;
  }
  return sum / 101.0;
}

}  // namespace

OracleReport MetricsOracle(const std::vector<Detection>& dets,
                           const std::vector<GroundTruthBox>& gts,
                           const std::vector<double>& thresholds) {
  std::set<std::int64_t> classes;
  for (const auto& g : gts) classes.insert(g.class_id);
  auto map_at = [&](double t) {
    double s = 0;
    for (auto c : classes) s += OracleAp(dets, gts, c, t);
    return s / double(classes.size());
  };
  OracleReport r;
  for (double t : thresholds) r.map_per_threshold.push_back(map_at(t));
  double coco = 0;
  for (int i = 0; i < 10; ++i) coco += map_at(double(50 + 5 * i) / 100.0);
  r.map_50_95 = coco / 10.0;
  return r;
}

DetectionInstance RandomDetectionInstance(std::mt19937_64& rng) {
  DetectionInstance inst;
  std::uniform_int_distribution<int> n_images(1, 5), n_boxes(0, 10), cls(0, 2);
  std::uniform_real_distribution<double> pos(0, 80), size(5, 30), jitter(-6, 6),
      unit(0, 1);
  const int images = n_images(rng);
  for (int im = 0; im < images; ++im) {
    const std::string id = "img" + std::to_string(im);
    const int boxes = n_boxes(rng);
    for (int b = 0; b < boxes; ++b) {
      const double x = pos(rng), y = pos(rng);
      const Box box{x, y, x + size(rng), y + size(rng)};
      const auto c = cls(rng);
      inst.gts.push_back({id, c, box});
      const int copies = static_cast<int>(rng() % 3);  // misses and duplicates
      for (int k = 0; k < copies; ++k) {
        const double dx = jitter(rng), dy = jitter(rng);
        Box d{box.x_min + dx, box.y_min + dy, box.x_max + dx + jitter(rng) / 2,
              box.y_max + dy + jitter(rng) / 2};
        if (!d.valid()) d = box;
        const std::int64_t dc = unit(rng) < 0.1 ? cls(rng) : c;
        inst.dets.push_back({id, dc, double(rng() % 11) / 10.0, d});
      }
    }
    const int clutter = static_cast<int>(rng() % 4);
    for (int k = 0; k < clutter; ++k) {
      const double x = pos(rng), y = pos(rng);
      inst.dets.push_back({id, cls(rng), double(rng() % 11) / 10.0,
                           Box{x, y, x + size(rng), y + size(rng)}});
    }
  }
  if (inst.gts.empty()) {
    inst.gts.push_back({"img0", 0, Box{10, 10, 30, 30}});
  }
  std::shuffle(inst.dets.begin(), inst.dets.end(), rng);
  return inst;
}

}  // namespace peekmap::testing
