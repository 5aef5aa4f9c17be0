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

#ifndef PEEKMAP_TESTS_SUPPORT_HPP_
#define PEEKMAP_TESTS_SUPPORT_HPP_

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "peekmap/bundle.hpp"
#include "peekmap/metrics.hpp"
#include "peekmap/tensor.hpp"

namespace peekmap::testing {

// Unique scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "peekmap");
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

FeatureStack RandomStack(std::mt19937_64& rng, StackShape shape,
                         float lo = -2.0f, float hi = 2.0f);
FeatureStack RandomStack(std::mt19937_64& rng, std::size_t max_dim,
                         float lo = -2.0f, float hi = 2.0f);
RgbImage RandomImage(std::mt19937_64& rng, std::size_t h, std::size_t w);

// Layers with indices drawn in increasing order and random small shapes.
ActivationBundle RandomBundle(std::mt19937_64& rng, std::size_t layer_count);

// Deterministic bundle with layers 0, 2, 4, 6 over a 40x40 input.
ActivationBundle FixtureBundle();

// gt/, det/ and gt/sizes.json below `root` for a three-image toy set.
void WriteLabelFixture(const std::filesystem::path& root);

// Concatenate along depth.
FeatureStack ConcatDepth(const FeatureStack& a, const FeatureStack& b);

double RelativeError(double actual, double expected, double floor = 1.0);

// ---- oracles: written independently of the library code paths.

// Direct triple loop in double: sum_k x ln x with x = L + |min_slice|.
std::vector<double> PeekOracle(const FeatureStack& stack);

// Eigen-CAM via a dense symmetric eigendecomposition of M^T M (Eigen),
// with the nonnegative-projection-sum sign rule.
struct EigenCamOracleResult {
  std::vector<double> direction;
  std::vector<double> map;
  double eigengap = 0;  // (lambda1 - lambda2) / lambda1
};
EigenCamOracleResult EigenCamOracle(const FeatureStack& stack);

struct OracleReport {
  std::vector<double> map_per_threshold;
  double map_50_95 = 0;
};
// Brute-force evaluator: per class and threshold, explicit greedy matching
// and a 101-level scan over all curve points.
OracleReport MetricsOracle(const std::vector<Detection>& dets,
                           const std::vector<GroundTruthBox>& gts,
                           const std::vector<double>& thresholds);

struct DetectionInstance {
  std::vector<Detection> dets;
  std::vector<GroundTruthBox> gts;
};
// <= 5 images, <= 10 GT boxes per image, <= 3 classes; detections are
// jittered copies of GT plus clutter, confidences on a coarse grid so ties
// occur.
DetectionInstance RandomDetectionInstance(std::mt19937_64& rng);

}  // namespace peekmap::testing

#endif  // PEEKMAP_TESTS_SUPPORT_HPP_
