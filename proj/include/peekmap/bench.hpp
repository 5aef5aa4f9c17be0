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

#ifndef PEEKMAP_BENCH_HPP_
#define PEEKMAP_BENCH_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "peekmap/bundle.hpp"
#include "peekmap/tensor.hpp"

namespace peekmap {

struct BenchRecord {
  std::int64_t layer_index = 0;
  std::string layer_name;
  StackShape shape;
  SaliencyMethod method = SaliencyMethod::kPeek;
  int repeats = 0;
  double mean_ns = 0;
  double std_ns = 0;  // population
  std::uint64_t checksum = 0;
  std::optional<double> speedup;  // PEEK rows: eigencam mean / peek mean
};

// Untimed warmup runs followed by timed runs on a steady clock. Every run's
// output checksum must agree; a mismatch is a kNumeric error.
BenchRecord TimeMethod(SaliencyMethod method, const FeatureStack& stack,
                       int repeats, int warmup);

// Two records per layer, ordered by layer index then PEEK before Eigen-CAM.
std::vector<BenchRecord> RunBenchmark(const ActivationBundle& bundle,
                                      int repeats, int warmup);

std::string BenchToCsv(const std::vector<BenchRecord>& records);
// Bar chart of mean runtime per layer and method, log-scaled.
std::string BenchToSvg(const std::vector<BenchRecord>& records);

}  // namespace peekmap

#endif  // PEEKMAP_BENCH_HPP_
