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

#include "peekmap/peek.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "peekmap/error.hpp"

namespace peekmap {
namespace {

// x ln x for x = 0 or a normal double, branch-free so the per-slice loop
// vectorizes. Reduction x = m 2^e with m in [sqrt(2)/2, sqrt(2)), then the
// fdlibm log kernel on m; error below 1 ulp of ln x.
inline double XLogXInline(double x) {
  constexpr double kLn2Hi = 6.93147180369123816490e-01;
  constexpr double kLn2Lo = 1.90821492927058770002e-10;
  constexpr double kLg1 = 6.666666666666735130e-01;
  constexpr double kLg2 = 3.999999999940941908e-01;
  constexpr double kLg3 = 2.857142874366239149e-01;
  constexpr double kLg4 = 2.222219843214978396e-01;
  constexpr double kLg5 = 1.818357216161805012e-01;
  constexpr double kLg6 = 1.531383769920937332e-01;
  constexpr double kLg7 = 1.479819860511658591e-01;

  // Zero is evaluated as ln 1 so that x * ln x comes out 0. Inputs come
  // from float sums, so every nonzero x is a normal double.
  const double safe = x > 0.0 ? x : 1.0;
  std::uint64_t bits = std::bit_cast<std::uint64_t>(safe);
  // Bias the exponent so the mantissa lands in [sqrt(2)/2, sqrt(2)).
  bits += 0x3ff0000000000000ULL - 0x3fe6a09e00000000ULL;
  // Exponent to double without an int conversion: OR the biased exponent
  // into the mantissa of 2^52 and subtract.
  const double dk =
      std::bit_cast<double>((bits >> 52) | 0x4330000000000000ULL) -
      (4503599627370496.0 + 1023.0);
  bits = (bits & 0x000fffffffffffffULL) + 0x3fe6a09e00000000ULL;
  const double f = std::bit_cast<double>(bits) - 1.0;

  const double hfsq = 0.5 * f * f;
  const double s = f / (2.0 + f);
  const double z = s * s;
  const double w = z * z;
  const double t1 = w * (kLg2 + w * (kLg4 + w * kLg6));
  const double t2 = z * (kLg1 + w * (kLg3 + w * (kLg5 + w * kLg7)));
  const double r = t2 + t1;
  const double log_x =
      dk * kLn2Hi - ((hfsq - (s * (hfsq + r) + dk * kLn2Lo)) - f);
  // x = 0 evaluates ln 1 = 0, so the product is already 0.
  return x * log_x;
}

// acc[p] += x ln x over one shifted slice. Cloned per ISA and dispatched at
// load time; no clone enables FMA, so all clones round identically.
#if defined(__GNUC__) && defined(__x86_64__) && !defined(__clang__)
__attribute__((target_clones("avx512f", "avx2", "default")))
#endif
void AccumulateSlice(const float* slice, std::size_t n, double shift,
                     double* acc) {
  for (std::size_t p = 0; p < n; ++p) {
    acc[p] += XLogXInline(static_cast<double>(slice[p]) + shift);
  }
}

float SliceShift(std::span<const float> slice) {
  return std::fabs(*std::min_element(slice.begin(), slice.end()));
}

}  // namespace

double XLogX(double x) { return XLogXInline(x); }

double EntropyKernel(double x) {
  if (!(x >= 0.0)) {
    throw Error(ErrorCode::kDomain,
                "entropy kernel requires x >= 0, got " + std::to_string(x));
  }
  if (x == 0.0) return 0.0;
  return -x * std::log(x);
}

FeatureStack Positivize(const FeatureStack& stack) {
  FeatureStack out = stack;
  auto data = out.mutable_data();
  const std::size_t plane = stack.shape().plane();
  for (std::size_t k = 0; k < stack.shape().depth; ++k) {
    const float shift = SliceShift(stack.slice(k));
    for (std::size_t p = k * plane; p < (k + 1) * plane; ++p) data[p] += shift;
  }
  return out;
}

SaliencyMap PeekMap(const FeatureStack& stack, bool negate) {
  const auto& shape = stack.shape();
  const std::size_t plane = shape.plane();
  std::vector<double> acc(plane, 0.0);
  for (std::size_t k = 0; k < shape.depth; ++k) {
    const auto slice = stack.slice(k);
    const double shift = SliceShift(slice);
    // -g(x) = x ln x, zero at x = 0.
    AccumulateSlice(slice.data(), plane, shift, acc.data());
  }
  std::vector<float> out(plane);
  const double sign = negate ? -1.0 : 1.0;
  for (std::size_t p = 0; p < plane; ++p) {
    out[p] = static_cast<float>(sign * acc[p]);
  }
  return SaliencyMap(shape.height, shape.width, std::move(out),
                     stack.layer_index(), SaliencyMethod::kPeek);
}

}  // namespace peekmap
