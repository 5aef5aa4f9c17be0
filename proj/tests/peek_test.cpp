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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <numbers>
#include <random>

#include "doctest.h"
#include "peekmap/error.hpp"
#include "peekmap/peek.hpp"
#include "support.hpp"

namespace peekmap {
namespace {

constexpr double kE = std::numbers::e;

TEST_CASE("entropy kernel values") {
  CHECK(EntropyKernel(0.0) == 0.0);
  CHECK(EntropyKernel(1.0) == 0.0);
  CHECK(EntropyKernel(kE) == doctest::Approx(-2.718281828).epsilon(1e-9));
  CHECK(EntropyKernel(0.5) == doctest::Approx(0.5 * std::log(2.0)));
  CHECK_THROWS_AS(EntropyKernel(-1e-12), Error);
  CHECK_THROWS_AS(EntropyKernel(std::nan("")), Error);
}

TEST_CASE("vectorizable x ln x kernel tracks std::log") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> exponent(-120.0, 120.0);
  CHECK(XLogX(0.0) == 0.0);
  CHECK(XLogX(1.0) == 0.0);
  double worst = 0;
  for (int n = 0; n < 200000; ++n) {
    const double x = std::pow(2.0, exponent(rng));
    const double ref = x * std::log(x);
    worst = std::max(worst, testing::RelativeError(XLogX(x), ref, 1e-300));
  }
  // Values near x = 1 lose relative accuracy only through ln x itself.
  for (double x : {1.0 - 1e-9, 1.0 + 1e-9, 0.999, 1.001, 2.0, 0.5, 3.0}) {
    worst = std::max(worst, testing::RelativeError(XLogX(x), x * std::log(x), 1e-300));
  }
  CHECK(worst < 4e-16);
}

TEST_CASE("positivize shifts each slice by |min|") {
  SUBCASE("negative minimum") {
    const auto out = Positivize(FeatureStack({1, 2, 2}, {-1, 0, 1, 2}));
    CHECK(std::vector<float>(out.data().begin(), out.data().end()) ==
          std::vector<float>{0, 1, 2, 3});
  }
  SUBCASE("all zero") {
    const auto out = Positivize(FeatureStack({2, 2, 1}, {0, 0, 0, 0}));
    for (float v : out.data()) CHECK(v == 0.0f);
  }
  SUBCASE("positive minimum is still added") {
    const auto out = Positivize(FeatureStack({1, 1, 1}, {5}));
    CHECK(out.data()[0] == 10.0f);
  }
  SUBCASE("slices are independent") {
    const auto out = Positivize(FeatureStack({2, 1, 2}, {-3, 1, 2, 4}));
    CHECK(std::vector<float>(out.data().begin(), out.data().end()) ==
          std::vector<float>{0, 4, 4, 6});
  }
}

TEST_CASE("positivize minimum property") {
  std::mt19937_64 rng(2);
  for (int n = 0; n < 200; ++n) {
    const auto stack = testing::RandomStack(rng, 8, -3.0f, 3.0f);
    const auto out = Positivize(stack);
    for (std::size_t k = 0; k < stack.shape().depth; ++k) {
      const auto in = stack.slice(k);
      const auto pos = out.slice(k);
      const float in_min = *std::min_element(in.begin(), in.end());
      const float out_min = *std::min_element(pos.begin(), pos.end());
      CHECK(out_min >= 0.0f);
      if (in_min <= 0.0f) CHECK(out_min == 0.0f);
    }
  }
}

TEST_CASE("peek map worked examples") {
  SUBCASE("single slice with zero minimum") {
    const auto m = PeekMap(FeatureStack({1, 2, 2}, {0, 1, 2, 3}));
    CHECK(m.height() == 2);
    CHECK(m.width() == 2);
    CHECK(m.at(0, 0) == 0.0f);
    CHECK(m.at(0, 1) == 0.0f);
    CHECK(m.at(1, 0) == doctest::Approx(1.386294).epsilon(1e-6));
    CHECK(m.at(1, 1) == doctest::Approx(3.295837).epsilon(1e-6));
    CHECK(m.method() == SaliencyMethod::kPeek);
  }
  SUBCASE("column (e, 1) after positivization") {
    // A 1x1 slice v shifts to 2v, so raw e/2 and 0.5 give (e, 1).
    const auto m = PeekMap(FeatureStack(
        {2, 1, 1}, {static_cast<float>(kE / 2), 0.5f}));
    CHECK(m.at(0, 0) == doctest::Approx(2.718282).epsilon(1e-6));
  }
  SUBCASE("negate flips the sign") {
    const FeatureStack s({1, 2, 2}, {0, 1, 2, 3});
    const auto a = PeekMap(s, false);
    const auto b = PeekMap(s, true);
    for (std::size_t i = 0; i < 4; ++i) CHECK(b.data()[i] == -a.data()[i]);
  }
}

TEST_CASE("values in {0,1} after positivization give a zero map") {
  std::mt19937_64 rng(8);
  for (int n = 0; n < 50; ++n) {
    const StackShape shape{1 + rng() % 6, 1 + rng() % 6, 1 + rng() % 6};
    std::vector<float> data(shape.size());
    // Each slice keeps a 0 so the shift is 0; the rest are 0 or 1.
    for (std::size_t k = 0; k < shape.depth; ++k) {
      for (std::size_t p = 0; p < shape.plane(); ++p) {
        data[k * shape.plane() + p] = p == 0 ? 0.0f : float(rng() % 2);
      }
    }
    const auto m = PeekMap(FeatureStack(shape, data));
    for (float v : m.data()) CHECK(v == 0.0f);
  }
  const auto zeros = PeekMap(FeatureStack({3, 4, 5}, std::vector<float>(60, 0.0f)));
  for (float v : zeros.data()) CHECK(v == 0.0f);
}

TEST_CASE("peek map matches the triple-loop oracle") {
  std::mt19937_64 rng(21);
  for (int n = 0; n < 100; ++n) {
    const auto stack = testing::RandomStack(rng, 8, -4.0f, 4.0f);
    const auto ref = testing::PeekOracle(stack);
    const auto m = PeekMap(stack);
    for (std::size_t p = 0; p < ref.size(); ++p) {
      CHECK(testing::RelativeError(m.data()[p], ref[p]) < 1e-6);
    }
  }
}

TEST_CASE("depth permutation leaves the map unchanged") {
  std::mt19937_64 rng(4);
  for (int n = 0; n < 50; ++n) {
    const auto stack = testing::RandomStack(rng, 8);
    const auto& s = stack.shape();
    std::vector<std::size_t> perm(s.depth);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<float> data;
    for (std::size_t k : perm) {
      const auto sl = stack.slice(k);
      data.insert(data.end(), sl.begin(), sl.end());
    }
    const auto a = PeekMap(stack);
    const auto b = PeekMap(FeatureStack(s, data));
    for (std::size_t p = 0; p < s.plane(); ++p) CHECK(a.data()[p] == b.data()[p]);
  }
}

TEST_CASE("depth concatenation adds maps") {
  std::mt19937_64 rng(8);
  for (int n = 0; n < 50; ++n) {
    const auto a = testing::RandomStack(rng, 8);
    const auto b = testing::RandomStack(
        rng, StackShape{1 + rng() % 8, a.shape().height, a.shape().width});
    const auto ab = PeekMap(testing::ConcatDepth(a, b));
    const auto pa = PeekMap(a);
    const auto pb = PeekMap(b);
    for (std::size_t p = 0; p < a.shape().plane(); ++p) {
      const double sum = double(pa.data()[p]) + pb.data()[p];
      CHECK(testing::RelativeError(ab.data()[p], sum) <= 1e-5);
    }
  }
}

TEST_CASE("input errors") {
  CHECK_THROWS_AS(FeatureStack({0, 1, 1}, {}), Error);
  CHECK_THROWS_AS(FeatureStack({1, 2, 2}, {1, 2, 3}), Error);
}

}  // namespace
}  // namespace peekmap
