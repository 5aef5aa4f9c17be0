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

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "doctest.h"
#include "peekmap/peekmap.h"
#include "support.hpp"

namespace {

TEST_CASE("version and status names") {
  CHECK(std::string(peekmap_version()) == "1.0.0");
  CHECK(std::string(peekmap_status_name(PEEKMAP_OK)) == "ok");
  CHECK(std::string(peekmap_status_name(PEEKMAP_ERR_FORMAT)).size() > 0);
}

TEST_CASE("null handles are rejected") {
  peekmap_map* map = nullptr;
  CHECK(peekmap_peek_map(nullptr, 0, &map) == PEEKMAP_ERR_INVALID_ARGUMENT);
  CHECK(map == nullptr);
  CHECK(std::string(peekmap_last_error()).size() > 0);
  CHECK(peekmap_bundle_load(nullptr, nullptr) == PEEKMAP_ERR_INVALID_ARGUMENT);
  peekmap_stack_free(nullptr);
  peekmap_map_free(nullptr);
  peekmap_image_free(nullptr);
  peekmap_bundle_free(nullptr);
  peekmap_string_free(nullptr);
}

TEST_CASE("errors map to status codes") {
  double v = 0;
  CHECK(peekmap_entropy_kernel(-1.0, &v) == PEEKMAP_ERR_DOMAIN);
  CHECK(peekmap_entropy_kernel(2.0, &v) == PEEKMAP_OK);
  CHECK(v == doctest::Approx(-2.0 * std::log(2.0)));

  peekmap_stack* s = nullptr;
  CHECK(peekmap_tensor_read("/nonexistent/x.npy", &s) == PEEKMAP_ERR_IO);
  CHECK(std::string(peekmap_last_error()).find("x.npy") != std::string::npos);

  const float data[2] = {1, 2};
  CHECK(peekmap_stack_create(0, 1, 2, data, 0, &s) == PEEKMAP_ERR_INVALID_ARGUMENT);

  uint8_t rgb[3];
  CHECK(peekmap_colormap(1.5, rgb) == PEEKMAP_ERR_DOMAIN);
  CHECK(peekmap_colormap(0.0, rgb) == PEEKMAP_OK);
  CHECK(rgb[2] == 255);

  peekmap_bundle* b = nullptr;
  CHECK(peekmap_bundle_load("/nonexistent", &b) == PEEKMAP_ERR_IO);
}

TEST_CASE("saliency through the C API") {
  // Two channels of a 1x2 map: values PEEK of (1,2) and (3,4).
  const float data[4] = {1, 2, 3, 4};
  peekmap_stack* s = nullptr;
  REQUIRE(peekmap_stack_create(2, 1, 2, data, 7, &s) == PEEKMAP_OK);
  size_t d, h, w;
  peekmap_stack_shape(s, &d, &h, &w);
  CHECK(d == 2);
  CHECK(h == 1);
  CHECK(w == 2);

  peekmap_map* m = nullptr;
  REQUIRE(peekmap_peek_map(s, 0, &m) == PEEKMAP_OK);
  const float* p = peekmap_map_data(m);
  // shifts 1 and 3: x = (2,3) then (6,7)
  CHECK(p[0] == doctest::Approx(2 * std::log(2.0) + 6 * std::log(6.0)));
  CHECK(p[1] == doctest::Approx(3 * std::log(3.0) + 7 * std::log(7.0)));
  const uint64_t c1 = peekmap_map_checksum(m);

  peekmap_map* neg = nullptr;
  REQUIRE(peekmap_peek_map(s, 1, &neg) == PEEKMAP_OK);
  CHECK(peekmap_map_data(neg)[0] == -p[0]);
  CHECK(peekmap_map_checksum(neg) != c1);

  double dir[2];
  REQUIRE(peekmap_first_principal_direction(s, dir) == PEEKMAP_OK);
  CHECK(dir[0] * dir[0] + dir[1] * dir[1] == doctest::Approx(1.0));

  peekmap_map* e = nullptr;
  REQUIRE(peekmap_eigencam_map(s, &e) == PEEKMAP_OK);
  peekmap_map* n = nullptr;
  REQUIRE(peekmap_map_normalize(e, &n) == PEEKMAP_OK);
  CHECK(peekmap_map_data(n)[1] == 1.0f);

  peekmap_map* big = nullptr;
  REQUIRE(peekmap_map_resize(n, 4, 8, &big) == PEEKMAP_OK);
  peekmap_map_shape(big, &h, &w);
  CHECK(h == 4);
  CHECK(w == 8);

  std::vector<uint8_t> px(4 * 8 * 3, 10);
  peekmap_image* img = nullptr;
  REQUIRE(peekmap_image_create(4, 8, px.data(), &img) == PEEKMAP_OK);
  peekmap_image* over = nullptr;
  REQUIRE(peekmap_overlay(img, big, 0.0, &over) == PEEKMAP_OK);
  CHECK(std::memcmp(peekmap_image_pixels(over), px.data(), px.size()) == 0);
  CHECK(peekmap_overlay(img, n, 0.5, &over) == PEEKMAP_ERR_INVALID_ARGUMENT);

  const peekmap_image* both[2] = {img, over};
  peekmap_image* grid = nullptr;
  REQUIRE(peekmap_grid_compare(both, 2, 2, nullptr, &grid) == PEEKMAP_OK);
  peekmap_image_shape(grid, &h, &w);
  CHECK(h == 4);
  CHECK(w == 8 * 2 + 4);

  peekmap_bench_stats stats;
  REQUIRE(peekmap_bench_time(s, PEEKMAP_METHOD_PEEK, 3, 1, &stats) == PEEKMAP_OK);
  CHECK(stats.repeats == 3);
  CHECK(stats.checksum == c1);
  CHECK(peekmap_bench_time(s, PEEKMAP_METHOD_PEEK, 0, 1, &stats) ==
        PEEKMAP_ERR_INVALID_ARGUMENT);

  for (auto* x : {m, neg, e, n, big}) peekmap_map_free(x);
  for (auto* x : {img, over, grid}) peekmap_image_free(x);
  peekmap_stack_free(s);
}

TEST_CASE("bundle and tensor round trip through the C API") {
  std::mt19937_64 rng(21);
  peekmap::testing::TempDir dir;
  const auto src = peekmap::testing::RandomBundle(rng, 3);
  peekmap::SaveBundle(src, dir.path() / "b");

  peekmap_bundle* b = nullptr;
  REQUIRE(peekmap_bundle_load((dir.path() / "b").c_str(), &b) == PEEKMAP_OK);
  CHECK(std::string(peekmap_bundle_model_name(b)) == src.model_name);
  REQUIRE(peekmap_bundle_layer_count(b) == 3);

  peekmap_layer_info info;
  REQUIRE(peekmap_bundle_layer_info(b, 1, &info) == PEEKMAP_OK);
  CHECK(info.index == src.layers[1].index);
  CHECK(std::string(info.name) == src.layers[1].name);
  CHECK(info.depth == src.layers[1].shape.depth);
  CHECK(peekmap_bundle_layer_info(b, 3, &info) == PEEKMAP_ERR_INDEX);

  size_t pos = 0;
  REQUIRE(peekmap_bundle_find_layer(b, src.layers[2].index, &pos) == PEEKMAP_OK);
  CHECK(pos == 2);
  CHECK(peekmap_bundle_find_layer(b, -5, &pos) == PEEKMAP_ERR_INDEX);

  peekmap_stack* s = nullptr;
  REQUIRE(peekmap_bundle_layer_stack(b, 0, &s) == PEEKMAP_OK);
  peekmap_bundle_free(b);  // stack stays valid
  const auto& want = src.layers[0].stack.data();
  CHECK(std::memcmp(peekmap_stack_data(s), want.data(), want.size() * 4) == 0);

  const auto npy = (dir.path() / "t.npy").string();
  REQUIRE(peekmap_tensor_write(s, npy.c_str()) == PEEKMAP_OK);
  peekmap_stack* back = nullptr;
  REQUIRE(peekmap_tensor_read(npy.c_str(), &back) == PEEKMAP_OK);
  CHECK(std::memcmp(peekmap_stack_data(back), want.data(), want.size() * 4) == 0);

  peekmap_bundle* again = nullptr;
  REQUIRE(peekmap_bundle_load((dir.path() / "b").c_str(), &again) == PEEKMAP_OK);
  char* csv = nullptr;
  char* svg = nullptr;
  REQUIRE(peekmap_bench_run(again, 2, 0, &csv, &svg) == PEEKMAP_OK);
  CHECK(std::string(csv).rfind("layer_index,", 0) == 0);
  CHECK(std::string(svg).find("<svg") != std::string::npos);
  peekmap_string_free(csv);
  peekmap_string_free(svg);
  const auto out = (dir.path() / "copy").string();
  CHECK(peekmap_bundle_save(again, out.c_str()) == PEEKMAP_OK);
  peekmap_bundle_free(again);
  peekmap_stack_free(s);
  peekmap_stack_free(back);
}

}  // namespace
