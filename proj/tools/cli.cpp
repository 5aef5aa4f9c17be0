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

#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "CLI11.hpp"
#include "peekmap/peekmap.h"

namespace peekmap::cli {
namespace {

namespace fs = std::filesystem;

// Failure carrying the exit code it maps to.
struct CliError : std::runtime_error {
  CliError(int code, const std::string& what)
      : std::runtime_error(what), exit_code(code) {}
  int exit_code;
};

void Check(peekmap_status status) {
  if (status != PEEKMAP_OK) throw CliError(kExitData, peekmap_last_error());
}

template <auto Free>
struct Deleter {
  template <typename T>
  void operator()(T* p) const {
    Free(p);
  }
};
using Bundle = std::unique_ptr<peekmap_bundle, Deleter<peekmap_bundle_free>>;
using Stack = std::unique_ptr<peekmap_stack, Deleter<peekmap_stack_free>>;
using Map = std::unique_ptr<peekmap_map, Deleter<peekmap_map_free>>;
using Image = std::unique_ptr<peekmap_image, Deleter<peekmap_image_free>>;
using CString = std::unique_ptr<char, Deleter<peekmap_string_free>>;

template <typename Handle, typename Fn, typename... Args>
Handle Make(Fn fn, Args... args) {
  typename Handle::pointer raw = nullptr;
  Check(fn(args..., &raw));
  return Handle(raw);
}

struct Config {
  std::string bundle;
  std::string layers = "all";
  std::string out = ".";
  double alpha = 0.5;
  bool negate = false;
  bool global_norm = false;
  std::string channels;
  std::string gt, det, sizes, iou = "0.5", metrics_out;
  double conf = 0.25;
  int repeats = 10, warmup = 2;
  std::string bench_out, svg_out;
};

std::vector<std::string> SplitCsv(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(' '));
    item.erase(item.find_last_not_of(' ') + 1);
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

std::int64_t ParseInteger(const std::string& text, const std::string& flag) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty()) {
    throw CliError(kExitUsage, flag + ": '" + text + "' is not an integer");
  }
  return v;
}

std::string Padded(std::int64_t v, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%0*lld", width, static_cast<long long>(v));
  return buf;
}

std::string LayerPrefix(std::int64_t index) { return "layer_" + Padded(index, 3); }

// Bundle positions of the selected layers, in index order.
std::vector<std::size_t> SelectLayers(const peekmap_bundle* bundle,
                                      const std::string& selection) {
  std::vector<std::size_t> positions;
  const std::size_t count = peekmap_bundle_layer_count(bundle);
  if (selection == "all") {
    for (std::size_t i = 0; i < count; ++i) positions.push_back(i);
    return positions;
  }
  for (const auto& part : SplitCsv(selection)) {
    const auto index = ParseInteger(part, "--layers");
    std::size_t pos = 0;
    if (peekmap_bundle_find_layer(bundle, index, &pos) != PEEKMAP_OK) {
      throw CliError(kExitData, "--layers: bundle has no layer with index " +
                                    std::to_string(index));
    }
    positions.push_back(pos);
  }
  std::sort(positions.begin(), positions.end());
  positions.erase(std::unique(positions.begin(), positions.end()), positions.end());
  if (positions.empty()) throw CliError(kExitUsage, "--layers: empty selection");
  return positions;
}

std::size_t WorkerCount(std::size_t jobs) {
  std::size_t cap = 0;
  if (const char* env = std::getenv("PEEKMAP_THREADS")) {
    cap = static_cast<std::size_t>(std::strtoul(env, nullptr, 10));
  }
  if (cap == 0) cap = std::max(1u, std::thread::hardware_concurrency());
  return std::max<std::size_t>(1, std::min(cap, jobs));
}

// Runs job(i) for i in [0, n) on a small pool. The first failure by job
// order is rethrown so error messages do not depend on scheduling.
void ParallelFor(std::size_t n, const std::function<void(std::size_t)>& job) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        job(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t workers = WorkerCount(n);
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

Bundle LoadBundle(const std::string& path) {
  if (path.empty()) throw CliError(kExitUsage, "--bundle is required");
  peekmap_bundle* raw = nullptr;
  if (peekmap_bundle_load(path.c_str(), &raw) != PEEKMAP_OK) {
    throw CliError(kExitData, std::string("--bundle: ") + peekmap_last_error());
  }
  return Bundle(raw);
}

fs::path PrepareOut(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (!fs::is_directory(dir)) {
    throw CliError(kExitData, "--out: cannot create directory " + dir);
  }
  return dir;
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  f << text;
  if (!f) throw CliError(kExitData, path.string() + ": write failed");
}

struct LayerMaps {
  std::int64_t index = 0;
  std::string name;
  Map peek, eigencam;
};

std::pair<double, double> Bounds(const peekmap_map* map) {
  std::size_t h = 0, w = 0;
  peekmap_map_shape(map, &h, &w);
  const float* d = peekmap_map_data(map);
  const auto [lo, hi] = std::minmax_element(d, d + h * w);
  return {*lo, *hi};
}

std::string SummaryRow(const LayerMaps& layer, const char* method,
                       const peekmap_map* map) {
  std::size_t h = 0, w = 0;
  peekmap_map_shape(map, &h, &w);
  const float* d = peekmap_map_data(map);
  double sum = 0;
  for (std::size_t i = 0; i < h * w; ++i) sum += d[i];
  const auto [lo, hi] = Bounds(map);
  char buf[160];
  std::snprintf(buf, sizeof buf, ",%s,%.9g,%.9g,%.9g,%016llx\n", method, lo, hi,
                sum / double(h * w),
                static_cast<unsigned long long>(peekmap_map_checksum(map)));
  std::string name = layer.name;
  if (name.find_first_of(",\"") != std::string::npos) {
    std::string q = "\"";
    for (char c : name) q += (c == '"') ? std::string("\"\"") : std::string(1, c);
    name = q + "\"";
  }
  return std::to_string(layer.index) + "," + name + buf;
}

enum class Mode { kPeek, kEigenCam, kCompare };

int RunSaliency(const Config& cfg, Mode mode, std::ostream& out) {
  const Bundle bundle = LoadBundle(cfg.bundle);
  const auto positions = SelectLayers(bundle.get(), cfg.layers);
  const fs::path dir = PrepareOut(cfg.out);
  const bool want_peek = mode != Mode::kEigenCam;
  const bool want_eigen = mode != Mode::kPeek;

  std::vector<LayerMaps> maps(positions.size());
  ParallelFor(positions.size(), [&](std::size_t n) {
    peekmap_layer_info info{};
    Check(peekmap_bundle_layer_info(bundle.get(), positions[n], &info));
    const Stack stack = Make<Stack>(peekmap_bundle_layer_stack, bundle.get(),
                                    positions[n]);
    maps[n].index = info.index;
    maps[n].name = info.name;
    if (want_peek) {
      maps[n].peek = Make<Map>(peekmap_peek_map, stack.get(), cfg.negate ? 1 : 0);
    }
    if (want_eigen) maps[n].eigencam = Make<Map>(peekmap_eigencam_map, stack.get());
  });

  // Shared bounds per method when normalizing globally.
  auto global = [&](Map LayerMaps::*member) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& m : maps) {
      if (!(m.*member)) continue;
      const auto [a, b] = Bounds((m.*member).get());
      lo = std::min(lo, a);
      hi = std::max(hi, b);
    }
    return std::pair{lo, hi};
  };
  const auto peek_bounds = want_peek ? global(&LayerMaps::peek) : std::pair{0.0, 0.0};
  const auto eigen_bounds =
      want_eigen ? global(&LayerMaps::eigencam) : std::pair{0.0, 0.0};

  const Image input = Make<Image>(peekmap_bundle_input_image, bundle.get());
  std::size_t img_h = 0, img_w = 0;
  peekmap_image_shape(input.get(), &img_h, &img_w);

  auto render = [&](const peekmap_map* raw, std::pair<double, double> bounds) {
    const Map normalized =
        cfg.global_norm
            ? Make<Map>(peekmap_map_normalize_bounds, raw, bounds.first, bounds.second)
            : Make<Map>(peekmap_map_normalize, raw);
    const Map resized =
        Make<Map>(peekmap_map_resize, normalized.get(), img_h, img_w);
    return Make<Image>(peekmap_overlay, input.get(), resized.get(), cfg.alpha);
  };

  ParallelFor(maps.size(), [&](std::size_t n) {
    const auto& m = maps[n];
    const fs::path prefix = dir / LayerPrefix(m.index);
    Image peek_img, eigen_img;
    if (want_peek) peek_img = render(m.peek.get(), peek_bounds);
    if (want_eigen) eigen_img = render(m.eigencam.get(), eigen_bounds);
    if (mode == Mode::kPeek) {
      Check(peekmap_image_write_png(peek_img.get(), (prefix.string() + "_peek.png").c_str()));
    } else if (mode == Mode::kEigenCam) {
      Check(peekmap_image_write_png(eigen_img.get(),
                                    (prefix.string() + "_eigencam.png").c_str()));
    } else {
      const peekmap_image* tiles[] = {peek_img.get(), eigen_img.get()};
      const char* labels[] = {"PEEK", "Eigen-CAM"};
      const Image grid = Make<Image>(peekmap_grid_compare, tiles, std::size_t{2},
                                     std::size_t{2}, labels);
      Check(peekmap_image_write_png(grid.get(), (prefix.string() + "_compare.png").c_str()));
    }
  });

  const char* label = mode == Mode::kPeek       ? "peek"
                      : mode == Mode::kEigenCam ? "eigencam"
                                                : "compare";
  std::string csv = "layer_index,layer_name,method,min,max,mean,checksum\n";
  for (const auto& m : maps) {
    if (want_peek) csv += SummaryRow(m, "peek", m.peek.get());
    if (want_eigen) csv += SummaryRow(m, "eigencam", m.eigencam.get());
  }
  WriteText(dir / (std::string(label) + "_summary.csv"), csv);
  out << "wrote " << maps.size() << " layer(s) to " << dir.string() << "\n";
  return kExitOk;
}

int RunFeatures(const Config& cfg, std::ostream& out) {
  const Bundle bundle = LoadBundle(cfg.bundle);
  const auto positions = SelectLayers(bundle.get(), cfg.layers);
  const fs::path dir = PrepareOut(cfg.out);
  std::atomic<std::size_t> written{0};
  ParallelFor(positions.size(), [&](std::size_t n) {
    peekmap_layer_info info{};
    Check(peekmap_bundle_layer_info(bundle.get(), positions[n], &info));
    const Stack stack = Make<Stack>(peekmap_bundle_layer_stack, bundle.get(),
                                    positions[n]);
    std::vector<std::size_t> channels;
    if (cfg.channels.empty()) {
      for (std::size_t k = 0; k < std::min<std::size_t>(info.depth, 8); ++k) {
        channels.push_back(k);
      }
    } else if (cfg.channels == "all") {
      for (std::size_t k = 0; k < info.depth; ++k) channels.push_back(k);
    } else {
      for (const auto& part : SplitCsv(cfg.channels)) {
        const auto k = ParseInteger(part, "--channels");
        if (k < 0 || static_cast<std::size_t>(k) >= info.depth) {
          throw CliError(kExitData, "--channels: channel " + std::to_string(k) +
                                        " out of range for layer " +
                                        std::to_string(info.index) + " (depth " +
                                        std::to_string(info.depth) + ")");
        }
        channels.push_back(static_cast<std::size_t>(k));
      }
    }
    for (std::size_t k : channels) {
      const Image img = Make<Image>(peekmap_render_feature_slice, stack.get(), k);
      const fs::path file = dir / (LayerPrefix(info.index) + "_feat_" +
                                   Padded(static_cast<std::int64_t>(k), 4) + ".png");
      Check(peekmap_image_write_png(img.get(), file.c_str()));
      ++written;
    }
  });
  out << "wrote " << written.load() << " feature map(s) to " << dir.string() << "\n";
  return kExitOk;
}

std::vector<double> ParseThresholds(const std::string& text) {
  if (text == "0.5:0.95") {
    std::vector<double> t;
    for (int i = 0; i < 10; ++i) t.push_back(double(50 + 5 * i) / 100.0);
    return t;
  }
  std::vector<double> t;
  for (const auto& part : SplitCsv(text)) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != part.size() || !(v > 0.0 && v <= 1.0)) {
      throw CliError(kExitUsage, "--iou: '" + part + "' is not a threshold in (0, 1]");
    }
    t.push_back(v);
  }
  if (t.empty()) throw CliError(kExitUsage, "--iou: no thresholds given");
  return t;
}

int RunMetrics(const Config& cfg, std::ostream& out) {
  if (cfg.gt.empty() || cfg.det.empty()) {
    throw CliError(kExitUsage, "metrics requires --gt and --det");
  }
  const auto thresholds = ParseThresholds(cfg.iou);
  const std::string sizes =
      cfg.sizes.empty() ? (fs::path(cfg.gt) / "sizes.json").string() : cfg.sizes;
  char* json = nullptr;
  char* table = nullptr;
  Check(peekmap_evaluate_label_dirs(cfg.gt.c_str(), cfg.det.c_str(), sizes.c_str(),
                                    thresholds.data(), thresholds.size(), cfg.conf,
                                    &json, &table));
  const CString json_owner(json), table_owner(table);
  if (cfg.metrics_out.empty()) {
    out << json;
  } else {
    WriteText(cfg.metrics_out, json);
    out << table;
  }
  return kExitOk;
}

int RunBench(const Config& cfg, std::ostream& out) {
  const Bundle bundle = LoadBundle(cfg.bundle);
  char* csv = nullptr;
  char* svg = nullptr;
  Check(peekmap_bench_run(bundle.get(), cfg.repeats, cfg.warmup, &csv,
                          cfg.svg_out.empty() ? nullptr : &svg));
  const CString csv_owner(csv), svg_owner(svg);
  if (cfg.bench_out.empty()) {
    out << csv;
  } else {
    WriteText(cfg.bench_out, csv);
    out << "wrote " << cfg.bench_out << "\n";
  }
  if (svg) WriteText(cfg.svg_out, svg);
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  Config cfg;
  CLI::App app{"peekmap: entropy saliency maps, Eigen-CAM baselines and "
               "detection metrics for CNN activation bundles",
               "peekmap"};
  app.require_subcommand(1);
  app.set_version_flag("--version", peekmap_version());

  auto add_bundle = [&](CLI::App* sub) {
    sub->add_option("--bundle", cfg.bundle, "Activation bundle directory")->required();
    sub->add_option("--layers", cfg.layers, "Layer indices (comma list) or 'all'")
        ->capture_default_str();
  };
  auto add_render = [&](CLI::App* sub, bool negate) {
    sub->add_option("--out", cfg.out, "Output directory")->capture_default_str();
    sub->add_option("--alpha", cfg.alpha, "Heatmap opacity")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    sub->add_flag("--global-norm", cfg.global_norm,
                  "Normalize against bounds shared by all selected layers");
    if (negate) sub->add_flag("--negate", cfg.negate, "Flip the sign of PEEK values");
  };

  auto* peek = app.add_subcommand("peek", "PEEK overlays per selected layer");
  add_bundle(peek);
  add_render(peek, true);
  auto* eigen = app.add_subcommand("eigencam", "Eigen-CAM overlays per selected layer");
  add_bundle(eigen);
  add_render(eigen, false);
  auto* compare = app.add_subcommand("compare", "PEEK | Eigen-CAM grid per layer");
  add_bundle(compare);
  add_render(compare, true);

  auto* features = app.add_subcommand("features", "Grayscale feature-map dumps");
  add_bundle(features);
  features->add_option("--out", cfg.out, "Output directory")->capture_default_str();
  features->add_option("--channels", cfg.channels,
                       "Channel indices (comma list) or 'all' [default: first 8]");

  auto* metrics = app.add_subcommand("metrics", "mAP evaluation of YOLO label dirs");
  metrics->add_option("--gt", cfg.gt, "Ground-truth label directory")->required();
  metrics->add_option("--det", cfg.det, "Detection label directory")->required();
  metrics->add_option("--sizes", cfg.sizes,
                      "Image size JSON {\"id\": [h, w]} [default: <gt>/sizes.json]");
  metrics->add_option("--iou", cfg.iou, "IoU thresholds (comma list) or 0.5:0.95")
      ->capture_default_str();
  metrics->add_option("--conf", cfg.conf, "Confidence cut for precision/recall")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  metrics->add_option("--out", cfg.metrics_out,
                      "Write the JSON report here and print a table instead");

  auto* bench = app.add_subcommand("bench", "Time PEEK against Eigen-CAM per layer");
  bench->add_option("--bundle", cfg.bundle, "Activation bundle directory")->required();
  bench->add_option("--repeats", cfg.repeats, "Timed runs per layer and method")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench->add_option("--warmup", cfg.warmup, "Untimed runs before timing")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  bench->add_option("--out", cfg.bench_out, "CSV output file [default: stdout]");
  bench->add_option("--svg", cfg.svg_out, "Optional SVG bar chart");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    // Help and version requests exit 0; everything else is a usage error.
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (peek->parsed()) return RunSaliency(cfg, Mode::kPeek, out);
    if (eigen->parsed()) return RunSaliency(cfg, Mode::kEigenCam, out);
    if (compare->parsed()) return RunSaliency(cfg, Mode::kCompare, out);
    if (features->parsed()) return RunFeatures(cfg, out);
    if (metrics->parsed()) return RunMetrics(cfg, out);
    if (bench->parsed()) return RunBench(cfg, out);
  } catch (const CliError& e) {
    err << "peekmap: " << e.what() << "\n";
    return e.exit_code;
  } catch (const std::exception& e) {
    err << "peekmap: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace peekmap::cli
