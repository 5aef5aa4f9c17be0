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

#include "peekmap/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "peekmap/eigencam.hpp"
#include "peekmap/error.hpp"
#include "peekmap/peek.hpp"

namespace peekmap {
namespace {

SaliencyMap Compute(SaliencyMethod method, const FeatureStack& stack) {
  return method == SaliencyMethod::kPeek ? PeekMap(stack, false)
                                         : EigenCamMap(stack);
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string Format(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

}  // namespace

BenchRecord TimeMethod(SaliencyMethod method, const FeatureStack& stack,
                       int repeats, int warmup) {
  if (repeats < 1) {
    throw Error(ErrorCode::kInvalidArgument, "repeats must be >= 1");
  }
  if (warmup < 0) {
    throw Error(ErrorCode::kInvalidArgument, "warmup must be >= 0");
  }
  BenchRecord rec;
  rec.layer_index = stack.layer_index();
  rec.shape = stack.shape();
  rec.method = method;
  rec.repeats = repeats;

  auto run = [&] {
    try {
      return Checksum(Compute(method, stack));
    } catch (const Error& e) {
      throw Error(e.code(), "layer " + std::to_string(stack.layer_index()) +
                                ": " + e.what());
    }
  };
  for (int i = 0; i < warmup; ++i) run();

  std::vector<double> ns(static_cast<std::size_t>(repeats));
  for (int i = 0; i < repeats; ++i) {
    const auto start = std::chrono::steady_clock::now();
    const std::uint64_t sum = run();
    const auto stop = std::chrono::steady_clock::now();
    ns[i] = std::max<double>(
        1.0, std::chrono::duration<double, std::nano>(stop - start).count());
    if (i == 0) {
      rec.checksum = sum;
    } else if (sum != rec.checksum) {
      throw Error(ErrorCode::kNumeric,
                  std::string(MethodName(method)) + " output changed between "
                  "repeats on layer " + std::to_string(stack.layer_index()));
    }
  }
  double mean = 0;
  for (double v : ns) mean += v;
  mean /= repeats;
  double var = 0;
  for (double v : ns) var += (v - mean) * (v - mean);
  rec.mean_ns = mean;
  rec.std_ns = repeats > 1 ? std::sqrt(var / repeats) : 0.0;
  return rec;
}

std::vector<BenchRecord> RunBenchmark(const ActivationBundle& bundle,
                                      int repeats, int warmup) {
  std::vector<BenchRecord> records;
  for (const auto& layer : bundle.layers) {
    FeatureStack stack = layer.stack;
    stack.set_layer_index(layer.index);
    auto peek = TimeMethod(SaliencyMethod::kPeek, stack, repeats, warmup);
    auto eigen = TimeMethod(SaliencyMethod::kEigenCam, stack, repeats, warmup);
    peek.layer_name = eigen.layer_name = layer.name;
    peek.speedup = eigen.mean_ns / peek.mean_ns;
    records.push_back(std::move(peek));
    records.push_back(std::move(eigen));
  }
  return records;
}

std::string BenchToCsv(const std::vector<BenchRecord>& records) {
  std::ostringstream out;
  out << "layer_index,layer_name,d,l,w,method,repeats,mean_ns,std_ns,speedup\n";
  for (const auto& r : records) {
    out << r.layer_index << ',' << CsvField(r.layer_name) << ','
        << r.shape.depth << ',' << r.shape.height << ',' << r.shape.width << ','
        << MethodName(r.method) << ',' << r.repeats << ','
        << Format("%.1f", r.mean_ns) << ',' << Format("%.1f", r.std_ns) << ','
        << (r.speedup ? Format("%.3f", *r.speedup) : std::string()) << '\n';
  }
  return out.str();
}

std::string BenchToSvg(const std::vector<BenchRecord>& records) {
  constexpr double kBar = 10, kGap = 8, kLeft = 60, kTop = 30, kHeight = 240;
  const std::size_t layers = records.size() / 2;
  const double width = kLeft + layers * (2 * kBar + kGap) + 20;
  double lo = 1e300, hi = 0;
  for (const auto& r : records) {
    lo = std::min(lo, r.mean_ns);
    hi = std::max(hi, r.mean_ns);
  }
  const double log_lo = records.empty() ? 0 : std::floor(std::log10(lo));
  const double log_hi = records.empty() ? 1 : std::max(log_lo + 1, std::ceil(std::log10(hi)));
  auto y_of = [&](double ns) {
    return kTop + kHeight * (1 - (std::log10(ns) - log_lo) / (log_hi - log_lo));
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << kTop + kHeight + 40 << "\" font-family=\"sans-serif\" "
      << "font-size=\"10\">\n";
  svg << "<text x=\"" << kLeft << "\" y=\"16\">mean runtime per layer (ns, log scale)"
      << " - peek (blue) vs eigencam (red)</text>\n";
  for (double e = log_lo; e <= log_hi; ++e) {
    const double y = y_of(std::pow(10.0, e));
    svg << "<line x1=\"" << kLeft << "\" x2=\"" << width - 20 << "\" y1=\"" << y
        << "\" y2=\"" << y << "\" stroke=\"#ddd\"/>\n";
    svg << "<text x=\"4\" y=\"" << y + 3 << "\">1e" << int(e) << "</text>\n";
  }
  for (std::size_t n = 0; n < records.size(); ++n) {
    const auto& r = records[n];
    const double x = kLeft + (n / 2) * (2 * kBar + kGap) + (n % 2) * kBar;
    const double y = y_of(r.mean_ns);
    svg << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << kBar
        << "\" height=\"" << kTop + kHeight - y << "\" fill=\""
        << (r.method == SaliencyMethod::kPeek ? "#3366cc" : "#cc3333") << "\"/>\n";
    if (n % 2 == 0) {
      svg << "<text x=\"" << x << "\" y=\"" << kTop + kHeight + 14 << "\">"
          << r.layer_index << "</text>\n";
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace peekmap
