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

#include "peekmap/npy.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>

#include "peekmap/error.hpp"

namespace peekmap {
namespace {

static_assert(std::endian::native == std::endian::little,
              "NPY payloads are read as native little-endian floats");

constexpr char kMagic[] = "\x93NUMPY";
constexpr std::size_t kMagicLen = 6;

[[noreturn]] void Fail(const std::filesystem::path& path,
                       const std::string& what) {
  throw Error(ErrorCode::kFormat, path.string() + ": " + what);
}

std::string HeaderValue(const std::string& header, const std::string& key,
                        const std::filesystem::path& path) {
  const std::string quoted = "'" + key + "'";
  auto pos = header.find(quoted);
  if (pos == std::string::npos) Fail(path, "header lacks key " + key);
  pos = header.find(':', pos + quoted.size());
  if (pos == std::string::npos) Fail(path, "malformed header near " + key);
  ++pos;
  while (pos < header.size() && header[pos] == ' ') ++pos;
  std::size_t end = pos;
  if (header[pos] == '(') {
    end = header.find(')', pos);
    if (end == std::string::npos) Fail(path, "unterminated shape tuple");
    return header.substr(pos, end - pos + 1);
  }
  if (header[pos] == '\'') {
    end = header.find('\'', pos + 1);
    if (end == std::string::npos) Fail(path, "unterminated string in header");
    return header.substr(pos + 1, end - pos - 1);
  }
  while (end < header.size() && header[end] != ',' && header[end] != '}') {
    ++end;
  }
  return header.substr(pos, end - pos);
}

}  // namespace

FeatureStack ReadTensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, path.string() + ": cannot open");

  char prefix[10];
  if (!in.read(prefix, sizeof prefix)) Fail(path, "truncated NPY preamble");
  if (std::memcmp(prefix, kMagic, kMagicLen) != 0) Fail(path, "bad magic bytes");
  if (prefix[6] != 1 || prefix[7] != 0) {
    Fail(path, "unsupported NPY version " + std::to_string(int(prefix[6])) +
                   "." + std::to_string(int(prefix[7])));
  }
  const std::size_t header_len = static_cast<unsigned char>(prefix[8]) |
                                 (static_cast<unsigned char>(prefix[9]) << 8);
  std::string header(header_len, '\0');
  if (!in.read(header.data(), static_cast<std::streamsize>(header_len))) {
    Fail(path, "truncated NPY header");
  }

  const std::string descr = HeaderValue(header, "descr", path);
  if (descr != "<f4") Fail(path, "dtype must be '<f4', found '" + descr + "'");
  const std::string fortran = HeaderValue(header, "fortran_order", path);
  if (fortran != "False") Fail(path, "fortran_order must be False");

  const std::string shape_text = HeaderValue(header, "shape", path);
  std::vector<std::size_t> dims;
  static const std::regex kDim(R"(\d+)");
  for (auto it = std::sregex_iterator(shape_text.begin(), shape_text.end(),
                                      kDim);
       it != std::sregex_iterator(); ++it) {
    dims.push_back(std::stoull(it->str()));
  }
  if (dims.size() != 3) {
    Fail(path, "tensor rank must be 3, found " + std::to_string(dims.size()));
  }
  const StackShape shape{dims[0], dims[1], dims[2]};
  if (shape.size() == 0) Fail(path, "tensor has a zero-length dimension");

  std::vector<float> data(shape.size());
  const auto bytes = static_cast<std::streamsize>(data.size() * sizeof(float));
  if (!in.read(reinterpret_cast<char*>(data.data()), bytes)) {
    Fail(path, "payload shorter than shape " + shape_text + " requires");
  }
  in.peek();
  if (!in.eof()) Fail(path, "payload longer than shape " + shape_text);
  return FeatureStack(shape, std::move(data));
}

void WriteTensor(const FeatureStack& stack, const std::filesystem::path& path) {
  const auto& s = stack.shape();
  std::ostringstream hdr;
  hdr << "{'descr': '<f4', 'fortran_order': False, 'shape': (" << s.depth
      << ", " << s.height << ", " << s.width << "), }";
  std::string header = hdr.str();
  // Preamble + header + newline padded to a multiple of 64.
  const std::size_t total = kMagicLen + 4 + header.size() + 1;
  header.append((64 - total % 64) % 64, ' ');
  header.push_back('\n');

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, path.string() + ": cannot write");
  out.write(kMagic, kMagicLen);
  const char version[2] = {1, 0};
  out.write(version, 2);
  const char len[2] = {static_cast<char>(header.size() & 0xff),
                       static_cast<char>((header.size() >> 8) & 0xff)};
  out.write(len, 2);
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  out.write(reinterpret_cast<const char*>(stack.data().data()),
            static_cast<std::streamsize>(stack.data().size_bytes()));
  if (!out) throw Error(ErrorCode::kIo, path.string() + ": write failed");
}

}  // namespace peekmap
