// Copyright 2026 The topotex Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "topotex/image.hpp"
#include "topotex/persistence.hpp"

namespace testing {

inline topotex::GrayImage random_image(int w, int h, int levels, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, levels - 1);
  std::vector<std::uint8_t> px(static_cast<std::size_t>(w) * h);
  for (auto& p : px) p = static_cast<std::uint8_t>(levels == 1 ? 0 : pick(rng) * 255 / (levels - 1));
  return {w, h, std::move(px)};
}

inline topotex::GrayImage from_rows(const std::vector<std::vector<int>>& rows) {
  std::vector<std::uint8_t> px;
  for (const auto& r : rows)
    for (int v : r) px.push_back(static_cast<std::uint8_t>(v));
  return {static_cast<int>(rows.front().size()), static_cast<int>(rows.size()), std::move(px)};
}

inline topotex::GrayImage ring_image() { return from_rows({{200, 200, 200}, {200, 50, 200}, {200, 200, 200}}); }

// The eight symmetries of the square acting on an image.
inline topotex::GrayImage dihedral(const topotex::GrayImage& img, int g) {
  const int w = img.width(), h = img.height();
  const bool swap = (g & 4) != 0;
  const int ow = swap ? h : w, oh = swap ? w : h;
  std::vector<std::uint8_t> px(static_cast<std::size_t>(ow) * oh);
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      int sx = swap ? y : x;
      int sy = swap ? x : y;
      if (g & 1) sx = w - 1 - sx;
      if (g & 2) sy = h - 1 - sy;
      px[static_cast<std::size_t>(y) * ow + x] = img.at(sx, sy);
    }
  }
  return {ow, oh, std::move(px)};
}

inline std::vector<topotex::PersistenceBar> sorted_bars(const topotex::Barcode& bc) {
  auto bars = bc.bars;
  std::sort(bars.begin(), bars.end(), topotex::canonical_less);
  return bars;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("topotex_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace testing
