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

#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace topotex {

/// 8-bit grayscale raster, row-major. Immutable once constructed.
class GrayImage {
 public:
  GrayImage() = default;
  /// Throws UsageError unless width, height >= 1 and pixels.size() == width*height.
  GrayImage(int width, int height, std::vector<std::uint8_t> pixels);
  /// Constant image.
  GrayImage(int width, int height, std::uint8_t value);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool empty() const noexcept { return pixels_.empty(); }
  std::uint8_t at(int x, int y) const { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }
  std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

/// Half-open pixel rectangle [x0, x1) × [y0, y1).
struct BBox {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;

  int width() const noexcept { return x1 - x0; }
  int height() const noexcept { return y1 - y0; }
  friend bool operator==(const BBox&, const BBox&) = default;
};

struct AnnotationRecord {
  std::string image_id;  // path as written in the manifest
  BBox bbox;
  std::string label;
};

struct PatchCorner {
  int x = 0;
  int y = 0;
  friend bool operator==(const PatchCorner&, const PatchCorner&) = default;
};

struct Patch {
  PatchCorner corner;
  GrayImage image;
};

/// ITU-R BT.601 luma, rounded half away from zero: round(0.299r + 0.587g + 0.114b).
std::uint8_t rgb_to_gray(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept;

/// Throws BoundsError naming the offending coordinate.
GrayImage crop(const GrayImage& img, const BBox& bbox);

/// Draws `n` size×size patches with uniformly random top-left corners
/// (overlap allowed). Deterministic in `seed`. Throws TooSmallError when the
/// image is smaller than `size` in either dimension.
std::vector<Patch> sample_patches(const GrayImage& img, int n, int size, std::uint64_t seed);

/// Per-annotation seed: global seed mixed with a stable hash of (image_id, bbox).
std::uint64_t annotation_seed(std::uint64_t global_seed, const std::string& image_id, const BBox& bbox);

/// Decodes binary PGM (P5, maxval 255) or 8-bit PNG (gray or RGB). Throws IoError.
GrayImage decode_image(std::span<const std::uint8_t> bytes);
GrayImage load_image(const std::filesystem::path& path);
std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);

void write_pgm(const GrayImage& img, const std::filesystem::path& path);
std::vector<std::uint8_t> encode_pgm(const GrayImage& img);
std::vector<std::uint8_t> encode_png(const GrayImage& img);

/// Parses an annotation manifest (JSON Lines). Blank lines are ignored.
/// Throws IoError with the line number on malformed records.
std::vector<AnnotationRecord> read_manifest(const std::filesystem::path& path);

/// Bounded uniform integers from mt19937_64 by rejection, identical on every
/// standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  /// Uniform on [0, bound_inclusive].
  std::uint64_t uniform(std::uint64_t bound_inclusive);
  double uniform01();

 private:
  std::mt19937_64 engine_;
};

/// 64-bit mixing (splitmix64 finalizer).
std::uint64_t mix64(std::uint64_t x) noexcept;
/// FNV-1a over bytes; stable across platforms.
std::uint64_t fnv1a(std::span<const std::uint8_t> bytes, std::uint64_t h = 14695981039346656037ull) noexcept;
std::uint64_t fnv1a(const std::string& s, std::uint64_t h = 14695981039346656037ull) noexcept;

}  // namespace topotex
