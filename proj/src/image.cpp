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

#include "topotex/image.hpp"

#include <png.h>

#include <cctype>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "topotex/error.hpp"

namespace topotex {

GrayImage::GrayImage(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (width < 1 || height < 1) {
    throw UsageError("image dimensions must be positive, got " + std::to_string(width) + "x" +
                     std::to_string(height));
  }
  if (pixels_.size() != static_cast<std::size_t>(width) * height) {
    throw UsageError("pixel buffer has " + std::to_string(pixels_.size()) + " entries, expected " +
                     std::to_string(static_cast<std::size_t>(width) * height));
  }
}

GrayImage::GrayImage(int width, int height, std::uint8_t value)
    : GrayImage(width, height,
                std::vector<std::uint8_t>(static_cast<std::size_t>(std::max(width, 0)) *
                                              static_cast<std::size_t>(std::max(height, 0)),
                                          value)) {}

std::uint8_t rgb_to_gray(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept {
  // Exact in integers: the weighted sum is (299r + 587g + 114b) / 1000 and is
  // never negative, so half-away-from-zero is half-up.
  const unsigned sum = 299u * r + 587u * g + 114u * b;
  const unsigned rounded = (sum + 500u) / 1000u;
  return static_cast<std::uint8_t>(rounded > 255u ? 255u : rounded);
}

GrayImage crop(const GrayImage& img, const BBox& bbox) {
  auto fail = [&](const char* name, int value, int limit) {
    std::ostringstream os;
    os << "bbox coordinate " << name << "=" << value << " out of bounds for " << img.width() << "x"
       << img.height() << " image (limit " << limit << ")";
    throw BoundsError(os.str());
  };
  if (bbox.x0 < 0) fail("x0", bbox.x0, 0);
  if (bbox.y0 < 0) fail("y0", bbox.y0, 0);
  if (bbox.x1 > img.width()) fail("x1", bbox.x1, img.width());
  if (bbox.y1 > img.height()) fail("y1", bbox.y1, img.height());
  if (bbox.x1 <= bbox.x0) fail("x1", bbox.x1, bbox.x0 + 1);
  if (bbox.y1 <= bbox.y0) fail("y1", bbox.y1, bbox.y0 + 1);

  std::vector<std::uint8_t> out;
  out.reserve(static_cast<std::size_t>(bbox.width()) * bbox.height());
  const auto src = img.pixels();
  for (int y = bbox.y0; y < bbox.y1; ++y) {
    const auto row = src.subspan(static_cast<std::size_t>(y) * img.width() + bbox.x0, bbox.width());
    out.insert(out.end(), row.begin(), row.end());
  }
  return GrayImage(bbox.width(), bbox.height(), std::move(out));
}

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

std::uint64_t Rng::uniform(std::uint64_t bound_inclusive) {
  if (bound_inclusive == std::numeric_limits<std::uint64_t>::max()) return engine_();
  const std::uint64_t range = bound_inclusive + 1;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t v;
  do {
    v = engine_();
  } while (v >= limit);
  return v % range;
}

double Rng::uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::span<const std::uint8_t> bytes, std::uint64_t h) noexcept {
  for (auto c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t fnv1a(const std::string& s, std::uint64_t h) noexcept {
  return fnv1a(std::span(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()), h);
}

std::uint64_t annotation_seed(std::uint64_t global_seed, const std::string& image_id, const BBox& bbox) {
  std::uint64_t h = fnv1a(image_id);
  for (int c : {bbox.x0, bbox.y0, bbox.x1, bbox.y1}) {
    h = mix64(h ^ static_cast<std::uint32_t>(c));
  }
  return mix64(global_seed ^ h);
}

std::vector<Patch> sample_patches(const GrayImage& img, int n, int size, std::uint64_t seed) {
  if (size < 1) throw UsageError("patch size must be positive");
  if (n < 0) throw UsageError("patch count must be non-negative");
  if (img.width() < size || img.height() < size) {
    throw TooSmallError("image " + std::to_string(img.width()) + "x" + std::to_string(img.height()) +
                        " is smaller than patch size " + std::to_string(size));
  }
  Rng rng(seed);
  std::vector<Patch> patches;
  patches.reserve(n);
  for (int i = 0; i < n; ++i) {
    const int x = static_cast<int>(rng.uniform(static_cast<std::uint64_t>(img.width() - size)));
    const int y = static_cast<int>(rng.uniform(static_cast<std::uint64_t>(img.height() - size)));
    patches.push_back({{x, y}, crop(img, {x, y, x + size, y + size})});
  }
  return patches;
}

namespace {

GrayImage decode_pgm(std::span<const std::uint8_t> bytes) {
  std::size_t pos = 2;
  auto skip_space = [&] {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(bytes[pos])) {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto read_int = [&](const char* what) {
    skip_space();
    long value = 0;
    std::size_t digits = 0;
    while (pos < bytes.size() && std::isdigit(bytes[pos]) && digits < 9) {
      value = value * 10 + (bytes[pos] - '0');
      ++pos;
      ++digits;
    }
    if (digits == 0) throw IoError(std::string("PGM header: missing ") + what);
    return value;
  };
  const long width = read_int("width");
  const long height = read_int("height");
  const long maxval = read_int("maxval");
  if (maxval != 255) throw IoError("PGM maxval must be 255, got " + std::to_string(maxval));
  if (width < 1 || height < 1) throw IoError("PGM has empty dimensions");
  if (pos >= bytes.size() || !std::isspace(bytes[pos])) throw IoError("PGM header not terminated");
  ++pos;
  const std::size_t count = static_cast<std::size_t>(width) * height;
  if (bytes.size() - pos < count) throw IoError("PGM pixel data truncated");
  std::vector<std::uint8_t> px(bytes.begin() + pos, bytes.begin() + pos + count);
  return GrayImage(static_cast<int>(width), static_cast<int>(height), std::move(px));
}

GrayImage decode_png(std::span<const std::uint8_t> bytes) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    throw IoError(std::string("PNG decode failed: ") + image.message);
  }
  const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
  image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
    std::string msg = image.message;
    png_image_free(&image);
    throw IoError("PNG decode failed: " + msg);
  }
  const int w = static_cast<int>(image.width);
  const int h = static_cast<int>(image.height);
  if (!color) return GrayImage(w, h, std::move(buffer));
  std::vector<std::uint8_t> gray(static_cast<std::size_t>(w) * h);
  for (std::size_t i = 0; i < gray.size(); ++i) {
    gray[i] = rgb_to_gray(buffer[3 * i], buffer[3 * i + 1], buffer[3 * i + 2]);
  }
  return GrayImage(w, h, std::move(gray));
}

}  // namespace

GrayImage decode_image(std::span<const std::uint8_t> bytes) {
  static constexpr std::uint8_t kPngMagic[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (bytes.size() >= 8 && std::memcmp(bytes.data(), kPngMagic, 8) == 0) return decode_png(bytes);
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5') return decode_pgm(bytes);
  throw IoError("unsupported image format (expected binary PGM or PNG)");
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

GrayImage load_image(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  try {
    return decode_image(bytes);
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

std::vector<std::uint8_t> encode_pgm(const GrayImage& img) {
  const std::string header =
      "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), img.pixels().begin(), img.pixels().end());
  return out;
}

void write_pgm(const GrayImage& img, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  const auto bytes = encode_pgm(img);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<std::uint8_t> encode_png(const GrayImage& img) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width());
  image.height = static_cast<png_uint_32>(img.height());
  image.format = PNG_FORMAT_GRAY;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&image, nullptr, &size, 0, img.pixels().data(), 0, nullptr)) {
    throw IoError(std::string("PNG encode failed: ") + image.message);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&image, out.data(), &size, 0, img.pixels().data(), 0, nullptr)) {
    throw IoError(std::string("PNG encode failed: ") + image.message);
  }
  out.resize(size);
  return out;
}

std::vector<AnnotationRecord> read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest " + path.string());
  std::vector<AnnotationRecord> records;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto where = [&] { return path.string() + ":" + std::to_string(lineno) + ": "; };
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw IoError(where() + e.what());
    }
    try {
      AnnotationRecord rec;
      rec.image_id = j.at("image").get<std::string>();
      const auto& b = j.at("bbox");
      if (!b.is_array() || b.size() != 4) throw IoError(where() + "bbox must be [x0,y0,x1,y1]");
      rec.bbox = {b[0].get<int>(), b[1].get<int>(), b[2].get<int>(), b[3].get<int>()};
      rec.label = j.at("label").get<std::string>();
      if (rec.label.empty()) throw IoError(where() + "empty label");
      records.push_back(std::move(rec));
    } catch (const nlohmann::json::exception& e) {
      throw IoError(where() + e.what());
    }
  }
  return records;
}

}  // namespace topotex
