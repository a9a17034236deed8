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

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <set>

#include "helpers.hpp"
#include "topotex/error.hpp"
#include "topotex/image.hpp"

using namespace topotex;

TEST_CASE("luma conversion matches the rounded weighted sum") {
  CHECK(rgb_to_gray(255, 255, 255) == 255);
  CHECK(rgb_to_gray(0, 0, 0) == 0);
  CHECK(rgb_to_gray(255, 0, 0) == 76);
  for (int r = 0; r < 256; r += 5) {
    for (int g = 0; g < 256; g += 7) {
      for (int b = 0; b < 256; b += 11) {
        // long double keeps the reference away from binary rounding of .5 cases
        const long double exact = (299.0L * r + 587.0L * g + 114.0L * b) / 1000.0L;
        const int expected = static_cast<int>(std::floor(exact + 0.5L));
        REQUIRE(rgb_to_gray(r, g, b) == expected);
      }
    }
  }
}

TEST_CASE("luma conversion is monotone") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> c(0, 255), d(0, 20);
  for (int i = 0; i < 20000; ++i) {
    const int r = c(rng), g = c(rng), b = c(rng);
    const int r2 = std::min(255, r + d(rng)), g2 = std::min(255, g + d(rng)), b2 = std::min(255, b + d(rng));
    REQUIRE(rgb_to_gray(r, g, b) <= rgb_to_gray(r2, g2, b2));
  }
}

TEST_CASE("gray image validates its pixel buffer") {
  CHECK_THROWS_AS(GrayImage(2, 2, std::vector<std::uint8_t>(3)), UsageError);
  CHECK_THROWS(GrayImage(0, 2, std::vector<std::uint8_t>{}));
}

TEST_CASE("crop") {
  std::mt19937_64 rng(1);
  const GrayImage img = testing::random_image(4, 4, 256, rng);
  CHECK(crop(img, {0, 0, 4, 4}) == img);
  const GrayImage center = crop(img, {1, 1, 3, 3});
  REQUIRE(center.width() == 2);
  REQUIRE(center.height() == 2);
  for (int y = 0; y < 2; ++y)
    for (int x = 0; x < 2; ++x) CHECK(center.at(x, y) == img.at(x + 1, y + 1));

  const GrayImage small(2, 2, std::uint8_t{0});
  try {
    crop(small, {0, 0, 3, 3});
    FAIL("expected a bounds error");
  } catch (const BoundsError& e) {
    CHECK(std::string(e.what()).find("x1") != std::string::npos);
  }
  CHECK_THROWS_AS(crop(small, {-1, 0, 1, 1}), BoundsError);
  CHECK_THROWS_AS(crop(small, {1, 0, 1, 1}), BoundsError);
}

TEST_CASE("patch sampling") {
  std::mt19937_64 rng(2);
  SUBCASE("exact-size image yields copies") {
    const GrayImage img = testing::random_image(96, 96, 256, rng);
    const auto patches = sample_patches(img, 6, 96, 17);
    REQUIRE(patches.size() == 6);
    for (const auto& p : patches) {
      CHECK(p.image == img);
      CHECK(p.corner == PatchCorner{0, 0});
    }
  }
  SUBCASE("deterministic under a seed") {
    const GrayImage img = testing::random_image(150, 130, 256, rng);
    const auto a = sample_patches(img, 6, 96, 99);
    const auto b = sample_patches(img, 6, 96, 99);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].corner == b[i].corner);
  }
  SUBCASE("patches are in bounds and bit-exact sub-rasters") {
    const GrayImage img = testing::random_image(200, 200, 256, rng);
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
      const auto patches = sample_patches(img, 6, 96, seed);
      REQUIRE(patches.size() == 6);
      for (const auto& p : patches) {
        REQUIRE(p.corner.x >= 0);
        REQUIRE(p.corner.y >= 0);
        REQUIRE(p.corner.x + 96 <= 200);
        REQUIRE(p.corner.y + 96 <= 200);
        REQUIRE(p.image.width() == 96);
        if (seed % 97 == 0) {
          for (int y = 0; y < 96; y += 13)
            for (int x = 0; x < 96; x += 11) REQUIRE(p.image.at(x, y) == img.at(p.corner.x + x, p.corner.y + y));
        }
      }
    }
  }
  SUBCASE("distinct seeds give distinct placements") {
    const GrayImage img(400, 400, std::uint8_t{5});
    std::set<std::vector<std::pair<int, int>>> seen;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      std::vector<std::pair<int, int>> pos;
      for (const auto& p : sample_patches(img, 6, 96, seed)) pos.emplace_back(p.corner.x, p.corner.y);
      std::sort(pos.begin(), pos.end());
      seen.insert(pos);
    }
    CHECK(seen.size() >= 199);
  }
  SUBCASE("too small") {
    const GrayImage img(50, 96, std::uint8_t{0});
    CHECK_THROWS_AS(sample_patches(img, 6, 96, 0), TooSmallError);
  }
}

TEST_CASE("bounded draws are uniform and in range") {
  Rng rng(12345);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const auto v = rng.uniform(6);
    REQUIRE(v <= 6);
    ++counts[v];
  }
  for (int c : counts) CHECK(std::abs(c - 10000) < 500);
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform01();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
  }
}

TEST_CASE("annotation seeds depend on image and box only") {
  const BBox a{0, 0, 10, 10}, b{0, 0, 10, 11};
  CHECK(annotation_seed(1, "x.png", a) == annotation_seed(1, "x.png", a));
  CHECK(annotation_seed(1, "x.png", a) != annotation_seed(1, "x.png", b));
  CHECK(annotation_seed(1, "x.png", a) != annotation_seed(1, "y.png", a));
  CHECK(annotation_seed(1, "x.png", a) != annotation_seed(2, "x.png", a));
}

TEST_CASE("PGM and PNG round trips") {
  std::mt19937_64 rng(4);
  const GrayImage img = testing::random_image(17, 9, 256, rng);
  CHECK(decode_image(encode_pgm(img)) == img);
  CHECK(decode_image(encode_png(img)) == img);

  const std::string with_comment = "P5\n# made by hand\n2 1\n255\n";
  std::vector<std::uint8_t> bytes(with_comment.begin(), with_comment.end());
  bytes.push_back(7);
  bytes.push_back(250);
  const GrayImage parsed = decode_image(bytes);
  CHECK(parsed.width() == 2);
  CHECK(parsed.at(1, 0) == 250);

  const std::string bad = "P5\n2 2\n65535\n";
  CHECK_THROWS_AS(decode_image(std::vector<std::uint8_t>(bad.begin(), bad.end())), IoError);
  const std::string truncated = "P5\n4 4\n255\n\x01\x02";
  CHECK_THROWS_AS(decode_image(std::vector<std::uint8_t>(truncated.begin(), truncated.end())), IoError);
  CHECK_THROWS_AS(load_image("/nonexistent/file.pgm"), IoError);
}

TEST_CASE("manifest parsing") {
  testing::TempDir dir("manifest");
  const auto path = dir.path() / "m.jsonl";
  {
    std::ofstream out(path);
    out << R"({"image": "a.pgm", "bbox": [1, 2, 30, 40], "label": "sugar"})" << "\n\n";
    out << R"({"image": "b.pgm", "bbox": [0, 0, 5, 5], "label": "fish"})" << "\n";
  }
  const auto recs = read_manifest(path);
  REQUIRE(recs.size() == 2);
  CHECK(recs[0].image_id == "a.pgm");
  CHECK(recs[0].bbox == BBox{1, 2, 30, 40});
  CHECK(recs[1].label == "fish");

  {
    std::ofstream out(path);
    out << R"({"image": "a.pgm", "bbox": [1, 2, 30, 40], "label": "sugar"})" << "\n";
    out << R"({"image": "a.pgm", "bbox": [1, 2], "label": "sugar"})" << "\n";
  }
  try {
    read_manifest(path);
    FAIL("expected a parse error");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find(":2: ") != std::string::npos);
  }
}
