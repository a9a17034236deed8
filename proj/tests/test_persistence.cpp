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

#include "helpers.hpp"
#include "oracles.hpp"
#include "topotex/persistence.hpp"

using namespace topotex;

namespace {

PersistenceBar bar(int dim, int birth, std::optional<int> death) { return {dim, birth, death}; }

}  // namespace

TEST_CASE("filtration values and cell counts") {
  const CubicalComplex single(GrayImage(1, 1, std::uint8_t{200}));
  CHECK(single.cell_count() == 1);
  CHECK(single.value(0) == 55);

  const CubicalComplex pair(testing::from_rows({{200, 10}}));
  REQUIRE(pair.cell_count() == 3);
  CHECK(pair.value(0) == 55);
  CHECK(pair.value(1) == 245);
  CHECK(pair.dimension(2) == 1);
  CHECK(pair.value(2) == 245);

  const CubicalComplex zero(GrayImage(2, 2, std::uint8_t{0}));
  REQUIRE(zero.cell_count() == 9);
  for (std::size_t c = 0; c < 9; ++c) CHECK(zero.value(c) == 255);

  std::mt19937_64 rng(8);
  const GrayImage img = testing::random_image(7, 5, 256, rng);
  const CubicalComplex cx(img);
  CHECK(cx.vertex_count() == 35);
  CHECK(cx.edge_count() == static_cast<std::size_t>(7 * 4 + 5 * 6));
  CHECK(cx.square_count() == static_cast<std::size_t>(6 * 4));
  for (std::size_t c = 0; c < cx.cell_count(); ++c) {
    for (std::size_t f : cx.boundary(c)) {
      REQUIRE(cx.dimension(f) == cx.dimension(c) - 1);
      REQUIRE(cx.value(f) <= cx.value(c));
    }
  }
}

TEST_CASE("worked barcodes") {
  const Barcode constant = superlevel_barcode(GrayImage(5, 5, std::uint8_t{100}));
  CHECK(constant.bars == std::vector<PersistenceBar>{bar(0, 100, std::nullopt)});

  const Barcode ring = superlevel_barcode(testing::ring_image());
  CHECK(ring.bars == std::vector<PersistenceBar>{bar(0, 200, std::nullopt), bar(1, 200, 50)});

  const Barcode blobs = superlevel_barcode(testing::from_rows({{10, 200, 10, 180, 10}}));
  CHECK(blobs.bars == std::vector<PersistenceBar>{bar(0, 200, std::nullopt), bar(0, 180, 10)});
}

TEST_CASE("betti numbers from a barcode") {
  const Barcode constant = superlevel_barcode(GrayImage(5, 5, std::uint8_t{100}));
  CHECK(betti_at(constant, 150) == Betti{0, 0});
  CHECK(betti_at(constant, 100) == Betti{1, 0});
  const Barcode ring = superlevel_barcode(testing::ring_image());
  CHECK(betti_at(ring, 120) == Betti{1, 1});
  CHECK(betti_at(ring, 50) == Betti{1, 0});
}

TEST_CASE("brute-force betti") {
  CHECK(brute_force_betti(GrayImage(3, 3, std::uint8_t{10}), 11) == Betti{0, 0});
  CHECK(brute_force_betti(testing::ring_image(), 200) == Betti{1, 1});
  CHECK(brute_force_betti(testing::from_rows({{10, 200, 10, 180, 10}}), 150) == Betti{2, 0});

  std::mt19937_64 rng(5);
  for (int i = 0; i < 300; ++i) {
    const GrayImage img = testing::random_image(1 + static_cast<int>(rng() % 9), 1 + static_cast<int>(rng() % 9), 4, rng);
    for (int c : {0, 1, 85, 86, 170, 171, 255}) REQUIRE(brute_force_betti(img, c) == oracle::flood_fill_betti(img, c));
  }
}

TEST_CASE("barcode agrees with the flood-fill oracle on random images") {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 400; ++i) {
    const int w = 1 + static_cast<int>(rng() % 10);
    const int h = 1 + static_cast<int>(rng() % 10);
    const GrayImage img = testing::random_image(w, h, 1 + static_cast<int>(rng() % 8), rng);
    const Barcode bc = superlevel_barcode(img);
    for (int c = 0; c <= 255; ++c) REQUIRE(betti_at(bc, c) == oracle::flood_fill_betti(img, c));
  }
}

TEST_CASE("structural properties") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    const int w = 1 + static_cast<int>(rng() % 12);
    const int h = 1 + static_cast<int>(rng() % 12);
    const GrayImage img = testing::random_image(w, h, 256, rng);
    const Barcode bc = superlevel_barcode(img);
    int infinite0 = 0;
    for (const auto& b : bc.bars) {
      if (b.infinite()) {
        REQUIRE(b.dim == 0);
        ++infinite0;
        continue;
      }
      REQUIRE(b.birth > *b.death);
    }
    CHECK(infinite0 == 1);
    CHECK(bc.bars_of(1).size() <= static_cast<std::size_t>((w - 1) * (h - 1)));

    // H0 bar count is bounded by the number of local-maximum plateaus
    int plateaus = 0;
    std::vector<char> seen(static_cast<std::size_t>(w) * h, 0);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (seen[static_cast<std::size_t>(y) * w + x]) continue;
        const int v = img.at(x, y);
        bool is_max = true;
        std::vector<std::pair<int, int>> stack{{x, y}};
        seen[static_cast<std::size_t>(y) * w + x] = 1;
        while (!stack.empty()) {
          auto [cx, cy] = stack.back();
          stack.pop_back();
          const int dx[] = {1, -1, 0, 0}, dy[] = {0, 0, 1, -1};
          for (int d = 0; d < 4; ++d) {
            const int nx = cx + dx[d], ny = cy + dy[d];
            if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
            if (img.at(nx, ny) > v) is_max = false;
            if (img.at(nx, ny) == v && !seen[static_cast<std::size_t>(ny) * w + nx]) {
              seen[static_cast<std::size_t>(ny) * w + nx] = 1;
              stack.push_back({nx, ny});
            }
          }
        }
        plateaus += is_max ? 1 : 0;
      }
    }
    CHECK(bc.bars_of(0).size() <= static_cast<std::size_t>(plateaus));
  }
}

TEST_CASE("dihedral invariance") {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 50; ++i) {
    const GrayImage img = testing::random_image(3 + static_cast<int>(rng() % 8), 3 + static_cast<int>(rng() % 8), 6, rng);
    const auto reference = testing::sorted_bars(superlevel_barcode(img));
    for (int g = 1; g < 8; ++g) REQUIRE(testing::sorted_bars(superlevel_barcode(testing::dihedral(img, g))) == reference);
  }
}

TEST_CASE("negation duality") {
  std::mt19937_64 rng(10);
  for (int i = 0; i < 100; ++i) {
    const GrayImage img = testing::random_image(6, 6, 256, rng);
    const Barcode super = superlevel_barcode(img);
    const Barcode sub = sublevel_barcode(negate(img));
    REQUIRE(super.bars.size() == sub.bars.size());
    std::vector<PersistenceBar> mapped;
    for (const auto& b : sub.bars) {
      mapped.push_back({b.dim, 255 - b.birth, b.death ? std::optional<int>(255 - *b.death) : std::nullopt});
    }
    std::sort(mapped.begin(), mapped.end(), canonical_less);
    REQUIRE(mapped == super.bars);
  }
}

TEST_CASE("barcode json round trip") {
  const Barcode ring = superlevel_barcode(testing::ring_image());
  const std::string text = barcode_to_json(ring);
  CHECK(text.find("\"death\": null") != std::string::npos);
  CHECK(barcode_from_json(text) == ring);
}

TEST_CASE("large patch sanity") {
  std::mt19937_64 rng(11);
  const GrayImage img = testing::random_image(96, 96, 256, rng);
  const Barcode bc = superlevel_barcode(img);
  for (int c : {0, 40, 128, 200, 255}) CHECK(betti_at(bc, c) == oracle::flood_fill_betti(img, c));
}
