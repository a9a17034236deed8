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

#include "topotex/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <vector>

#include <json.hpp>

#include "topotex/error.hpp"

namespace topotex::synthetic {

namespace {

double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform01(); }

std::vector<double> noise_field(int w, int h, double lo, double hi, Rng& rng) {
  std::vector<double> f(static_cast<std::size_t>(w) * h);
  for (auto& v : f) v = uniform(rng, lo, hi);
  return f;
}

GrayImage quantize(int w, int h, const std::vector<double>& f) {
  std::vector<std::uint8_t> px(f.size());
  std::transform(f.begin(), f.end(), px.begin(),
                 [](double v) { return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L)); });
  return GrayImage(w, h, std::move(px));
}

}  // namespace

GrayImage noise(int width, int height, int lo, int hi, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::uint8_t> px(static_cast<std::size_t>(width) * height);
  for (auto& v : px) v = static_cast<std::uint8_t>(lo + static_cast<int>(rng.uniform(static_cast<std::uint64_t>(hi - lo))));
  return GrayImage(width, height, std::move(px));
}

GrayImage sugar_like(int width, int height, std::uint64_t seed) {
  Rng rng(seed);
  auto f = noise_field(width, height, 20.0, 55.0, rng);
  const int count = std::max(1, width * height / 220);
  for (int c = 0; c < count; ++c) {
    const double cx = uniform(rng, 0, width);
    const double cy = uniform(rng, 0, height);
    const double r = uniform(rng, 1.0, 2.0);
    const double peak = uniform(rng, 195.0, 230.0);
    for (int y = std::max(0, static_cast<int>(cy - r - 1)); y <= std::min(height - 1, static_cast<int>(cy + r + 1)); ++y) {
      for (int x = std::max(0, static_cast<int>(cx - r - 1)); x <= std::min(width - 1, static_cast<int>(cx + r + 1)); ++x) {
        const double d = std::hypot(x + 0.5 - cx, y + 0.5 - cy);
        if (d <= r) {
          auto& v = f[static_cast<std::size_t>(y) * width + x];
          v = std::max(v, peak - uniform(rng, 0.0, 6.0));
        }
      }
    }
  }
  return quantize(width, height, f);
}

GrayImage flowers_like(int width, int height, std::uint64_t seed) {
  Rng rng(seed);
  auto f = noise_field(width, height, 20.0, 55.0, rng);
  const int count = std::max(1, width * height / 5000);
  for (int c = 0; c < count; ++c) {
    const double cx = uniform(rng, 0, width);
    const double cy = uniform(rng, 0, height);
    const double r = uniform(rng, 10.0, 15.0);
    const double peak = uniform(rng, 140.0, 185.0);
    struct Dimple {
      double x, y, r, depth;
    };
    std::vector<Dimple> dimples(5 + rng.uniform(6));
    for (auto& d : dimples) {
      const double a = uniform(rng, 0.0, 2 * M_PI);
      const double rho = r * std::sqrt(rng.uniform01()) * 0.8;
      d = {cx + rho * std::cos(a), cy + rho * std::sin(a), uniform(rng, 1.5, 3.0), uniform(rng, 35.0, 75.0)};
    }
    const int x_lo = std::max(0, static_cast<int>(cx - r - 1));
    const int x_hi = std::min(width - 1, static_cast<int>(cx + r + 1));
    const int y_lo = std::max(0, static_cast<int>(cy - r - 1));
    const int y_hi = std::min(height - 1, static_cast<int>(cy + r + 1));
    for (int y = y_lo; y <= y_hi; ++y) {
      for (int x = x_lo; x <= x_hi; ++x) {
        const double px = x + 0.5, py = y + 0.5;
        const double d = std::hypot(px - cx, py - cy) / r;
        if (d > 1.0) continue;
        // Flat top with a soft rim, dimpled by Gaussian dips.
        double v = 60.0 + (peak - 60.0) * std::min(1.0, 1.6 * (1.0 - d * d));
        for (const auto& dm : dimples) {
          const double q = std::hypot(px - dm.x, py - dm.y) / dm.r;
          v -= dm.depth * std::exp(-q * q);
        }
        v += uniform(rng, -8.0, 8.0);
        auto& cell = f[static_cast<std::size_t>(y) * width + x];
        cell = std::max(cell, v);
      }
    }
  }
  return quantize(width, height, f);
}

std::filesystem::path write_dataset(const std::filesystem::path& dir, int per_class, std::uint64_t seed, int min_side,
                                    int max_side) {
  if (per_class < 0 || min_side < 1 || max_side < min_side) throw UsageError("invalid synthetic dataset parameters");
  std::error_code ec;
  std::filesystem::create_directories(dir / "images", ec);
  if (ec) throw IoError("cannot create " + (dir / "images").string() + ": " + ec.message());
  const auto manifest = dir / "manifest.jsonl";
  std::ofstream out(manifest);
  if (!out) throw IoError("cannot write " + manifest.string());
  Rng sizes(mix64(seed));
  for (int i = 0; i < per_class; ++i) {
    for (const char* label : {"sugar", "flowers"}) {
      const int w = min_side + static_cast<int>(sizes.uniform(static_cast<std::uint64_t>(max_side - min_side)));
      const int h = min_side + static_cast<int>(sizes.uniform(static_cast<std::uint64_t>(max_side - min_side)));
      const std::uint64_t s = mix64(seed ^ (static_cast<std::uint64_t>(i) << 1) ^ (label[0] == 's' ? 0u : 1u));
      const GrayImage img = label[0] == 's' ? sugar_like(w, h, s) : flowers_like(w, h, s);
      const std::string name = std::string(label) + "_" + std::to_string(i) + ".pgm";
      write_pgm(img, dir / "images" / name);
      nlohmann::ordered_json rec;
      rec["image"] = "images/" + name;
      rec["bbox"] = {0, 0, w, h};
      rec["label"] = label;
      out << rec.dump() << "\n";
    }
  }
  return manifest;
}

}  // namespace topotex::synthetic
