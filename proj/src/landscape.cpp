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

#include "topotex/landscape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "topotex/error.hpp"

namespace topotex {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

PiecewiseLinear::PiecewiseLinear() : points_{{-kInf, 0.0}, {kInf, 0.0}} {}

PiecewiseLinear::PiecewiseLinear(std::vector<Point> points) : points_(std::move(points)) {}

double PiecewiseLinear::operator()(double t) const noexcept {
  auto it = std::upper_bound(points_.begin(), points_.end(), t,
                             [](double v, const Point& p) { return v < p.x; });
  if (it == points_.begin() || it == points_.end()) return 0.0;
  const Point& p0 = *(it - 1);
  const Point& p1 = *it;
  // Each segment lies on one tent side, so evaluate it through the tent's
  // anchor (its birth or death) rather than interpolating.
  double v;
  if (p1.y > p0.y) {
    v = t - (p0.x - p0.y);
  } else if (p1.y < p0.y) {
    v = (p0.x + p0.y) - t;
  } else {
    v = p0.y;
  }
  return std::max(0.0, v);
}

std::vector<std::pair<double, double>> internal_intervals(const Barcode& bc, int dim) {
  std::vector<std::pair<double, double>> out;
  for (const auto& bar : bc.bars) {
    if (bar.dim != dim || bar.infinite()) continue;
    out.emplace_back(255.0 - bar.birth, 255.0 - *bar.death);
  }
  return out;
}

PersistenceLandscape compute_landscape(std::vector<std::pair<double, double>> intervals, int dim, int k) {
  if (k < 0) throw UsageError("landscape function count must be non-negative");
  using Interval = std::pair<double, double>;
  std::erase_if(intervals, [](const Interval& iv) { return !(iv.first < iv.second); });
  auto order = [](const Interval& a, const Interval& b) {
    return a.first != b.first ? a.first < b.first : a.second > b.second;
  };
  std::sort(intervals.begin(), intervals.end(), order);

  PersistenceLandscape ls;
  ls.dim = dim;
  std::vector<Interval>& pending = intervals;
  while (!pending.empty() && static_cast<int>(ls.functions.size()) < k) {
    std::vector<PiecewiseLinear::Point> pts;
    auto [b, d] = pending.front();
    pending.erase(pending.begin());
    pts.push_back({-kInf, 0.0});
    pts.push_back({b, 0.0});
    pts.push_back({(b + d) / 2, (d - b) / 2});
    std::size_t p = 0;
    for (;;) {
      std::size_t q = p;
      while (q < pending.size() && pending[q].second <= d) ++q;
      if (q == pending.size()) {
        pts.push_back({d, 0.0});
        pts.push_back({kInf, 0.0});
        break;
      }
      const auto [nb, nd] = pending[q];
      pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(q));
      p = q;
      if (nb > d) pts.push_back({d, 0.0});
      if (nb >= d) {
        pts.push_back({nb, 0.0});
      } else {
        // The two tents cross; the lower part of the new tent continues in
        // the next function.
        pts.push_back({(nb + d) / 2, (d - nb) / 2});
        const Interval rest{nb, d};
        auto pos = std::lower_bound(pending.begin(), pending.end(), rest, order);
        if (static_cast<std::size_t>(pos - pending.begin()) <= p) ++p;
        pending.insert(pos, rest);
      }
      pts.push_back({(nb + nd) / 2, (nd - nb) / 2});
      b = nb;
      d = nd;
    }
    ls.functions.emplace_back(std::move(pts));
  }
  while (static_cast<int>(ls.functions.size()) < k) ls.functions.emplace_back();
  return ls;
}

PersistenceLandscape compute_landscape(const Barcode& bc, int dim, int k) {
  return compute_landscape(internal_intervals(bc, dim), dim, k);
}

std::vector<double> sample_landscape(const PersistenceLandscape& ls, const Grid& grid) {
  if (grid.n < 1) throw UsageError("grid must have at least one sample");
  std::vector<double> out;
  out.reserve(ls.functions.size() * static_cast<std::size_t>(grid.n));
  for (const auto& f : ls.functions) {
    for (int j = 0; j < grid.n; ++j) out.push_back(f(grid.at(j)));
  }
  return out;
}

LandscapeEmbedding embed(const Barcode& bc, const EmbeddingShape& shape) {
  LandscapeEmbedding e;
  e.grid = shape.grid;
  e.k = shape.k;
  e.values.reserve(shape.dimension());
  for (int dim = 0; dim <= 1; ++dim) {
    const auto samples = sample_landscape(compute_landscape(bc, dim, shape.k), shape.grid);
    e.values.insert(e.values.end(), samples.begin(), samples.end());
  }
  return e;
}

LandscapeEmbedding average_embeddings(std::span<const LandscapeEmbedding> items) {
  if (items.empty()) throw UsageError("cannot average an empty list of embeddings");
  // first + mean of deviations from it: exact when all items agree
  const LandscapeEmbedding& first = items.front();
  std::vector<double> deviation(first.values.size(), 0.0);
  for (const auto& e : items.subspan(1)) {
    if (!(e.grid == first.grid) || e.k != first.k || e.values.size() != first.values.size()) {
      throw UsageError("cannot average embeddings on different grids");
    }
    for (std::size_t i = 0; i < deviation.size(); ++i) deviation[i] += e.values[i] - first.values[i];
  }
  LandscapeEmbedding out = first;
  const double m = static_cast<double>(items.size());
  for (std::size_t i = 0; i < deviation.size(); ++i) out.values[i] += deviation[i] / m;
  return out;
}

SampledLandscape vector_to_landscape(std::span<const double> v, const EmbeddingShape& shape, bool is_virtual) {
  if (v.size() != shape.dimension()) {
    throw UsageError("embedding vector has length " + std::to_string(v.size()) + ", expected " +
                     std::to_string(shape.dimension()));
  }
  SampledLandscape ls;
  ls.grid = shape.grid;
  ls.is_virtual = is_virtual;
  const std::size_t n = static_cast<std::size_t>(shape.grid.n);
  auto it = v.begin();
  for (auto* block : {&ls.h0, &ls.h1}) {
    for (int i = 0; i < shape.k; ++i) {
      block->emplace_back(it, it + static_cast<std::ptrdiff_t>(n));
      it += static_cast<std::ptrdiff_t>(n);
    }
  }
  return ls;
}

std::vector<double> landscape_to_vector(const SampledLandscape& ls) {
  std::vector<double> out;
  for (const auto* block : {&ls.h0, &ls.h1}) {
    for (const auto& curve : *block) out.insert(out.end(), curve.begin(), curve.end());
  }
  return out;
}

bool satisfies_landscape_axioms(const SampledLandscape& ls, double tol) {
  const double spacing = ls.grid.n > 1 ? (ls.grid.max - ls.grid.min) / (ls.grid.n - 1) : 0.0;
  for (const auto* block : {&ls.h0, &ls.h1}) {
    for (std::size_t i = 0; i < block->size(); ++i) {
      const auto& c = (*block)[i];
      for (std::size_t j = 0; j < c.size(); ++j) {
        if (c[j] < -tol) return false;
        if (i + 1 < block->size() && (*block)[i + 1][j] > c[j] + tol) return false;
        if (j + 1 < c.size() && std::abs(c[j + 1] - c[j]) > spacing + tol) return false;
      }
    }
  }
  return true;
}

std::string landscape_to_json(const SampledLandscape& ls) {
  nlohmann::ordered_json j;
  j["grid"] = {{"min", ls.grid.min}, {"max", ls.grid.max}, {"n", ls.grid.n}};
  j["h0"] = ls.h0;
  j["h1"] = ls.h1;
  j["virtual"] = ls.is_virtual;
  return j.dump(2) + "\n";
}

}  // namespace topotex
