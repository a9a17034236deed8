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

#include "topotex/persistence.hpp"

#include <algorithm>
#include <array>
#include <numeric>

#include <json.hpp>

#include "topotex/error.hpp"

namespace topotex {

CubicalComplex::CubicalComplex(const GrayImage& img) : width_(img.width()), height_(img.height()) {
  if (img.empty()) throw UsageError("cannot build a filtration of an empty image");
  t_.resize(cell_count());
  const std::size_t v_count = vertex_count();
  for (std::size_t i = 0; i < v_count; ++i) t_[i] = static_cast<std::uint8_t>(255 - img.pixels()[i]);

  std::size_t c = v_count;
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x + 1 < width_; ++x) {
      const std::size_t v = static_cast<std::size_t>(y) * width_ + x;
      t_[c++] = std::max(t_[v], t_[v + 1]);
    }
  }
  for (int y = 0; y + 1 < height_; ++y) {
    for (int x = 0; x < width_; ++x) {
      const std::size_t v = static_cast<std::size_t>(y) * width_ + x;
      t_[c++] = std::max(t_[v], t_[v + width_]);
    }
  }
  for (int y = 0; y + 1 < height_; ++y) {
    for (int x = 0; x + 1 < width_; ++x) {
      const std::size_t v = static_cast<std::size_t>(y) * width_ + x;
      t_[c++] = std::max({t_[v], t_[v + 1], t_[v + width_], t_[v + width_ + 1]});
    }
  }
}

int CubicalComplex::dimension(std::size_t cell) const noexcept {
  if (cell < vertex_count()) return 0;
  if (cell < vertex_count() + edge_count()) return 1;
  return 2;
}

std::pair<std::size_t, std::size_t> CubicalComplex::edge_vertices(std::size_t cell) const noexcept {
  const std::size_t w = static_cast<std::size_t>(width_);
  std::size_t e = cell - vertex_count();
  if (e < horizontal_edge_count()) {
    const std::size_t y = e / (w - 1);
    const std::size_t x = e % (w - 1);
    return {y * w + x, y * w + x + 1};
  }
  e -= horizontal_edge_count();
  return {e, e + w};
}

std::array<std::size_t, 4> CubicalComplex::square_edges(std::size_t cell) const noexcept {
  const std::size_t w = static_cast<std::size_t>(width_);
  const std::size_t s = cell - vertex_count() - edge_count();
  const std::size_t y = s / (w - 1);
  const std::size_t x = s % (w - 1);
  const std::size_t h0 = vertex_count();
  const std::size_t v0 = vertex_count() + horizontal_edge_count();
  return {h0 + y * (w - 1) + x, h0 + (y + 1) * (w - 1) + x, v0 + y * w + x, v0 + y * w + x + 1};
}

std::vector<std::size_t> CubicalComplex::boundary(std::size_t cell) const {
  switch (dimension(cell)) {
    case 0:
      return {};
    case 1: {
      auto [a, b] = edge_vertices(cell);
      return {a, b};
    }
    default: {
      auto e = square_edges(cell);
      return {e.begin(), e.end()};
    }
  }
}

CubicalComplex build_superlevel_filtration(const GrayImage& img) { return CubicalComplex(img); }

bool canonical_less(const PersistenceBar& a, const PersistenceBar& b) noexcept {
  if (a.dim != b.dim) return a.dim < b.dim;
  if (a.birth != b.birth) return a.birth > b.birth;
  if (a.infinite() != b.infinite()) return a.infinite();
  if (a.infinite()) return false;
  return *a.death > *b.death;
}

std::vector<PersistenceBar> Barcode::bars_of(int dim) const {
  std::vector<PersistenceBar> out;
  std::copy_if(bars.begin(), bars.end(), std::back_inserter(out),
               [dim](const PersistenceBar& b) { return b.dim == dim; });
  return out;
}

namespace {

/// Stable counting sort of cells [first, first+count) by filtration value.
std::vector<std::uint32_t> order_by_value(const CubicalComplex& cx, std::size_t first, std::size_t count) {
  std::array<std::uint32_t, 257> start{};
  for (std::size_t i = 0; i < count; ++i) ++start[cx.value(first + i) + 1u];
  std::partial_sum(start.begin(), start.end(), start.begin());
  std::vector<std::uint32_t> order(count);
  for (std::size_t i = 0; i < count; ++i) order[start[cx.value(first + i)]++] = static_cast<std::uint32_t>(i);
  return order;
}

/// Symmetric difference of two columns sorted in descending order.
void add_column(std::vector<std::uint32_t>& target, const std::vector<std::uint32_t>& source,
                std::vector<std::uint32_t>& scratch) {
  scratch.clear();
  auto a = target.begin();
  auto b = source.begin();
  while (a != target.end() && b != source.end()) {
    if (*a > *b) {
      scratch.push_back(*a++);
    } else if (*b > *a) {
      scratch.push_back(*b++);
    } else {
      ++a;
      ++b;
    }
  }
  scratch.insert(scratch.end(), a, target.end());
  scratch.insert(scratch.end(), b, source.end());
  target.swap(scratch);
}

int to_intensity(std::uint8_t t) { return 255 - static_cast<int>(t); }

}  // namespace

Barcode compute_persistence(const CubicalComplex& cx) {
  Barcode bc;
  bc.width = cx.width();
  bc.height = cx.height();

  const std::size_t v_count = cx.vertex_count();
  const std::size_t e_count = cx.edge_count();
  const std::size_t s_count = cx.square_count();

  // Filtration order within each dimension is (t, linear index).
  const auto edge_order = order_by_value(cx, v_count, e_count);
  std::vector<std::uint32_t> edge_pos(e_count);
  for (std::size_t p = 0; p < e_count; ++p) edge_pos[edge_order[p]] = static_cast<std::uint32_t>(p);

  // Dimension 1: reduce square boundaries over Z/2. Pivots are edge positions.
  constexpr std::uint32_t kNone = 0xffffffffu;
  std::vector<std::uint32_t> pivot_owner(e_count, kNone);
  std::vector<std::vector<std::uint32_t>> reduced(s_count);
  std::vector<std::uint32_t> scratch;
  const auto square_order = order_by_value(cx, v_count + e_count, s_count);
  for (std::uint32_t s : square_order) {
    const std::size_t cell = v_count + e_count + s;
    auto faces = cx.square_edges(cell);
    std::vector<std::uint32_t> col;
    col.reserve(4);
    for (auto f : faces) col.push_back(edge_pos[f - v_count]);
    std::sort(col.begin(), col.end(), std::greater<>());
    while (!col.empty()) {
      const std::uint32_t owner = pivot_owner[col.front()];
      if (owner == kNone) break;
      add_column(col, reduced[owner], scratch);
    }
    if (col.empty()) continue;  // would be a 2-cycle; impossible in a rectangle
    const std::uint32_t low = col.front();
    pivot_owner[low] = s;
    const std::uint8_t birth_t = cx.value(v_count + edge_order[low]);
    const std::uint8_t death_t = cx.value(cell);
    if (birth_t != death_t) bc.bars.push_back({1, to_intensity(birth_t), to_intensity(death_t)});
    reduced[s] = std::move(col);
  }
  reduced.clear();

  // Dimension 0: union-find with the elder rule. Edges that are pivots above
  // are positive (they close cycles) and are cleared.
  std::vector<std::uint32_t> parent(v_count);
  std::iota(parent.begin(), parent.end(), 0u);
  std::vector<std::uint32_t> elder(parent);  // valid at roots
  auto find = [&](std::uint32_t v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  };
  auto older = [&](std::uint32_t a, std::uint32_t b) {
    return cx.value(a) != cx.value(b) ? cx.value(a) < cx.value(b) : a < b;
  };
  for (std::size_t p = 0; p < e_count; ++p) {
    if (pivot_owner[p] != kNone) continue;
    const std::size_t cell = v_count + edge_order[p];
    auto [a, b] = cx.edge_vertices(cell);
    std::uint32_t ra = find(static_cast<std::uint32_t>(a));
    std::uint32_t rb = find(static_cast<std::uint32_t>(b));
    if (ra == rb) continue;
    if (older(elder[rb], elder[ra])) std::swap(ra, rb);
    // ra holds the elder component; rb's component dies here.
    const std::uint8_t birth_t = cx.value(elder[rb]);
    const std::uint8_t death_t = cx.value(cell);
    if (birth_t != death_t) bc.bars.push_back({0, to_intensity(birth_t), to_intensity(death_t)});
    parent[rb] = ra;
  }
  const std::uint32_t root = find(0);
  bc.bars.push_back({0, to_intensity(cx.value(elder[root])), std::nullopt});

  std::sort(bc.bars.begin(), bc.bars.end(), canonical_less);
  return bc;
}

Barcode superlevel_barcode(const GrayImage& img) { return compute_persistence(CubicalComplex(img)); }

GrayImage negate(const GrayImage& img) {
  std::vector<std::uint8_t> px(img.pixels().begin(), img.pixels().end());
  for (auto& v : px) v = static_cast<std::uint8_t>(255 - v);
  return GrayImage(img.width(), img.height(), std::move(px));
}

Barcode sublevel_barcode(const GrayImage& img) {
  Barcode bc = superlevel_barcode(negate(img));
  for (auto& bar : bc.bars) {
    bar.birth = 255 - bar.birth;
    if (bar.death) bar.death = 255 - *bar.death;
  }
  std::sort(bc.bars.begin(), bc.bars.end(), canonical_less);
  return bc;
}

Betti betti_at(const Barcode& bc, int cutoff) noexcept {
  Betti b;
  for (const auto& bar : bc.bars) {
    if (bar.birth >= cutoff && (bar.infinite() || *bar.death < cutoff)) {
      (bar.dim == 0 ? b.b0 : b.b1)++;
    }
  }
  return b;
}

Betti brute_force_betti(const GrayImage& img, int cutoff) {
  const int w = img.width();
  const int h = img.height();
  auto in = [&](int x, int y) { return img.at(x, y) >= cutoff; };

  std::vector<int> parent(static_cast<std::size_t>(w) * h);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  long vertices = 0, edges = 0, squares = 0;
  int components = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!in(x, y)) continue;
      ++vertices;
      ++components;
      const int v = y * w + x;
      auto link = [&](int u) {
        ++edges;
        const int ru = find(u), rv = find(v);
        if (ru != rv) {
          parent[ru] = rv;
          --components;
        }
      };
      if (x > 0 && in(x - 1, y)) link(v - 1);
      if (y > 0 && in(x, y - 1)) link(v - w);
      if (x > 0 && y > 0 && in(x - 1, y) && in(x, y - 1) && in(x - 1, y - 1)) ++squares;
    }
  }
  const long euler = vertices - edges + squares;
  return {components, static_cast<int>(components - euler)};
}

std::string barcode_to_json(const Barcode& bc) {
  nlohmann::ordered_json j;
  j["width"] = bc.width;
  j["height"] = bc.height;
  j["bars"] = nlohmann::ordered_json::array();
  for (const auto& bar : bc.bars) {
    nlohmann::ordered_json b;
    b["dim"] = bar.dim;
    b["birth"] = bar.birth;
    b["death"] = bar.death ? nlohmann::ordered_json(*bar.death) : nlohmann::ordered_json(nullptr);
    j["bars"].push_back(std::move(b));
  }
  return j.dump(2) + "\n";
}

Barcode barcode_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    Barcode bc;
    bc.width = j.at("width").get<int>();
    bc.height = j.at("height").get<int>();
    for (const auto& b : j.at("bars")) {
      PersistenceBar bar;
      bar.dim = b.at("dim").get<int>();
      bar.birth = b.at("birth").get<int>();
      if (!b.at("death").is_null()) bar.death = b.at("death").get<int>();
      bc.bars.push_back(bar);
    }
    std::sort(bc.bars.begin(), bc.bars.end(), canonical_less);
    return bc;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed barcode JSON: ") + e.what());
  }
}

}  // namespace topotex
