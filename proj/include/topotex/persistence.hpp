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

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "topotex/image.hpp"

namespace topotex {

/// Superlevelset cubical filtration of an image in V-construction: pixels
/// are vertices, 4-adjacent pixels share an edge, every 2×2 pixel block
/// spans a square. A cell enters at internal parameter
/// t = 255 - (minimum intensity over its vertices), so t grows as the
/// intensity cutoff sweeps down.
///
/// Linear cell indices: vertices [0, V), horizontal edges, vertical edges,
/// then squares. Vertex (x, y) is y*w + x; horizontal edge (x,y)-(x+1,y) is
/// V + y*(w-1) + x; vertical edge (x,y)-(x,y+1) is V + h*(w-1) + y*w + x;
/// square with top-left (x, y) is V + E + y*(w-1) + x.
class CubicalComplex {
 public:
  explicit CubicalComplex(const GrayImage& img);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }

  std::size_t vertex_count() const noexcept { return static_cast<std::size_t>(width_) * height_; }
  std::size_t horizontal_edge_count() const noexcept {
    return static_cast<std::size_t>(width_ - 1) * height_;
  }
  std::size_t edge_count() const noexcept {
    return horizontal_edge_count() + static_cast<std::size_t>(width_) * (height_ - 1);
  }
  std::size_t square_count() const noexcept {
    return static_cast<std::size_t>(width_ - 1) * (height_ - 1);
  }
  std::size_t cell_count() const noexcept { return vertex_count() + edge_count() + square_count(); }

  /// Dimension (0, 1, 2) of a linear cell index.
  int dimension(std::size_t cell) const noexcept;
  /// Filtration value of a linear cell index.
  std::uint8_t value(std::size_t cell) const noexcept { return t_[cell]; }

  /// Endpoints (vertex indices) of the edge with linear index `cell`.
  std::pair<std::size_t, std::size_t> edge_vertices(std::size_t cell) const noexcept;
  /// The four edges (linear indices) bounding square `cell`: top, bottom, left, right.
  std::array<std::size_t, 4> square_edges(std::size_t cell) const noexcept;
  /// Faces of a cell (empty for vertices).
  std::vector<std::size_t> boundary(std::size_t cell) const;

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> t_;
};

CubicalComplex build_superlevel_filtration(const GrayImage& img);

/// One feature of the superlevelset filtration, in intensity coordinates.
/// Finite bars satisfy birth > death (the cutoff decreases over time).
struct PersistenceBar {
  int dim = 0;
  int birth = 0;
  std::optional<int> death;  // nullopt = infinite

  bool infinite() const noexcept { return !death.has_value(); }
  friend bool operator==(const PersistenceBar&, const PersistenceBar&) = default;
};

/// Canonical bar order: dim ascending, birth descending, infinite before finite,
/// then death descending.
bool canonical_less(const PersistenceBar& a, const PersistenceBar& b) noexcept;

struct Barcode {
  int width = 0;
  int height = 0;
  std::vector<PersistenceBar> bars;  // canonical order

  std::vector<PersistenceBar> bars_of(int dim) const;
  friend bool operator==(const Barcode&, const Barcode&) = default;
};

/// Dim-0 by union-find with the elder rule, dim-1 by Z/2 reduction of the
/// square boundary columns (computed first so positive edges are cleared
/// before the union-find pass). Zero-length bars are dropped.
Barcode compute_persistence(const CubicalComplex& cx);

/// Convenience: build_superlevel_filtration + compute_persistence.
Barcode superlevel_barcode(const GrayImage& img);

/// Sublevelset barcode (bars born at low intensity, death > birth). Defined
/// through the superlevel engine on the negated image.
Barcode sublevel_barcode(const GrayImage& img);

/// Image with every intensity v replaced by 255 - v.
GrayImage negate(const GrayImage& img);

struct Betti {
  int b0 = 0;
  int b1 = 0;
  friend bool operator==(const Betti&, const Betti&) = default;
};

/// Betti numbers of the superlevelset {intensity >= cutoff} read off a barcode.
Betti betti_at(const Barcode& bc, int cutoff) noexcept;

/// Independent oracle: Betti numbers of the mask {pixels >= cutoff} via
/// union-find on 4-adjacency and the Euler characteristic V - E + F.
Betti brute_force_betti(const GrayImage& img, int cutoff);

std::string barcode_to_json(const Barcode& bc);
Barcode barcode_from_json(const std::string& text);

}  // namespace topotex
