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

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "topotex/persistence.hpp"

namespace topotex {

/// Evenly spaced sample points over the internal parameter axis.
struct Grid {
  double min = 0.0;
  double max = 255.0;
  int n = 200;

  double at(int j) const noexcept {
    return n == 1 ? min : min + (max - min) * static_cast<double>(j) / static_cast<double>(n - 1);
  }
  friend bool operator==(const Grid&, const Grid&) = default;
};

/// Piecewise-linear function given by its breakpoints, sorted by x. The
/// first and last breakpoints sit at -inf / +inf with value 0. Every segment
/// has slope -1, 0 or +1.
class PiecewiseLinear {
 public:
  struct Point {
    double x;
    double y;
  };

  PiecewiseLinear();  // identically zero
  explicit PiecewiseLinear(std::vector<Point> points);

  double operator()(double t) const noexcept;
  std::span<const Point> points() const noexcept { return points_; }

 private:
  std::vector<Point> points_;
};

/// The k landscape functions λ_1 ≥ … ≥ λ_k of one homological dimension,
/// over the internal parameter t = 255 - intensity.
struct PersistenceLandscape {
  int dim = 0;
  std::vector<PiecewiseLinear> functions;
};

/// Finite bars of dimension `dim`, as internal-parameter intervals (birth_t < death_t).
std::vector<std::pair<double, double>> internal_intervals(const Barcode& bc, int dim);

/// Exact landscape construction (sweep over bars sorted by birth, then by
/// decreasing death). Infinite bars are excluded. Missing functions are zero.
PersistenceLandscape compute_landscape(const Barcode& bc, int dim, int k = 5);
PersistenceLandscape compute_landscape(std::vector<std::pair<double, double>> intervals, int dim, int k);

/// Samples every function at the grid points; function-major order.
std::vector<double> sample_landscape(const PersistenceLandscape& ls, const Grid& grid = {});

/// Fixed-grid summary of one barcode: H0 λ_1..λ_k samples then H1 λ_1..λ_k.
struct LandscapeEmbedding {
  Grid grid;
  int k = 5;
  std::vector<double> values;

  std::size_t dimension() const noexcept { return values.size(); }
  friend bool operator==(const LandscapeEmbedding&, const LandscapeEmbedding&) = default;
};

struct EmbeddingShape {
  Grid grid;
  int k = 5;
  std::size_t dimension() const noexcept { return 2u * static_cast<std::size_t>(k) * grid.n; }
};

LandscapeEmbedding embed(const Barcode& bc, const EmbeddingShape& shape = {});

/// Componentwise mean. Throws UsageError for an empty list or mismatched shapes.
LandscapeEmbedding average_embeddings(std::span<const LandscapeEmbedding> items);

/// Landscape-like curves recovered from an arbitrary embedding-space vector.
/// No landscape axiom is enforced; `is_virtual` marks vectors that are not
/// embeddings of real data.
struct SampledLandscape {
  Grid grid;
  std::vector<std::vector<double>> h0;  // k curves of grid.n samples
  std::vector<std::vector<double>> h1;
  bool is_virtual = false;
};

/// Throws UsageError when v.size() != shape.dimension().
SampledLandscape vector_to_landscape(std::span<const double> v, const EmbeddingShape& shape = {},
                                     bool is_virtual = false);
std::vector<double> landscape_to_vector(const SampledLandscape& ls);

/// True when the curves satisfy λ_i ≥ λ_{i+1} ≥ 0 and the grid Lipschitz bound.
bool satisfies_landscape_axioms(const SampledLandscape& ls, double tol = 1e-9);

std::string landscape_to_json(const SampledLandscape& ls);

}  // namespace topotex
