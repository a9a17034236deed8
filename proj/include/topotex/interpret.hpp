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

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "topotex/classify.hpp"
#include "topotex/landscape.hpp"

namespace topotex {

/// The 3-D separating plane lifted to embedding space: all v with
/// w · project(pca, v) = b. `normal` is the unit normal of that hyperplane.
struct LiftedPlane {
  Eigen::VectorXd normal;
  double offset = 0.0;  // the plane is {v : w · components · (v - mean) = offset}
  double gain = 0.0;    // |componentsᵀ w|; decision changes by gain per unit along normal
};

/// Throws UsageError for incompatible models, DomainError for a zero normal.
LiftedPlane lift_plane(const PcaModel& pca, const SvmModel& svm);

/// A point of embedding space on the normal line through the data centroid.
struct VirtualPoint {
  Eigen::VectorXd vector;
  std::string side;      // class label whose side of the plane the point lies on
  double offset = 0.0;   // signed multiple of the unit normal from the centroid
  double decision = 0.0; // svm decision value at project(pca, vector)
  SampledLandscape curves;
};

/// Centroid μ of `data` (rows); offsets s_i = n·(x_i - μ); the point
/// μ + max s_i·n for the positive class or μ + min s_i·n for the negative
/// class. Throws UsageError for empty data or an unknown side, and
/// DomainError when the chosen point does not fall strictly on its side.
VirtualPoint virtual_landscape(const PcaModel& pca, const SvmModel& svm, const Eigen::MatrixXd& data,
                               const std::string& side, const EmbeddingShape& shape = {});

/// Index (row of `points`) of the annotation of each class that lies
/// farthest from the plane on its own side.
struct ExtremePair {
  int pos_index = -1;
  int neg_index = -1;
  double pos_distance = 0.0;
  double neg_distance = 0.0;
};

/// `points` are rows in the 3-D projected space; labels are +1 / -1.
/// Throws DomainError when a side holds no correctly placed annotation.
ExtremePair extreme_examples(const SvmModel& svm, const Eigen::MatrixXd& points, const std::vector<int>& labels);

}  // namespace topotex
