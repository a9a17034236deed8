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
#include "topotex/persistence.hpp"

namespace topotex::svg {

/// Options shared by every figure. Non-reproducible output carries a
/// generation-time comment.
struct Style {
  bool reproducible = false;
  std::string title;
};

/// Fixed class palette; unknown labels are gray.
std::string class_color(const std::string& label);

/// H0 bars red, H1 bars blue; intensity axis decreases left to right.
/// Infinite bars run off the right edge.
std::string barcode(const Barcode& bc, const Style& style = {});

/// (birth, death) points; infinite bars sit on a marked "+∞" line.
std::string diagram(const Barcode& bc, const Style& style = {});

/// Landscape curves over the intensity axis. For virtual landscapes,
/// stretches that break the landscape axioms (negative values, λ_i < λ_{i+1})
/// are dashed; nothing is clipped.
std::string landscape(const SampledLandscape& ls, const Style& style = {});

struct View {
  double azimuth_deg = -60.0;
  double elevation_deg = 25.0;
};

/// The three fixed viewpoints used for scatter output.
std::vector<View> canonical_views();

/// Orthographic 2-D rendering of labelled 3-D points (rows), with the
/// plane w·x = b drawn as a wireframe when `svm` is non-null.
std::string scatter3d(const Eigen::MatrixXd& points, const std::vector<std::string>& labels, const SvmModel* svm,
                      const View& view, const Style& style = {});

/// The image as an embedded PNG.
std::string image(const GrayImage& img, const Style& style = {});

}  // namespace topotex::svg
