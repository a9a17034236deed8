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

namespace topotex {

struct PcaModel {
  Eigen::VectorXd mean;
  Eigen::MatrixXd components;  // one orthonormal row per component
  Eigen::VectorXd explained_variance_ratio;

  int n_components() const noexcept { return static_cast<int>(components.rows()); }
  int input_dimension() const noexcept { return static_cast<int>(mean.size()); }
};

/// Mean-centered SVD; components are the leading right-singular vectors,
/// each signed so its largest-magnitude entry is positive. Rows of `data`
/// are samples. Throws DomainError for all-identical data and UsageError
/// when there are fewer than n_components + 1 rows.
PcaModel fit_pca(const Eigen::MatrixXd& data, int n_components = 3);

/// components · (x - mean). Throws UsageError on dimension mismatch.
Eigen::VectorXd project(const PcaModel& m, const Eigen::VectorXd& x);
Eigen::MatrixXd project_rows(const PcaModel& m, const Eigen::MatrixXd& data);

/// Linear soft-margin classifier: class_pos when w·x - b > 0.
struct SvmModel {
  Eigen::VectorXd w;
  double b = 0.0;
  double C = 1.0;
  std::string class_pos;
  std::string class_neg;

  double decision(const Eigen::VectorXd& x) const { return w.dot(x) - b; }
  double signed_distance(const Eigen::VectorXd& x) const { return decision(x) / w.norm(); }
  bool predicts_pos(const Eigen::VectorXd& x) const { return decision(x) > 0.0; }
};

struct SvmOptions {
  double C = 1.0;
  double tolerance = 1e-10;  // KKT violation bound
  long max_iterations = 10'000'000;
};

struct SvmFit {
  SvmModel model;
  Eigen::VectorXd alpha;  // dual variables
  long iterations = 0;
  bool converged = false;
};

/// Minimizes ½|w|² + C·Σ max(0, 1 - y_i(w·x_i - b)) with SMO on the dual
/// (maximal-violating-pair selection with second-order gain). Rows of
/// `points` are samples; labels are +1 / -1. Deterministic.
/// Throws DomainError unless both labels are present.
SvmFit fit_svm_detailed(const Eigen::MatrixXd& points, const std::vector<int>& labels,
                        const SvmOptions& options = {});
SvmModel fit_svm(const Eigen::MatrixXd& points, const std::vector<int>& labels, double C = 1.0,
                 std::string class_pos = "pos", std::string class_neg = "neg");

/// Primal objective ½|w|² + C·Σ hinge.
double svm_primal_objective(const Eigen::VectorXd& w, double b, double C, const Eigen::MatrixXd& points,
                            const std::vector<int>& labels);

struct Evaluation {
  double accuracy = 0.0;
  int total = 0;
  int correct = 0;
  // confusion[actual][predicted], index 0 = class_pos, 1 = class_neg
  int confusion[2][2] = {{0, 0}, {0, 0}};
  std::vector<double> signed_distances;
  std::vector<int> predicted;  // +1 / -1
};

/// Throws UsageError for an empty test set.
Evaluation evaluate(const SvmModel& m, const Eigen::MatrixXd& points, const std::vector<int>& labels);

/// The interpretable classifier for one class pair.
struct PairModel {
  PcaModel pca;
  SvmModel svm;
};

/// {"pca": {mean, components, evr}, "svm": {w, b, C, classes: [pos, neg]}}
std::string model_to_json(const PairModel& m);
/// Throws IoError on malformed input.
PairModel model_from_json(const std::string& text);

}  // namespace topotex
