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

#include "topotex/interpret.hpp"

#include <limits>

#include "topotex/error.hpp"

namespace topotex {

LiftedPlane lift_plane(const PcaModel& pca, const SvmModel& svm) {
  if (svm.w.size() != pca.components.rows()) {
    throw UsageError("SVM normal has " + std::to_string(svm.w.size()) + " entries but PCA has " +
                     std::to_string(pca.components.rows()) + " components");
  }
  if (!(svm.w.norm() > 0.0)) throw DomainError("cannot lift a plane with zero normal");
  const Eigen::VectorXd lifted = pca.components.transpose() * svm.w;
  const double gain = lifted.norm();
  if (!(gain > 0.0)) throw DomainError("lifted normal vanishes");
  return {lifted / gain, svm.b, gain};
}

VirtualPoint virtual_landscape(const PcaModel& pca, const SvmModel& svm, const Eigen::MatrixXd& data,
                               const std::string& side, const EmbeddingShape& shape) {
  if (data.rows() == 0) throw UsageError("virtual landscape needs at least one data point");
  if (side != svm.class_pos && side != svm.class_neg) {
    throw UsageError("unknown side '" + side + "' (expected '" + svm.class_pos + "' or '" + svm.class_neg + "')");
  }
  if (data.cols() != pca.mean.size()) {
    throw UsageError("data has " + std::to_string(data.cols()) + " columns but the PCA model expects " +
                     std::to_string(pca.mean.size()));
  }
  const LiftedPlane plane = lift_plane(pca, svm);
  const Eigen::VectorXd centroid = data.colwise().mean().transpose();
  const Eigen::VectorXd s = (data.rowwise() - centroid.transpose()) * plane.normal;

  VirtualPoint vp;
  vp.side = side;
  vp.offset = side == svm.class_pos ? s.maxCoeff() : s.minCoeff();
  vp.vector = centroid + vp.offset * plane.normal;
  vp.decision = svm.decision(project(pca, vp.vector));
  const bool on_side = side == svm.class_pos ? vp.decision > 0.0 : vp.decision < 0.0;
  if (!on_side) {
    throw DomainError("no data point lies on the '" + side + "' side of the plane; virtual point undefined");
  }
  vp.curves = vector_to_landscape({vp.vector.data(), static_cast<std::size_t>(vp.vector.size())}, shape, true);
  return vp;
}

ExtremePair extreme_examples(const SvmModel& svm, const Eigen::MatrixXd& points, const std::vector<int>& labels) {
  if (points.rows() != static_cast<Eigen::Index>(labels.size())) throw UsageError("point and label counts differ");
  ExtremePair out;
  out.pos_distance = 0.0;
  out.neg_distance = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const double d = svm.signed_distance(points.row(i).transpose());
    const int y = labels[static_cast<std::size_t>(i)];
    if (y == 1 && d > 0.0 && (out.pos_index < 0 || d > out.pos_distance)) {
      out.pos_index = static_cast<int>(i);
      out.pos_distance = d;
    } else if (y == -1 && d < 0.0 && (out.neg_index < 0 || d < out.neg_distance)) {
      out.neg_index = static_cast<int>(i);
      out.neg_distance = d;
    }
  }
  if (out.pos_index < 0) throw DomainError("no '" + svm.class_pos + "' annotation lies on its side of the plane");
  if (out.neg_index < 0) throw DomainError("no '" + svm.class_neg + "' annotation lies on its side of the plane");
  return out;
}

}  // namespace topotex
