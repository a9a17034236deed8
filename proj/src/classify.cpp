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

#include "topotex/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "topotex/error.hpp"

namespace topotex {

PcaModel fit_pca(const Eigen::MatrixXd& data, int n_components) {
  if (n_components < 1) throw UsageError("PCA needs at least one component");
  if (data.rows() < n_components + 1) {
    throw UsageError("PCA with " + std::to_string(n_components) + " components needs at least " +
                     std::to_string(n_components + 1) + " samples, got " + std::to_string(data.rows()));
  }
  if (data.cols() < n_components) {
    throw UsageError("PCA input dimension " + std::to_string(data.cols()) + " is below component count");
  }
  PcaModel m;
  m.mean = data.colwise().mean().transpose();
  const Eigen::MatrixXd centered = data.rowwise() - m.mean.transpose();
  const double total = centered.squaredNorm();
  if (!(total > 0.0)) throw DomainError("PCA rank error: all samples are identical");

  Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  m.components.resize(n_components, data.cols());
  m.explained_variance_ratio.resize(n_components);
  for (int i = 0; i < n_components; ++i) {
    Eigen::VectorXd v = svd.matrixV().col(i);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v[arg] < 0) v = -v;
    m.components.row(i) = v.transpose();
    m.explained_variance_ratio[i] = i < s.size() ? s[i] * s[i] / total : 0.0;
  }
  return m;
}

Eigen::VectorXd project(const PcaModel& m, const Eigen::VectorXd& x) {
  if (x.size() != m.mean.size()) {
    throw UsageError("cannot project a vector of length " + std::to_string(x.size()) +
                     " with a PCA model of input dimension " + std::to_string(m.mean.size()));
  }
  return m.components * (x - m.mean);
}

Eigen::MatrixXd project_rows(const PcaModel& m, const Eigen::MatrixXd& data) {
  if (data.cols() != m.mean.size()) {
    throw UsageError("cannot project rows of length " + std::to_string(data.cols()) +
                     " with a PCA model of input dimension " + std::to_string(m.mean.size()));
  }
  return (data.rowwise() - m.mean.transpose()) * m.components.transpose();
}

namespace {

// Dual: min ½αᵀQα - Σα, 0 ≤ α ≤ C, yᵀα = 0, with Q_ij = y_i y_j x_i·x_j.
class SmoSolver {
 public:
  SmoSolver(const Eigen::MatrixXd& x, const std::vector<int>& y, double C)
      : y_(y), C_(C), n_(static_cast<int>(y.size())) {
    kernel_ = x * x.transpose();
    alpha_ = Eigen::VectorXd::Zero(n_);
    grad_ = Eigen::VectorXd::Constant(n_, -1.0);
  }

  bool run(double tol, long max_iter, long& iterations) {
    for (iterations = 0; iterations < max_iter; ++iterations) {
      int i = -1, j = -1;
      if (select(tol, i, j)) return true;
      update(i, j);
    }
    return false;
  }

  const Eigen::VectorXd& alpha() const { return alpha_; }

  double rho() const {
    double ub = std::numeric_limits<double>::infinity();
    double lb = -ub;
    double sum_free = 0.0;
    int free_count = 0;
    for (int t = 0; t < n_; ++t) {
      const double yg = y_[t] * grad_[t];
      if (at_upper(t)) {
        if (y_[t] == -1) ub = std::min(ub, yg); else lb = std::max(lb, yg);
      } else if (at_lower(t)) {
        if (y_[t] == 1) ub = std::min(ub, yg); else lb = std::max(lb, yg);
      } else {
        ++free_count;
        sum_free += yg;
      }
    }
    return free_count > 0 ? sum_free / free_count : (ub + lb) / 2;
  }

 private:
  static constexpr double kTau = 1e-12;

  bool at_upper(int t) const { return alpha_[t] >= C_; }
  bool at_lower(int t) const { return alpha_[t] <= 0.0; }
  double q(int a, int b) const { return y_[a] * y_[b] * kernel_(a, b); }

  // Returns true when the KKT violation is below tol.
  bool select(double tol, int& out_i, int& out_j) const {
    double gmax = -std::numeric_limits<double>::infinity();
    int i = -1;
    for (int t = 0; t < n_; ++t) {
      if (y_[t] == 1) {
        if (!at_upper(t) && -grad_[t] >= gmax) { gmax = -grad_[t]; i = t; }
      } else {
        if (!at_lower(t) && grad_[t] >= gmax) { gmax = grad_[t]; i = t; }
      }
    }
    if (i < 0) return true;
    double gmax2 = -std::numeric_limits<double>::infinity();
    double best = std::numeric_limits<double>::infinity();
    int j = -1;
    for (int t = 0; t < n_; ++t) {
      double diff;
      double quad;
      if (y_[t] == 1) {
        if (at_lower(t)) continue;
        gmax2 = std::max(gmax2, grad_[t]);
        diff = gmax + grad_[t];
        quad = kernel_(i, i) + kernel_(t, t) - 2.0 * y_[i] * q(i, t);
      } else {
        if (at_upper(t)) continue;
        gmax2 = std::max(gmax2, -grad_[t]);
        diff = gmax - grad_[t];
        quad = kernel_(i, i) + kernel_(t, t) + 2.0 * y_[i] * q(i, t);
      }
      if (diff > 0) {
        const double gain = -(diff * diff) / (quad > 0 ? quad : kTau);
        if (gain <= best) { best = gain; j = t; }
      }
    }
    if (gmax + gmax2 < tol || j < 0) return true;
    out_i = i;
    out_j = j;
    return false;
  }

  void update(int i, int j) {
    const double old_i = alpha_[i];
    const double old_j = alpha_[j];
    double& ai = alpha_[i];
    double& aj = alpha_[j];
    if (y_[i] != y_[j]) {
      double quad = kernel_(i, i) + kernel_(j, j) + 2 * q(i, j);
      if (quad <= 0) quad = kTau;
      const double delta = (-grad_[i] - grad_[j]) / quad;
      const double diff = ai - aj;
      ai += delta;
      aj += delta;
      if (diff > 0) {
        if (aj < 0) { aj = 0; ai = diff; }
      } else {
        if (ai < 0) { ai = 0; aj = -diff; }
      }
      if (diff > 0) {
        if (ai > C_) { ai = C_; aj = C_ - diff; }
      } else {
        if (aj > C_) { aj = C_; ai = C_ + diff; }
      }
    } else {
      double quad = kernel_(i, i) + kernel_(j, j) - 2 * q(i, j);
      if (quad <= 0) quad = kTau;
      const double delta = (grad_[i] - grad_[j]) / quad;
      const double sum = ai + aj;
      ai -= delta;
      aj += delta;
      if (sum > C_) {
        if (ai > C_) { ai = C_; aj = sum - C_; }
      } else {
        if (aj < 0) { aj = 0; ai = sum; }
      }
      if (sum > C_) {
        if (aj > C_) { aj = C_; ai = sum - C_; }
      } else {
        if (ai < 0) { ai = 0; aj = sum; }
      }
    }
    const double di = ai - old_i;
    const double dj = aj - old_j;
    for (int t = 0; t < n_; ++t) grad_[t] += q(i, t) * di + q(j, t) * dj;
  }

  const std::vector<int>& y_;
  double C_;
  int n_;
  Eigen::MatrixXd kernel_;
  Eigen::VectorXd alpha_;
  Eigen::VectorXd grad_;
};

}  // namespace

SvmFit fit_svm_detailed(const Eigen::MatrixXd& points, const std::vector<int>& labels, const SvmOptions& options) {
  if (points.rows() != static_cast<Eigen::Index>(labels.size())) {
    throw UsageError("point and label counts differ");
  }
  if (!(options.C > 0.0)) throw UsageError("SVM penalty C must be positive");
  bool has_pos = false, has_neg = false;
  for (int y : labels) {
    if (y == 1) has_pos = true;
    else if (y == -1) has_neg = true;
    else throw UsageError("SVM labels must be +1 or -1");
  }
  if (!has_pos || !has_neg) throw DomainError("SVM training needs both classes present");

  SmoSolver solver(points, labels, options.C);
  SvmFit fit;
  fit.converged = solver.run(options.tolerance, options.max_iterations, fit.iterations);
  fit.alpha = solver.alpha();
  Eigen::VectorXd coef(labels.size());
  for (std::size_t t = 0; t < labels.size(); ++t) coef[static_cast<Eigen::Index>(t)] = fit.alpha[t] * labels[t];
  fit.model.w = points.transpose() * coef;
  fit.model.b = solver.rho();
  fit.model.C = options.C;
  if (!(fit.model.w.norm() > 0.0)) throw DomainError("SVM produced a zero normal vector");
  return fit;
}

SvmModel fit_svm(const Eigen::MatrixXd& points, const std::vector<int>& labels, double C, std::string class_pos,
                 std::string class_neg) {
  SvmOptions opt;
  opt.C = C;
  SvmModel m = fit_svm_detailed(points, labels, opt).model;
  m.class_pos = std::move(class_pos);
  m.class_neg = std::move(class_neg);
  return m;
}

double svm_primal_objective(const Eigen::VectorXd& w, double b, double C, const Eigen::MatrixXd& points,
                            const std::vector<int>& labels) {
  double hinge = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const double margin = labels[static_cast<std::size_t>(i)] * (points.row(i).dot(w) - b);
    hinge += std::max(0.0, 1.0 - margin);
  }
  return 0.5 * w.squaredNorm() + C * hinge;
}

Evaluation evaluate(const SvmModel& m, const Eigen::MatrixXd& points, const std::vector<int>& labels) {
  if (points.rows() == 0) throw UsageError("cannot evaluate on an empty test set");
  if (points.rows() != static_cast<Eigen::Index>(labels.size())) {
    throw UsageError("point and label counts differ");
  }
  Evaluation ev;
  ev.total = static_cast<int>(points.rows());
  const double norm = m.w.norm();
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const double decision = points.row(i).dot(m.w) - m.b;
    const int pred = decision > 0.0 ? 1 : -1;
    const int actual = labels[static_cast<std::size_t>(i)];
    ev.signed_distances.push_back(decision / norm);
    ev.predicted.push_back(pred);
    ev.confusion[actual == 1 ? 0 : 1][pred == 1 ? 0 : 1]++;
    if (pred == actual) ++ev.correct;
  }
  ev.accuracy = static_cast<double>(ev.correct) / ev.total;
  return ev;
}

namespace {

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

std::string model_to_json(const PairModel& m) {
  nlohmann::ordered_json j;
  auto& pca = j["pca"];
  pca["mean"] = to_std(m.pca.mean);
  pca["components"] = nlohmann::ordered_json::array();
  for (Eigen::Index r = 0; r < m.pca.components.rows(); ++r) {
    pca["components"].push_back(to_std(m.pca.components.row(r).transpose()));
  }
  pca["evr"] = to_std(m.pca.explained_variance_ratio);
  auto& svm = j["svm"];
  svm["w"] = to_std(m.svm.w);
  svm["b"] = m.svm.b;
  svm["C"] = m.svm.C;
  svm["classes"] = {m.svm.class_pos, m.svm.class_neg};
  return j.dump(1) + "\n";
}

PairModel model_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    PairModel m;
    const auto& pca = j.at("pca");
    m.pca.mean = to_eigen(pca.at("mean").get<std::vector<double>>());
    const auto rows = pca.at("components").get<std::vector<std::vector<double>>>();
    m.pca.components.resize(static_cast<Eigen::Index>(rows.size()), m.pca.mean.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != static_cast<std::size_t>(m.pca.mean.size())) throw IoError("PCA component length mismatch");
      m.pca.components.row(static_cast<Eigen::Index>(r)) = to_eigen(rows[r]).transpose();
    }
    m.pca.explained_variance_ratio = to_eigen(pca.at("evr").get<std::vector<double>>());
    const auto& svm = j.at("svm");
    m.svm.w = to_eigen(svm.at("w").get<std::vector<double>>());
    m.svm.b = svm.at("b").get<double>();
    m.svm.C = svm.at("C").get<double>();
    const auto classes = svm.at("classes").get<std::vector<std::string>>();
    if (classes.size() != 2) throw IoError("model must name exactly two classes");
    m.svm.class_pos = classes[0];
    m.svm.class_neg = classes[1];
    if (m.svm.w.size() != m.pca.components.rows()) throw IoError("SVM and PCA dimensions disagree");
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed model JSON: ") + e.what());
  }
}

}  // namespace topotex
