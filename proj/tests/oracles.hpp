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

// Reference implementations used only by the tests. Each one takes a
// different route from the library code it checks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <queue>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "topotex/image.hpp"
#include "topotex/landscape.hpp"
#include "topotex/persistence.hpp"

namespace oracle {

// Betti numbers of {pixels >= cutoff} by breadth-first flood fill and an
// Euler characteristic counted cell by cell.
inline topotex::Betti flood_fill_betti(const topotex::GrayImage& img, int cutoff) {
  const int w = img.width();
  const int h = img.height();
  auto in = [&](int x, int y) { return x >= 0 && y >= 0 && x < w && y < h && img.at(x, y) >= cutoff; };
  std::vector<char> seen(static_cast<std::size_t>(w) * h, 0);
  int components = 0;
  long v = 0, e = 0, f = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!in(x, y)) continue;
      ++v;
      if (in(x + 1, y)) ++e;
      if (in(x, y + 1)) ++e;
      if (in(x + 1, y) && in(x, y + 1) && in(x + 1, y + 1)) ++f;
      if (seen[static_cast<std::size_t>(y) * w + x]) continue;
      ++components;
      std::queue<std::pair<int, int>> q;
      q.push({x, y});
      seen[static_cast<std::size_t>(y) * w + x] = 1;
      while (!q.empty()) {
        auto [cx, cy] = q.front();
        q.pop();
        const int dx[] = {1, -1, 0, 0};
        const int dy[] = {0, 0, 1, -1};
        for (int d = 0; d < 4; ++d) {
          const int nx = cx + dx[d], ny = cy + dy[d];
          if (in(nx, ny) && !seen[static_cast<std::size_t>(ny) * w + nx]) {
            seen[static_cast<std::size_t>(ny) * w + nx] = 1;
            q.push({nx, ny});
          }
        }
      }
    }
  }
  const long chi = v - e + f;
  return {components, static_cast<int>(components - chi)};
}

// λ_i(t) sampled on the grid by sorting all tent heights at every t.
inline std::vector<double> naive_landscape_samples(const std::vector<std::pair<double, double>>& intervals, int k,
                                                   const topotex::Grid& grid) {
  std::vector<double> out(static_cast<std::size_t>(k) * grid.n, 0.0);
  for (int j = 0; j < grid.n; ++j) {
    const double t = grid.at(j);
    std::vector<double> tents;
    for (auto [b, d] : intervals) {
      if (!(b < d)) continue;
      tents.push_back(std::max(0.0, std::min(t - b, d - t)));
    }
    std::sort(tents.begin(), tents.end(), std::greater<>());
    for (int i = 0; i < k && i < static_cast<int>(tents.size()); ++i) {
      out[static_cast<std::size_t>(i) * grid.n + j] = tents[static_cast<std::size_t>(i)];
    }
  }
  return out;
}

// Neumaier-compensated mean of equal-length vectors.
inline std::vector<double> compensated_mean(const std::vector<std::vector<double>>& rows) {
  const std::size_t n = rows.front().size();
  std::vector<double> out(n);
  for (std::size_t c = 0; c < n; ++c) {
    double sum = 0.0, comp = 0.0;
    for (const auto& r : rows) {
      const double x = r[c];
      const double t = sum + x;
      comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
      sum = t;
    }
    out[c] = (sum + comp) / static_cast<double>(rows.size());
  }
  return out;
}

// Cyclic Jacobi eigen-decomposition of a symmetric matrix. Eigenvalues are
// returned in descending order with matching eigenvector columns.
inline std::pair<Eigen::VectorXd, Eigen::MatrixXd> jacobi_eigen(Eigen::MatrixXd a) {
  const Eigen::Index n = a.rows();
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-30 * std::max(1.0, a.squaredNorm())) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(), [&](auto x, auto y) { return a(x, x) > a(y, y); });
  Eigen::VectorXd values(n);
  Eigen::MatrixXd vectors(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    values(i) = a(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(i)]);
    vectors.col(i) = v.col(order[static_cast<std::size_t>(i)]);
  }
  return {values, vectors};
}

struct ReferencePca {
  Eigen::MatrixXd components;  // rows
  Eigen::VectorXd explained_variance_ratio;
};

// Principal axes from the eigenvectors of the n×n Gram matrix of centered
// rows, mapped back to feature space.
inline ReferencePca reference_pca(const Eigen::MatrixXd& data, int nc) {
  const Eigen::RowVectorXd mean = data.colwise().mean();
  const Eigen::MatrixXd xc = data.rowwise() - mean;
  const auto [values, vectors] = jacobi_eigen(xc * xc.transpose());
  const double total = xc.squaredNorm();
  ReferencePca out;
  out.components.resize(nc, data.cols());
  out.explained_variance_ratio.resize(nc);
  for (int i = 0; i < nc; ++i) {
    Eigen::VectorXd axis = xc.transpose() * vectors.col(i);
    axis.normalize();
    Eigen::Index arg = 0;
    axis.cwiseAbs().maxCoeff(&arg);
    if (axis(arg) < 0) axis = -axis;
    out.components.row(i) = axis.transpose();
    out.explained_variance_ratio(i) = values(i) / total;
  }
  return out;
}

struct HardMargin {
  Eigen::VectorXd w;
  double b = 0.0;
  bool found = false;
};

// Hard-margin SVM by enumerating candidate support sets of size 2 to 4 and
// solving the KKT equalities; keeps the feasible candidate of least |w|.
inline HardMargin hard_margin_by_enumeration(const Eigen::MatrixXd& x, const std::vector<int>& y) {
  const int n = static_cast<int>(x.rows());
  const int d = static_cast<int>(x.cols());
  HardMargin best;
  double best_norm = INFINITY;
  std::vector<int> set;
  std::function<void(int)> rec = [&](int start) {
    const int m = static_cast<int>(set.size());
    if (m >= 2) {
      // unknowns: alpha (m), b; equations: y_i(w·x_i - b) = 1, Σ α y = 0
      Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m + 1, m + 1);
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + 1);
      for (int r = 0; r < m; ++r) {
        for (int c = 0; c < m; ++c) {
          a(r, c) = y[static_cast<std::size_t>(set[static_cast<std::size_t>(c)])] *
                    x.row(set[static_cast<std::size_t>(c)]).dot(x.row(set[static_cast<std::size_t>(r)]));
        }
        a(r, m) = -1.0;
        rhs(r) = y[static_cast<std::size_t>(set[static_cast<std::size_t>(r)])];
        a(m, r) = y[static_cast<std::size_t>(set[static_cast<std::size_t>(r)])];
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
      if (lu.isInvertible()) {
        const Eigen::VectorXd sol = lu.solve(rhs);
        bool ok = (sol.head(m).array() >= -1e-12).all();
        Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
        for (int r = 0; r < m; ++r)
          w += sol(r) * y[static_cast<std::size_t>(set[static_cast<std::size_t>(r)])] *
               x.row(set[static_cast<std::size_t>(r)]).transpose();
        const double b = sol(m);
        for (int i = 0; ok && i < n; ++i) ok = y[static_cast<std::size_t>(i)] * (w.dot(x.row(i)) - b) >= 1.0 - 1e-9;
        if (ok && w.norm() < best_norm) {
          best_norm = w.norm();
          best = {w, b, true};
        }
      }
    }
    if (m == d + 1) return;
    for (int i = start; i < n; ++i) {
      set.push_back(i);
      rec(i + 1);
      set.pop_back();
    }
  };
  rec(0);
  return best;
}

// Dual objective Σα - ½|Σ α_i y_i x_i|² of the soft-margin problem.
inline double svm_dual_objective(const Eigen::VectorXd& alpha, const Eigen::MatrixXd& x, const std::vector<int>& y) {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) w += alpha(i) * y[static_cast<std::size_t>(i)] * x.row(i).transpose();
  return alpha.sum() - 0.5 * w.squaredNorm();
}

}  // namespace oracle
