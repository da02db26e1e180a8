// Copyright 2026 The asgcl Authors.
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

#include "asgcl/graph.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "asgcl/errors.h"

namespace asgcl {

Graph::Graph(Matrix adjacency, Matrix features,
             std::optional<std::vector<int>> labels)
    : adjacency_(std::move(adjacency)),
      features_(std::move(features)),
      labels_(std::move(labels)) {
  const Eigen::Index n = adjacency_.rows();
  if (adjacency_.cols() != n) throw DataError("adjacency must be square");
  if (features_.rows() != n) {
    std::ostringstream msg;
    msg << "feature row count " << features_.rows() << " != node count " << n;
    throw DataError(msg.str());
  }
  if (labels_ && static_cast<Eigen::Index>(labels_->size()) != n) {
    throw DataError("label count does not match node count");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (adjacency_(i, i) != 0.0) throw DataError("adjacency has a self-loop");
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double a = adjacency_(i, j);
      if (a != adjacency_(j, i)) throw DataError("adjacency is not symmetric");
      if (a != 0.0 && a != 1.0) throw DataError("adjacency entry not in {0,1}");
    }
  }
}

int Graph::num_classes() const {
  if (!labels_ || labels_->empty()) return 0;
  return *std::max_element(labels_->begin(), labels_->end()) + 1;
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  const int n = num_nodes();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (adjacency_(i, j) != 0.0) out.emplace_back(i, j);
    }
  }
  return out;
}

long Graph::num_edges() const {
  return static_cast<long>(std::llround(adjacency_.sum() / 2.0));
}

Graph Graph::with_adjacency(Matrix adjacency) const {
  return Graph(std::move(adjacency), features_, labels_);
}

Graph Graph::with_features(Matrix features) const {
  return Graph(adjacency_, std::move(features), labels_);
}

Graph build_graph(std::span<const Edge> pairs, Matrix features,
                  std::optional<std::vector<int>> labels) {
  const int n = static_cast<int>(features.rows());
  Matrix adjacency = Matrix::Zero(n, n);
  for (const auto& [i, j] : pairs) {
    if (i < 0 || j < 0 || i >= n || j >= n) {
      std::ostringstream msg;
      msg << "edge (" << i << ", " << j << ") out of range for n = " << n;
      throw DataError(msg.str());
    }
    if (i == j) throw DataError("self-loop pair (" + std::to_string(i) + ")");
    adjacency(i, j) = 1.0;
    adjacency(j, i) = 1.0;
  }
  return Graph(std::move(adjacency), std::move(features), std::move(labels));
}

Vector degrees(const Matrix& adjacency) { return adjacency.rowwise().sum(); }

Matrix sym_norm_laplacian(const Matrix& adjacency) {
  const Eigen::Index n = adjacency.rows();
  Vector inv_sqrt = degrees(adjacency).unaryExpr(
      [](double d) { return d > 0.0 ? 1.0 / std::sqrt(d) : 0.0; });
  Matrix lap = -(inv_sqrt.asDiagonal() * adjacency * inv_sqrt.asDiagonal());
  lap.diagonal().array() += 1.0;
  // Exact symmetry; the diagonal scaling can differ in the last bit.
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) lap(j, i) = lap(i, j);
  }
  return lap;
}

namespace {

void check_symmetric(const Matrix& m) {
  if (m.rows() != m.cols()) throw NumericError("eigendecompose: not square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * scale) {
    std::ostringstream msg;
    msg << "eigendecompose: matrix not symmetric (max |M - M^T| = " << asym
        << ")";
    throw NumericError(msg.str());
  }
}

std::string condition_report(const Matrix& m) {
  std::ostringstream msg;
  msg << "n = " << m.rows() << ", max|entry| = " << m.cwiseAbs().maxCoeff()
      << ", finite = " << (m.allFinite() ? "yes" : "no");
  return msg.str();
}

}  // namespace

EigenDecomposition eigendecompose(const Matrix& symmetric) {
  check_symmetric(symmetric);
  if (symmetric.rows() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetric,
                                               Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw NumericError("eigensolver did not converge: " +
                       condition_report(symmetric));
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Vector eigenvalues(const Matrix& symmetric) {
  check_symmetric(symmetric);
  if (symmetric.rows() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetric,
                                               Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericError("eigensolver did not converge: " +
                       condition_report(symmetric));
  }
  return solver.eigenvalues();
}

double frobenius_distance(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("frobenius_distance: shape mismatch");
  }
  return (a - b).norm();
}

}  // namespace asgcl
