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

#ifndef ASGCL_GRAPH_H_
#define ASGCL_GRAPH_H_

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace asgcl {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Edge = std::pair<int, int>;

// Undirected graph on dense storage: symmetric {0,1} adjacency with zero
// diagonal, an n x d feature matrix and optional per-node class labels.
class Graph {
 public:
  Graph() = default;

  // Validates the adjacency invariants; throws DataError on violation.
  Graph(Matrix adjacency, Matrix features,
        std::optional<std::vector<int>> labels = std::nullopt);

  int num_nodes() const { return static_cast<int>(adjacency_.rows()); }
  int num_features() const { return static_cast<int>(features_.cols()); }
  const Matrix& adjacency() const { return adjacency_; }
  const Matrix& features() const { return features_; }
  const std::optional<std::vector<int>>& labels() const { return labels_; }
  bool has_labels() const { return labels_.has_value(); }
  int num_classes() const;

  // Undirected edges (i < j), row-major order.
  std::vector<Edge> edges() const;
  long num_edges() const;

  // Copy with the same features/labels and a different adjacency.
  Graph with_adjacency(Matrix adjacency) const;
  Graph with_features(Matrix features) const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.adjacency_ == b.adjacency_ && a.features_ == b.features_ &&
           a.labels_ == b.labels_;
  }

 private:
  Matrix adjacency_;
  Matrix features_;
  std::optional<std::vector<int>> labels_;
};

// Builds a graph from undirected pairs; both orientations are set and
// duplicates collapse. n is taken from the feature row count.
Graph build_graph(std::span<const Edge> pairs, Matrix features,
                  std::optional<std::vector<int>> labels = std::nullopt);

// Row sums of an adjacency (weighted adjacencies are allowed).
Vector degrees(const Matrix& adjacency);

// I - D^{-1/2} W D^{-1/2}, with d^{-1/2} := 0 where d <= 0. Accepts weighted
// symmetric W so that relaxed (expected) augmentations can be normalized too.
Matrix sym_norm_laplacian(const Matrix& adjacency);
inline Matrix sym_norm_laplacian(const Graph& g) {
  return sym_norm_laplacian(g.adjacency());
}

struct EigenDecomposition {
  Vector eigenvalues;   // ascending
  Matrix eigenvectors;  // orthonormal columns, column k pairs with value k
};

// Symmetric eigensolver. Throws NumericError on non-convergence or
// asymmetric input.
EigenDecomposition eigendecompose(const Matrix& symmetric);

// Ascending eigenvalues only.
Vector eigenvalues(const Matrix& symmetric);

// ||a - b||_F. Throws std::invalid_argument on shape mismatch.
double frobenius_distance(const Matrix& a, const Matrix& b);

}  // namespace asgcl

#endif  // ASGCL_GRAPH_H_
