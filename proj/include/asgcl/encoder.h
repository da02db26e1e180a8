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

#ifndef ASGCL_ENCODER_H_
#define ASGCL_ENCODER_H_

#include <vector>

#include <Eigen/Sparse>

#include "asgcl/graph.h"
#include "asgcl/rng.h"

namespace asgcl {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// Normalized propagation operator S = D~^{-1/2} (A + I) D~^{-1/2}. With
// self_loops = false the raw D^{-1/2} A D^{-1/2} is used and isolated nodes
// get a zero row.
class DiffusionMatrix {
 public:
  DiffusionMatrix() = default;
  explicit DiffusionMatrix(const Matrix& adjacency, bool self_loops = true);
  explicit DiffusionMatrix(const Graph& g, bool self_loops = true)
      : DiffusionMatrix(g.adjacency(), self_loops) {}

  int num_nodes() const { return static_cast<int>(op_.rows()); }
  const SparseMatrix& sparse() const { return op_; }
  Matrix dense() const { return Matrix(op_); }

 private:
  SparseMatrix op_;
};

// f(H) = S H.
Matrix diffusion(const DiffusionMatrix& s, const Matrix& h);

// g(H) = sigma(H W); rectifier on hidden layers, identity on the last one.
Matrix transform(const Matrix& w, const Matrix& h, bool final_layer);

// Transformation weights shared by both views plus the extra diffusion depth
// of view 2.
struct EncoderWeights {
  std::vector<Matrix> layers;  // d x h, then h x h ...
  int extra_diffusions = 0;    // k

  int num_layers() const { return static_cast<int>(layers.size()); }
  int input_dim() const;
  int output_dim() const;
  // Throws ConfigError on inconsistent chaining or i < 1 / k < 0.
  void validate() const;

  // Glorot-uniform layers, drawn in layer order, row-major.
  static EncoderWeights glorot(int input_dim, int hidden_dim, int num_layers,
                               int extra_diffusions, Rng& rng);

  friend bool operator==(const EncoderWeights& a, const EncoderWeights& b) {
    if (a.extra_diffusions != b.extra_diffusions ||
        a.layers.size() != b.layers.size()) {
      return false;
    }
    for (size_t l = 0; l < a.layers.size(); ++l) {
      if (a.layers[l].rows() != b.layers[l].rows() ||
          a.layers[l].cols() != b.layers[l].cols() ||
          a.layers[l] != b.layers[l]) {
        return false;
      }
    }
    return true;
  }
};

struct ViewEmbeddings {
  Matrix h1;
  Matrix h2;
};

// Activations retained by the forward pass of one view.
struct ViewTape {
  const DiffusionMatrix* diffusion = nullptr;
  std::vector<Matrix> diffused;        // S H_{l-1}
  std::vector<Matrix> pre_activation;  // (S H_{l-1}) W_l
  int extra_diffusions = 0;
};

struct PairTape {
  ViewTape view1;
  ViewTape view2;
  ViewEmbeddings embeddings;
  const EncoderWeights* weights = nullptr;
  bool retained() const { return weights != nullptr; }
};

// H1 = g_i o f o ... o g_1 o f (X) on s1; H2 = f^[k] o (same) on s2 with the
// same weights. The tape keeps pointers to s1, s2 and weights; they must
// outlive it.
PairTape forward_pair(const Matrix& features, const DiffusionMatrix& s1,
                      const DiffusionMatrix& s2, const EncoderWeights& weights);

// Gradient of <dH1, H1> + <dH2, H2> with respect to every shared layer.
std::vector<Matrix> backward_pair(const PairTape& tape, const Matrix& d_h1,
                                  const Matrix& d_h2);

// View-1 composition on one graph (used for downstream evaluation).
Matrix embed(const Matrix& features, const DiffusionMatrix& s,
             const EncoderWeights& weights);

}  // namespace asgcl

#endif  // ASGCL_ENCODER_H_
