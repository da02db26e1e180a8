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

#include "asgcl/encoder.h"

#include <cmath>
#include <stdexcept>
#include <string>

#include "asgcl/errors.h"

namespace asgcl {

DiffusionMatrix::DiffusionMatrix(const Matrix& adjacency, bool self_loops) {
  const Eigen::Index n = adjacency.rows();
  Vector deg = degrees(adjacency);
  if (self_loops) deg.array() += 1.0;
  Vector inv_sqrt =
      deg.unaryExpr([](double d) { return d > 0.0 ? 1.0 / std::sqrt(d) : 0.0; });

  std::vector<Eigen::Triplet<double>> entries;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (self_loops) entries.emplace_back(i, i, inv_sqrt(i) * inv_sqrt(i));
    for (Eigen::Index j = 0; j < n; ++j) {
      const double a = adjacency(i, j);
      if (a != 0.0 && i != j) {
        entries.emplace_back(i, j, inv_sqrt(i) * a * inv_sqrt(j));
      }
    }
  }
  op_.resize(n, n);
  op_.setFromTriplets(entries.begin(), entries.end());
  op_.makeCompressed();
}

Matrix diffusion(const DiffusionMatrix& s, const Matrix& h) {
  if (s.num_nodes() != h.rows()) {
    throw std::invalid_argument("diffusion: operator is " +
                                std::to_string(s.num_nodes()) +
                                " nodes but input has " +
                                std::to_string(h.rows()) + " rows");
  }
  return s.sparse() * h;
}

Matrix transform(const Matrix& w, const Matrix& h, bool final_layer) {
  if (h.cols() != w.rows()) {
    throw std::invalid_argument("transform: shape mismatch");
  }
  Matrix z = h * w;
  if (!final_layer) z = z.cwiseMax(0.0);
  return z;
}

int EncoderWeights::input_dim() const {
  return layers.empty() ? 0 : static_cast<int>(layers.front().rows());
}

int EncoderWeights::output_dim() const {
  return layers.empty() ? 0 : static_cast<int>(layers.back().cols());
}

void EncoderWeights::validate() const {
  if (layers.empty()) throw ConfigError("encoder needs at least one layer");
  if (extra_diffusions < 0) throw ConfigError("extra diffusions must be >= 0");
  for (size_t l = 1; l < layers.size(); ++l) {
    if (layers[l].rows() != layers[l - 1].cols()) {
      throw ConfigError("encoder layer " + std::to_string(l) +
                        " does not chain with the previous layer");
    }
  }
}

EncoderWeights EncoderWeights::glorot(int input_dim, int hidden_dim,
                                      int num_layers, int extra_diffusions,
                                      Rng& rng) {
  if (input_dim < 1 || hidden_dim < 1) {
    throw ConfigError("encoder dimensions must be positive");
  }
  EncoderWeights w;
  w.extra_diffusions = extra_diffusions;
  for (int l = 0; l < num_layers; ++l) {
    const int rows = l == 0 ? input_dim : hidden_dim;
    const double limit = std::sqrt(6.0 / (rows + hidden_dim));
    Matrix layer(rows, hidden_dim);
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < hidden_dim; ++j) layer(i, j) = rng.uniform(-limit, limit);
    }
    w.layers.push_back(std::move(layer));
  }
  w.validate();
  return w;
}

namespace {

Matrix run_view(const Matrix& features, const DiffusionMatrix& s,
                const EncoderWeights& weights, int extra, ViewTape* tape) {
  if (features.cols() != weights.input_dim()) {
    throw std::invalid_argument("encoder: feature dimension " +
                                std::to_string(features.cols()) +
                                " != weight input dimension " +
                                std::to_string(weights.input_dim()));
  }
  Matrix h = features;
  const int layers = weights.num_layers();
  for (int l = 0; l < layers; ++l) {
    Matrix p = diffusion(s, h);
    Matrix z = p * weights.layers[l];
    h = (l + 1 == layers) ? z : Matrix(z.cwiseMax(0.0));
    if (tape) {
      tape->diffused.push_back(std::move(p));
      tape->pre_activation.push_back(std::move(z));
    }
  }
  for (int r = 0; r < extra; ++r) h = diffusion(s, h);
  if (tape) {
    tape->diffusion = &s;
    tape->extra_diffusions = extra;
  }
  return h;
}

void backward_view(const ViewTape& tape, const EncoderWeights& weights,
                   Matrix grad, std::vector<Matrix>& out) {
  const SparseMatrix& s = tape.diffusion->sparse();
  for (int r = 0; r < tape.extra_diffusions; ++r) {
    grad = s.transpose() * grad;
  }
  const int layers = weights.num_layers();
  for (int l = layers - 1; l >= 0; --l) {
    if (l + 1 != layers) {
      grad = grad.cwiseProduct(
          (tape.pre_activation[l].array() > 0.0).cast<double>().matrix());
    }
    out[l] += tape.diffused[l].transpose() * grad;
    if (l > 0) grad = s.transpose() * (grad * weights.layers[l].transpose());
  }
}

}  // namespace

PairTape forward_pair(const Matrix& features, const DiffusionMatrix& s1,
                      const DiffusionMatrix& s2, const EncoderWeights& weights) {
  weights.validate();
  if (s1.num_nodes() != s2.num_nodes()) {
    throw std::invalid_argument("forward_pair: views differ in node count");
  }
  PairTape tape;
  tape.embeddings.h1 = run_view(features, s1, weights, 0, &tape.view1);
  tape.embeddings.h2 =
      run_view(features, s2, weights, weights.extra_diffusions, &tape.view2);
  tape.weights = &weights;
  return tape;
}

std::vector<Matrix> backward_pair(const PairTape& tape, const Matrix& d_h1,
                                  const Matrix& d_h2) {
  if (!tape.retained()) {
    throw std::logic_error("backward_pair called without a forward tape");
  }
  const EncoderWeights& weights = *tape.weights;
  if (d_h1.rows() != tape.embeddings.h1.rows() ||
      d_h1.cols() != tape.embeddings.h1.cols() ||
      d_h2.rows() != tape.embeddings.h2.rows() ||
      d_h2.cols() != tape.embeddings.h2.cols()) {
    throw std::invalid_argument("backward_pair: gradient shape mismatch");
  }
  std::vector<Matrix> grads;
  for (const Matrix& w : weights.layers) {
    grads.push_back(Matrix::Zero(w.rows(), w.cols()));
  }
  backward_view(tape.view1, weights, d_h1, grads);
  backward_view(tape.view2, weights, d_h2, grads);
  return grads;
}

Matrix embed(const Matrix& features, const DiffusionMatrix& s,
             const EncoderWeights& weights) {
  weights.validate();
  return run_view(features, s, weights, 0, nullptr);
}

}  // namespace asgcl
