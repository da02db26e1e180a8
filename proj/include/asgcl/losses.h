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

#ifndef ASGCL_LOSSES_H_
#define ASGCL_LOSSES_H_

#include <span>
#include <vector>

#include "asgcl/graph.h"
#include "asgcl/rng.h"

namespace asgcl {

struct LossConfig {
  double alpha = 5.0;        // lower-bound margin
  double beta = 9.0;         // upper-bound margin
  double temperature = 1.0;  // tau; 1.0 is the plain cosine exponent
  int batch = 128;
  bool use_lower = true;
  bool use_upper = true;

  // Throws ConfigError.
  void validate() const;
  friend bool operator==(const LossConfig&, const LossConfig&) = default;
};

struct LossBreakdown {
  double infonce = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double total = 0.0;
};

// u.v / (|u||v|); 0 when either norm is below 1e-12.
double cosine_sim(const Eigen::Ref<const Vector>& u,
                  const Eigen::Ref<const Vector>& v);

// Symmetric in-batch InfoNCE. For each anchor the denominator holds the
// positive, the cross-view negatives and the intra-view negatives of the
// other anchors. Averaged over both directions and the batch.
double infonce(const Matrix& h1, const Matrix& h2, std::span<const int> anchors,
               double temperature);

// Same value plus gradients with respect to h1 and h2 (rows outside the
// batch get zero).
double infonce_with_grad(const Matrix& h1, const Matrix& h2,
                         std::span<const int> anchors, double temperature,
                         Matrix& d_h1, Matrix& d_h2);

// For each anchor position, a uniformly chosen other anchor. Requires at
// least two anchors.
std::vector<int> sample_negatives(std::span<const int> anchors, Rng& rng);

// sum_a max(0, |h1_a - h2_a| - |h1_a - h2_neg(a)| + alpha)
double lower_loss(const Matrix& h1, const Matrix& h2,
                  std::span<const int> anchors, std::span<const int> negatives,
                  double alpha);

// sum_a max(0, |h1_a - h2_neg(a)| - |h1_a - h2_a| - beta)
double upper_loss(const Matrix& h1, const Matrix& h2,
                  std::span<const int> anchors, std::span<const int> negatives,
                  double beta);

struct LossResult {
  LossBreakdown breakdown;
  Matrix d_h1;
  Matrix d_h2;
  std::vector<int> negatives;  // empty when the batch has one anchor
};

// InfoNCE + lower + upper with exact gradients (hinge subgradient 0 at the
// kink). Negatives are drawn from rng unless the batch has a single anchor,
// in which case both triplet terms are 0.
LossResult total_loss(const Matrix& h1, const Matrix& h2,
                      std::span<const int> anchors, const LossConfig& cfg,
                      Rng& rng);

// Deterministic variant with the negatives supplied.
LossResult total_loss(const Matrix& h1, const Matrix& h2,
                      std::span<const int> anchors,
                      std::span<const int> negatives, const LossConfig& cfg);

}  // namespace asgcl

#endif  // ASGCL_LOSSES_H_
